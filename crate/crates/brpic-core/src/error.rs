use thiserror::Error;

/// Errors shared by all library modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { msg: String, pos: usize },

    #[error("{what} exceeds cap: got {got}, cap {cap}")]
    CapExceeded { what: String, got: usize, cap: usize },

    #[error("subgroup is not normal in its parent")]
    NotNormal,

    #[error("subgroup is not abelian")]
    NotAbelian,

    #[error("{0} is not a subgroup of the expected group")]
    NotSubgroup(String),

    #[error("map is not bijective")]
    NotBijective,

    #[error("map is not a homomorphism")]
    NotHomomorphism,

    #[error("mismatched group or coefficient context: {0}")]
    Mismatch(String),

    #[error("group action is not a homomorphism into Aut")]
    ActionNotHomomorphism,

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::InvalidTable(_) => 2,
            Error::CapExceeded { .. } => 3,
            Error::CrossCheck(_) => 4,
            _ => 1,
        }
    }
}
