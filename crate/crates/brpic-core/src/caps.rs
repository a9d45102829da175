/// Size limits for the exact algorithms.
///
/// Everything in this crate works on dense multiplication tables, so the
/// caps exist to fail loudly instead of grinding on inputs the algorithms
/// were never meant for. `BRPIC_MAX_ORDER` raises (or lowers) the analysis
/// and bimodule caps together.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Largest group order accepted for analysis (subgroups, Schur, ...).
    pub analysis: usize,
    /// Largest order for constructed direct products.
    pub product: usize,
    /// Largest |G| for invertible-bimodule enumeration over G x G^op.
    pub bimodule: usize,
    /// Largest BrPic order for which the identification catalog is built.
    pub catalog: usize,
    /// Largest |A| for the orthogonal-group oracle on A + dual(A).
    pub oracle: usize,
    /// Guard against automorphism groups too large to enumerate.
    pub max_automorphisms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            analysis: 64,
            product: 1024,
            bimodule: 32,
            catalog: 48,
            oracle: 8,
            max_automorphisms: 100_000,
        }
    }
}

impl Caps {
    /// Default caps, with `BRPIC_MAX_ORDER` applied when set.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var("BRPIC_MAX_ORDER") {
            if let Ok(n) = v.trim().parse::<usize>() {
                caps.analysis = n;
                caps.bimodule = n;
                caps.product = caps.product.max(n.saturating_mul(n));
            }
        }
        caps
    }
}
