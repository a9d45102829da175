//! Exact computation of Brauer-Picard group data for pointed fusion
//! categories Vec_G over a finite group G.
//!
//! The pipeline: finite group arithmetic on dense multiplication tables,
//! second cohomology with finite coefficients via exact linear algebra over
//! Z/mZ, Lagrangian subcategories of the center parameterized by pairs
//! (normal abelian N, invariant alternating bicharacter), invertible
//! bimodule data over G x G^op through Goursat triples, and finally the
//! induced permutation action that pins down |BrPic(Vec_G)| and candidate
//! isomorphism types.

pub mod analysis;
pub mod bimodule;
pub mod caps;
pub mod cohomology;
pub mod error;
pub mod group;
pub mod lagrangian;
pub mod zmod;

pub use caps::Caps;
pub use error::{Error, Result};
