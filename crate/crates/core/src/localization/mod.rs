//! Torus weights at fixed points and the localization sums built on them:
//! `α_n` and its truncated-flavor variants, the unit and tangent-twisted
//! integrals, the Hilbert-scheme integral and the residue sum.

mod cache;
mod ops;
mod sum;
mod weights;

pub use cache::{sha256_hex, AlphaCache, CacheKey};
pub use ops::{
    alpha_fingerprint, alpha_n, alpha_n_at, beta_fingerprint, alternate_twist, beta_n, default_twist, hilbert_closed_form, hilbert_integral,
    psi_other, residue_expected, residue_sum, residue_sum_via_hilbert, PsiKind,
};
pub use sum::{fixed_point_term, fixed_point_terms, localize, localize_at, Integrand, Workers};
pub use weights::{
    matter_factors, tangent_factors, taut_character, Context, FixedPointWeights, MAX_RANK,
};

use thiserror::Error;

use crate::exactalg::ExactError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalizationError {
    #[error("rank {0} is not supported (1 ≤ r ≤ {MAX_RANK})")]
    UnsupportedRank(usize),
    #[error("{flavors} flavors requested, the context has {max}")]
    TooManyFlavors { flavors: usize, max: usize },
    #[error("zero tangent weight at {0}")]
    DegenerateWeight(String),
    #[error("{zeros} zero tautological weights at {tuple}, expected {expected}")]
    ZeroWeightMiscount { tuple: String, zeros: usize, expected: usize },
    #[error("cache entry {0} is corrupt")]
    CacheCorrupt(String),
    #[error("cache i/o: {0}")]
    CacheIo(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
