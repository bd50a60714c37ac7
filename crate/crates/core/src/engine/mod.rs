//! MoM_n(k, β) by dynamic programming, in closed form, and as an exact
//! polynomial in 2^n.

mod polynomial;
mod symbolic;
mod table;

use thiserror::Error;

use crate::numeric::{NumericError, RingTag};

pub use polynomial::{mom_polynomial, MomPolynomial, PolyMethod};
pub use symbolic::{evaluate_genpoly, mom_symbolic, symbolic_coefficient};
pub use table::{mom_dp, mom_dp_series, MomentTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("k must be at least 1")]
    NonPositiveK,
    #[error("ring {ring} cannot represent beta^2 = {beta_sq}")]
    RingMismatch { ring: RingTag, beta_sq: String },
    #[error("closed-form coefficient has a pole at beta^2 = {beta_sq}; use the dynamic programme")]
    PoleAtCriticalBeta { beta_sq: String },
    #[error("polynomial for k={k}, beta={beta} has degree {found}, expected {expected}")]
    DegreeLaw {
        k: usize,
        beta: u32,
        found: i64,
        expected: i64,
    },
    #[error(transparent)]
    Numeric(NumericError),
}

impl From<NumericError> for EngineError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::RingMismatch { ring, beta_sq } => {
                EngineError::RingMismatch { ring, beta_sq }
            }
            other => EngineError::Numeric(other),
        }
    }
}

/// Binomial coefficient as u64; small arguments only.
pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}
