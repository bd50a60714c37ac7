//! Large-n behaviour of MoM_n(k, β): regime classification, the
//! leading coefficients ρ, σ, τ, numeric ratio estimates, and coefficient
//! sweeps over β.

mod coefficients;
mod fixtures;
mod regime;
mod sweep;

use thiserror::Error;

use crate::engine::EngineError;
use crate::numeric::NumericError;

pub use coefficients::{
    eval_coefficient, leading_coefficient_numeric, leading_term, rho, sigma, tau,
    CoefficientMethod, LeadingTerm, NumericEstimate, NUMERIC_WINDOW,
};
pub use fixtures::{appendix_coefficient, k4_super_plot_form};
pub use regime::{classify_regime, Regime, RegimeTag, FLOAT_REGIME_TOLERANCE};
pub use sweep::{sweep, SweepConfig, SweepRow, SWEEP_CSV_HEADER};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("k must be at least {min}, got {k}")]
    UnsupportedK { k: usize, min: usize },
    #[error("k={k}, beta^2={beta_sq} is {found}, but the request needs {expected}")]
    RegimeViolation {
        k: usize,
        beta_sq: String,
        expected: RegimeTag,
        found: RegimeTag,
    },
    #[error("coefficient has a pole at beta^2 = {beta_sq}")]
    PoleAtCriticalBeta { beta_sq: String },
    #[error("no closed-form coefficient is on file for k={k} in the {regime} regime")]
    NotTranscribed { k: usize, regime: RegimeTag },
    #[error("need 1 <= n_lo < n_hi, got n_lo={n_lo}, n_hi={n_hi}")]
    InvalidRange { n_lo: usize, n_hi: usize },
    #[error("sweep needs 0 <= beta_min < beta_max and at least 2 steps, got [{beta_min}, {beta_max}] with {steps}")]
    InvalidSweep {
        beta_min: f64,
        beta_max: f64,
        steps: usize,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl From<NumericError> for AsymptoticsError {
    fn from(e: NumericError) -> Self {
        AsymptoticsError::Engine(e.into())
    }
}
