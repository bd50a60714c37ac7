use rayon::prelude::*;

use crate::numeric::{BetaSq, BigFloat, Value};

use super::coefficients::{leading_term, numeric_term, CoefficientMethod};
use super::regime::{classify_regime, Regime};
use super::AsymptoticsError;

pub const SWEEP_CSV_HEADER: &str = "beta,beta_sq,regime,exponent,n_power,coefficient,method";

/// Uniform grid over β with `steps` points, endpoints included.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub k: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    pub steps: usize,
    pub precision: usize,
    /// Grid points with |β² − 1/m| below this (m ≤ k) are snapped to 1/m exactly.
    pub pole_tolerance: f64,
}

impl SweepConfig {
    pub fn new(k: usize, beta_min: f64, beta_max: f64, steps: usize) -> Self {
        SweepConfig {
            k,
            beta_min,
            beta_max,
            steps,
            precision: crate::numeric::DEFAULT_PRECISION,
            pole_tolerance: 1e-9,
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        let span = self.beta_max - self.beta_min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.beta_max
                } else {
                    self.beta_min + span * (i as f64) / last
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub beta_sq: BetaSq,
    pub regime: Regime,
    pub coefficient: Value,
    pub method: CoefficientMethod,
    pub error: Option<BigFloat>,
}

impl SweepRow {
    /// Growth rate pβ² + q of the leading term.
    pub fn exponent(&self) -> f64 {
        match &self.beta_sq {
            BetaSq::Exact(q) => {
                let v = self.regime.exponent.value_rational(q);
                BigFloat::from_rational(&v, 128).to_f64()
            }
            BetaSq::Float(x) => self.regime.exponent.value_bigfloat(x).to_f64(),
        }
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.beta,
            self.beta_sq.to_f64(),
            self.regime.tag.as_str(),
            self.exponent(),
            self.regime.n_power,
            self.coefficient.to_f64(),
            self.method.as_str()
        )
    }
}

// β² for a grid point, snapped to 1/m when it lies within tolerance.
fn snapped_beta_sq(beta: f64, cfg: &SweepConfig) -> (BetaSq, Option<usize>) {
    let sq = beta * beta;
    for m in 1..=cfg.k {
        if (sq - 1.0 / m as f64).abs() <= cfg.pole_tolerance {
            return (BetaSq::ratio(1, m as i64), Some(m));
        }
    }
    (BetaSq::from_beta(beta, cfg.precision), None)
}

fn row(beta: f64, cfg: &SweepConfig) -> Result<SweepRow, AsymptoticsError> {
    let (beta_sq, snapped) = snapped_beta_sq(beta, cfg);
    let (regime, coefficient, method, error) = match snapped {
        // 1/√m with m < k: the closed-form coefficients have poles here
        Some(m) if m < cfg.k => {
            let (v, method, err) = numeric_term(cfg.k, &beta_sq, cfg.precision)?;
            (classify_regime(cfg.k, &beta_sq), v, method, err)
        }
        _ => {
            let lt = leading_term(cfg.k, &beta_sq, cfg.precision)?;
            (lt.regime, lt.coefficient, lt.method, lt.error)
        }
    };
    Ok(SweepRow {
        beta,
        beta_sq,
        regime,
        coefficient,
        method,
        error,
    })
}

/// Regime and leading coefficient at every grid point.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, AsymptoticsError> {
    if cfg.k == 0 {
        return Err(AsymptoticsError::UnsupportedK { k: cfg.k, min: 1 });
    }
    if cfg.steps < 2
        || cfg.beta_min.partial_cmp(&cfg.beta_max) != Some(std::cmp::Ordering::Less)
        || cfg.beta_min < 0.0
        || !cfg.beta_max.is_finite()
    {
        return Err(AsymptoticsError::InvalidSweep {
            beta_min: cfg.beta_min,
            beta_max: cfg.beta_max,
            steps: cfg.steps,
        });
    }
    cfg.grid().into_par_iter().map(|b| row(b, cfg)).collect()
}
