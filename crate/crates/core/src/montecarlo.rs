//! Plain Monte Carlo for E[Z_n^k].
//!
//! Each trial draws one N(0, ½ ln 2) increment per edge of the depth-n tree,
//! forms Z_n = 2^{−n} Σ_l e^{2βX_n(l)} and the estimator averages Z_n^k over
//! trials. Draws are addressed by (seed, trial, edge) in a ChaCha8 keystream,
//! so every trial is reproducible on its own and results do not depend on
//! the number of threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use thiserror::Error;

/// Bits of the uniform variate fed to the inverse normal CDF.
pub const UNIFORM_BITS: usize = 53;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonteCarloError {
    #[error("need at least one trial")]
    NoTrials,
    #[error("k must be positive")]
    NonPositiveK,
    #[error("trial {trial} is out of range for {trials} trials")]
    TrialOutOfRange { trial: u64, trials: u64 },
    #[error("depth {0} is too large to simulate")]
    DepthTooLarge(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub beta: f64,
    pub trials: u64,
    pub seed: u64,
    /// Bits per uniform draw; values above [`UNIFORM_BITS`] are capped.
    pub precision: usize,
    /// [`MomentEstimate::heavy_tail`] is raised when k²β² exceeds this.
    pub heavy_tail_threshold: f64,
}

impl SimConfig {
    pub fn new(n: usize, beta: f64, trials: u64, seed: u64) -> Self {
        SimConfig {
            n,
            beta,
            trials,
            seed,
            precision: UNIFORM_BITS,
            heavy_tail_threshold: 1.0,
        }
    }

    fn validate(&self) -> Result<(), MonteCarloError> {
        if self.trials == 0 {
            return Err(MonteCarloError::NoTrials);
        }
        if self.n > 30 {
            return Err(MonteCarloError::DepthTooLarge(self.n));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentEstimate {
    pub k: usize,
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
    /// The estimator's variance is not expected to be finite in the limit;
    /// treat mean and stderr with suspicion.
    pub heavy_tail: bool,
}

/// Variance of a single increment.
pub fn increment_variance() -> f64 {
    0.5 * std::f64::consts::LN_2
}

pub fn heavy_tail_warning(k: usize, beta: f64, threshold: f64) -> bool {
    let kb = k as f64 * beta;
    kb * kb > threshold
}

const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.38357751867269e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];

/// Standard normal quantile: rational approximation plus one Halley step
/// against erfc, accurate to roughly machine precision on (0, 1).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    const P_LOW: f64 = 0.02425;
    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

fn rng_for(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

// Uniform on (0, 1) from the top `bits` bits, centred in its cell.
fn uniform(raw: u64, bits: usize) -> f64 {
    let m = raw >> (64 - bits);
    (m as f64 + 0.5) / (bits as f64).exp2()
}

/// The increment on edge `edge` of trial `trial`. Edges are numbered in
/// level order: the node at level m, position i hangs off edge 2^m − 2 + i.
pub fn edge_draw(config: &SimConfig, trial: u64, edge: u64) -> f64 {
    let mut rng = rng_for(config.seed, trial);
    rng.set_word_pos(2 * edge as u128);
    gaussian(&mut rng, config.precision)
}

fn gaussian(rng: &mut ChaCha8Rng, precision: usize) -> f64 {
    let bits = precision.clamp(1, UNIFORM_BITS);
    increment_variance().sqrt() * inverse_normal_cdf(uniform(rng.next_u64(), bits))
}

/// All 2^{n+1} − 2 increments of a trial in edge order.
pub fn edge_draws(config: &SimConfig, trial: u64) -> Vec<f64> {
    let mut rng = rng_for(config.seed, trial);
    let edges = (1u64 << (config.n + 1)) - 2;
    (0..edges)
        .map(|_| gaussian(&mut rng, config.precision))
        .collect()
}

/// ln Z_n for one trial.
pub fn sample_log_partition_function(
    config: &SimConfig,
    trial: u64,
) -> Result<f64, MonteCarloError> {
    config.validate()?;
    if trial >= config.trials {
        return Err(MonteCarloError::TrialOutOfRange {
            trial,
            trials: config.trials,
        });
    }
    let mut rng = rng_for(config.seed, trial);
    let mut level = vec![0.0f64];
    for _ in 0..config.n {
        let mut next = Vec::with_capacity(2 * level.len());
        for &x in &level {
            next.push(x + gaussian(&mut rng, config.precision));
            next.push(x + gaussian(&mut rng, config.precision));
        }
        level = next;
    }
    let two_beta = 2.0 * config.beta;
    let shift = level
        .iter()
        .map(|&x| two_beta * x)
        .fold(f64::NEG_INFINITY, f64::max);
    let terms: Vec<f64> = level
        .iter()
        .map(|&x| (two_beta * x - shift).exp())
        .collect();
    Ok(shift + pairwise_sum(&terms).ln() - config.n as f64 * std::f64::consts::LN_2)
}

/// Z_n for one trial.
pub fn sample_partition_function(config: &SimConfig, trial: u64) -> Result<f64, MonteCarloError> {
    sample_log_partition_function(config, trial).map(f64::exp)
}

/// Sum with O(log n) error growth and a fixed evaluation order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Sample mean and standard error of Z_n^k for each k in `ks`, sharing
/// one set of trials.
pub fn estimate_moments(
    config: &SimConfig,
    ks: &[usize],
) -> Result<Vec<MomentEstimate>, MonteCarloError> {
    config.validate()?;
    if ks.contains(&0) {
        return Err(MonteCarloError::NonPositiveK);
    }
    let logs: Vec<f64> = (0..config.trials)
        .into_par_iter()
        .map(|t| sample_log_partition_function(config, t))
        .collect::<Result<_, _>>()?;
    let count = config.trials as f64;
    Ok(ks
        .iter()
        .map(|&k| {
            let vals: Vec<f64> = logs.iter().map(|&l| (k as f64 * l).exp()).collect();
            let mean = pairwise_sum(&vals) / count;
            let stderr = if config.trials > 1 {
                let sq: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
                (pairwise_sum(&sq) / (count - 1.0) / count).sqrt()
            } else {
                0.0
            };
            MomentEstimate {
                k,
                mean,
                stderr,
                trials: config.trials,
                seed: config.seed,
                heavy_tail: heavy_tail_warning(k, config.beta, config.heavy_tail_threshold),
            }
        })
        .collect())
}

pub fn estimate_mom(config: &SimConfig, k: usize) -> Result<MomentEstimate, MonteCarloError> {
    Ok(estimate_moments(config, &[k])?.remove(0))
}
