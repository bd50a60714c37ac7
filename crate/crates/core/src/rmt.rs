//! Random-matrix side of the comparison: the k = 1 moments of moments of a
//! Haar unitary characteristic polynomial,
//!
//! MoM_{U(N)}(1, β) = Π_{j=1}^N Γ(j+2β)Γ(j)/Γ(j+β)²,
//!
//! and the growth exponents conjectured for general k. Under N = 2^n they
//! line up with the branching random walk.

use std::cmp::Ordering;

use num_traits::One;
use thiserror::Error;

use crate::asymptotics::{classify_regime, Regime, FLOAT_REGIME_TOLERANCE};
use crate::numeric::special::ln_gamma;
use crate::numeric::{BetaSq, BigFloat, BigRat, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RmtError {
    #[error("beta must exceed -1/2, got {0}")]
    Domain(String),
    #[error("matrix size must be at least 1")]
    ZeroSize,
    #[error("k must be positive")]
    NonPositiveK,
}

/// Π_{j=1}^N Γ(j+2β)Γ(j)/Γ(j+β)² at `prec` bits.
///
/// The j = 1 factor comes from log-gamma; later factors follow from
/// f_{j+1} = f_j·(j+2β)·j/(j+β)².
pub fn unitary_mom_k1(n: u64, beta: &BigFloat, prec: usize) -> Result<BigFloat, RmtError> {
    if n == 0 {
        return Err(RmtError::ZeroSize);
    }
    let wp = prec + 32;
    let b = beta.with_precision(wp);
    let lower = BigFloat::from_f64(-0.5, wp);
    if b.partial_cmp(&lower) != Some(Ordering::Greater) {
        return Err(RmtError::Domain(beta.to_decimal(17)));
    }
    let one = BigFloat::one(wp);
    let two_b = &b + &b;
    let mut factor =
        (ln_gamma(&(&one + &two_b)) - ln_gamma(&(&one + &b)) * BigFloat::from_i64(2, wp)).exp();
    let mut product = factor.clone();
    for j in 1..n {
        let jf = BigFloat::from_i64(j as i64, wp);
        let shifted = &jf + &b;
        factor = factor * ((&jf + &two_b) * &jf) / (&shifted * &shifted);
        product = product * &factor;
    }
    Ok(product.with_precision(prec))
}

/// Π_{0≤i,j≤β−1} (N/(i+j+1) + 1), exact for integer β.
pub fn unitary_mom_k1_integer(n: u64, beta: u32) -> BigRat {
    let nn = BigRat::from_integer(n.into());
    let mut acc = BigRat::one();
    for i in 0..beta as u64 {
        for j in 0..beta as u64 {
            acc *= &nn / BigRat::from_integer((i + j + 1).into()) + BigRat::one();
        }
    }
    acc
}

/// Interpolates N ↦ unitary_mom_k1_integer(N, β) through N = 0..=β²+1.
///
/// One more point than a degree-β² polynomial needs, so the returned
/// degree is a genuine test rather than a foregone conclusion.
pub fn integer_moment_polynomial(beta: u32) -> Poly {
    let pts: Vec<(BigRat, BigRat)> = (0..=(beta * beta + 1) as u64)
        .map(|n| {
            (
                BigRat::from_integer(n.into()),
                unitary_mom_k1_integer(n, beta),
            )
        })
        .collect();
    Poly::interpolate(&pts)
}

/// (ln M(N2) − ln M(N1)) / (ln N2 − ln N1) for M = unitary_mom_k1.
pub fn log_slope(beta: &BigFloat, n1: u64, n2: u64, prec: usize) -> Result<f64, RmtError> {
    let m1 = unitary_mom_k1(n1, beta, prec)?;
    let m2 = unitary_mom_k1(n2, beta, prec)?;
    let rise = m2.ln() - m1.ln();
    let run = BigFloat::from_i64(n2 as i64, prec).ln() - BigFloat::from_i64(n1 as i64, prec).ln();
    Ok((rise / run).to_f64())
}

/// Both sides of the correspondence for one (k, β).
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthComparison {
    pub k: usize,
    /// MoM_n ≍ n^{n_power}·2^{rate·n}
    pub brw: Regime,
    pub brw_rate: f64,
    /// MoM_{U(N)} ≍ N^{exponent}·(log N)^{log_power}
    pub rmt_exponent: f64,
    pub rmt_log_power: u32,
    /// True when N = 2^n carries one law onto the other.
    pub matches: bool,
}

// Growth of the unitary moments of moments, read from the conjectured
// trichotomy. k = 1 is exactly N^{β²} for every β.
fn rmt_growth(k: usize, beta_sq: &BetaSq) -> (f64, u32) {
    let kk = k as f64;
    let b2 = beta_sq.to_f64();
    if k == 1 {
        return (b2, 0);
    }
    let ord = match beta_sq {
        BetaSq::Exact(q) => (q * BigRat::from_integer(k.into())).cmp(&BigRat::one()),
        BetaSq::Float(_) => {
            let d = kk * b2 - 1.0;
            if d.abs() <= FLOAT_REGIME_TOLERANCE {
                Ordering::Equal
            } else {
                d.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
            }
        }
    };
    match ord {
        Ordering::Less => (kk * b2, 0),
        Ordering::Equal => (1.0, 1),
        Ordering::Greater => (kk * kk * b2 - kk + 1.0, 0),
    }
}

pub fn growth_exponent_compare(k: usize, beta_sq: &BetaSq) -> Result<GrowthComparison, RmtError> {
    if k == 0 {
        return Err(RmtError::NonPositiveK);
    }
    if beta_sq.is_negative() {
        return Err(RmtError::Domain(beta_sq.to_string()));
    }
    let brw = classify_regime(k, beta_sq);
    let brw_rate = match beta_sq {
        BetaSq::Exact(q) => BigFloat::from_rational(&brw.exponent.value_rational(q), 128).to_f64(),
        BetaSq::Float(x) => brw.exponent.value_bigfloat(x).to_f64(),
    };
    let (rmt_exponent, rmt_log_power) = rmt_growth(k, beta_sq);
    // N^a = 2^{an} and log N = n·ln 2, so powers of log N become powers of n
    let matches = (brw_rate - rmt_exponent).abs() <= 1e-12 * rmt_exponent.abs().max(1.0)
        && brw.n_power == rmt_log_power;
    Ok(GrowthComparison {
        k,
        brw,
        brw_rate,
        rmt_exponent,
        rmt_log_power,
        matches,
    })
}

/// Largest relative gap between the gamma product and the exact product
/// over N ∈ 1..=n_max, β ∈ 0..=beta_max.
pub fn dual_path_gap(n_max: u64, beta_max: u32, prec: usize) -> Result<f64, RmtError> {
    let mut worst = 0.0f64;
    for beta in 0..=beta_max {
        let b = BigFloat::from_i64(beta as i64, prec);
        for n in 1..=n_max {
            let exact = BigFloat::from_rational(&unitary_mom_k1_integer(n, beta), prec);
            let via_gamma = unitary_mom_k1(n, &b, prec)?;
            worst = worst.max(((via_gamma - &exact) / exact).abs().to_f64());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_product_examples() {
        let one = BigFloat::one(256);
        assert!((unitary_mom_k1(10, &one, 256).unwrap().to_f64() - 11.0).abs() < 1e-13);
        let half = BigFloat::from_f64(0.5, 256);
        let expect = 4.0 / std::f64::consts::PI;
        assert!((unitary_mom_k1(1, &half, 256).unwrap().to_f64() - expect).abs() < 1e-15);
        assert_eq!(
            unitary_mom_k1(5, &BigFloat::zero(256), 256)
                .unwrap()
                .to_f64(),
            1.0
        );
        assert!(unitary_mom_k1(5, &BigFloat::from_f64(-0.5, 256), 256).is_err());
    }

    #[test]
    fn integer_product_examples() {
        assert_eq!(
            unitary_mom_k1_integer(10, 1),
            BigRat::from_integer(11.into())
        );
        assert_eq!(
            unitary_mom_k1_integer(2, 2),
            BigRat::from_integer(20.into())
        );
        assert_eq!(integer_moment_polynomial(2).degree(), Some(4));
    }

    #[test]
    fn exponent_correspondence() {
        for (k, b2) in [
            (1, BetaSq::from_beta(0.7, 256)),
            (2, BetaSq::integer(1)),
            (3, BetaSq::ratio(1, 3)),
        ] {
            let c = growth_exponent_compare(k, &b2).unwrap();
            assert!(c.matches, "{c:?}");
        }
        assert_eq!(
            growth_exponent_compare(2, &BetaSq::integer(1))
                .unwrap()
                .rmt_exponent,
            3.0
        );
    }
}
