//! Special functions at multi-precision.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bigfloat::BigFloat;
use super::BigRat;

static BERNOULLI: Mutex<Vec<BigRat>> = Mutex::new(Vec::new());

/// Bernoulli number B_n (B_1 = −1/2 convention).
pub fn bernoulli(n: usize) -> BigRat {
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(BigRat::one());
    }
    while cache.len() <= n {
        let m = cache.len();
        // B_m = −1/(m+1) Σ_{k<m} C(m+1, k) B_k
        let mut binom = BigInt::one();
        let mut acc = BigRat::zero();
        for (k, b) in cache.iter().enumerate() {
            acc += BigRat::from_integer(binom.clone()) * b;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        cache.push(-acc / BigRat::from_integer(BigInt::from(m + 1)));
    }
    cache[n].clone()
}

/// ln Γ(x) for x > 0, by upward shift and the Stirling series.
pub fn ln_gamma(x: &BigFloat) -> BigFloat {
    assert!(x.is_positive(), "ln_gamma needs a positive argument");
    let prec = x.precision();
    let wp = prec + 32;
    let mut z = x.with_precision(wp);
    let z0 = BigFloat::from_i64((prec as i64 / 4).max(24), wp);
    let mut shift_prod = BigFloat::one(wp);
    let one = BigFloat::one(wp);
    while z < z0 {
        shift_prod = shift_prod * &z;
        z = z + &one;
    }
    let half = BigFloat::from_rational(&BigRat::new(1.into(), 2.into()), wp);
    let two_pi = BigFloat::pi(wp) * BigFloat::from_i64(2, wp);
    let mut acc = (&z - &half) * z.ln() - &z + &half * two_pi.ln();
    let z2 = &z * &z;
    let mut zpow = z.clone();
    let eps = BigFloat::pow2_int(-(wp as i64), wp);
    for k in 1..400usize {
        let b = bernoulli(2 * k);
        let denom = BigRat::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let c = BigFloat::from_rational(&(b / denom), wp);
        let term = c / &zpow;
        acc = acc + &term;
        if term.abs() < eps {
            break;
        }
        zpow = zpow * &z2;
    }
    if shift_prod != one {
        acc = acc - shift_prod.ln();
    }
    acc.with_precision(prec)
}
