use std::sync::Mutex;

use num_traits::ToPrimitive;

use crate::numeric::ring::MAX_AUTO_RADICAL;
use crate::numeric::{
    geometric_sum, BetaSq, ExpPair, Field, FloatRing, GenPoly, NumericError, RadicalRing, RatFun,
    RationalRing, Value,
};

use super::{binomial, EngineError};

static SYMBOLIC: Mutex<Vec<GenPoly>> = Mutex::new(Vec::new());

/// Closed form of MoM_n(k, β) as Σ c_{p,q}(t)·2^{(pβ²+q)n}, t = 2^{β²}.
///
/// Valid wherever no coefficient denominator vanishes; results are cached.
pub fn mom_symbolic(k: usize) -> Result<GenPoly, EngineError> {
    if k == 0 {
        return Err(EngineError::NonPositiveK);
    }
    let mut cache = SYMBOLIC.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(GenPoly::monomial(ExpPair::new(1, 0), RatFun::one()));
    }
    while cache.len() < k {
        let next = next_level(&cache)?;
        cache.push(next);
    }
    Ok(cache[k - 1].clone())
}

fn next_level(lower: &[GenPoly]) -> Result<GenPoly, EngineError> {
    let j = lower.len() + 1;
    let jj = j as i64;
    let top = ExpPair::new(jj * jj, 1 - jj);
    // Σ_i C(j,i)·2^{2iβ²(i−j)}·M(i)·M(j−i), as a GenPoly in the depth below the split
    let mut inner = GenPoly::zero();
    for i in 1..=j / 2 {
        let ii = i as i64;
        let mult = if 2 * i == j { 1 } else { 2 };
        let c = RatFun::two_pow(ExpPair::new(2 * ii * (ii - jj), 0)).scale(
            &crate::numeric::BigRat::from_integer((binomial(j, i) * mult).into()),
        );
        let prod = &lower[i - 1] * &lower[j - i - 1];
        inner = &inner + &prod.scale(&c);
    }
    // 2^{j²β²−j}·Σ_{λ<n} 2^{top·λ}·c·2^{E(n−1−λ)}
    //   = c·2^{j²β²−j}·2^{−E}·2^{En}·Σ_λ 2^{(top−E)λ}
    let pre = RatFun::two_pow(ExpPair::new(jj * jj, -jj));
    let mut out = GenPoly::zero();
    for (e, c) in inner.terms() {
        let shift = top - *e;
        let geo = geometric_sum(shift)?;
        let lead = &(&pre * c) * &RatFun::two_pow(-*e);
        out = &out + &(&GenPoly::monomial(*e, lead) * &geo);
    }
    out.add_term(top, RatFun::one());
    Ok(out)
}

/// The coefficient of 2^{en} in the closed form for k, or zero.
pub fn symbolic_coefficient(k: usize, e: ExpPair) -> Result<RatFun, EngineError> {
    Ok(mom_symbolic(k)?
        .coefficient(e)
        .cloned()
        .unwrap_or_else(RatFun::zero))
}

fn pole(beta_sq: &BetaSq) -> EngineError {
    EngineError::PoleAtCriticalBeta {
        beta_sq: beta_sq.to_string(),
    }
}

fn eval_in<F: Field>(
    field: &F,
    g: &GenPoly,
    n: u64,
    beta_sq: &BetaSq,
) -> Result<Value, EngineError> {
    match g.evaluate(field, n) {
        Ok(v) => Ok(field.to_value(&v)),
        Err(NumericError::DivisionByZero) => Err(pole(beta_sq)),
        Err(e) => Err(e.into()),
    }
}

/// Value of a closed form at (β², n).
///
/// Exact when β² is rational with a small denominator (the pole test is
/// then exact too); otherwise a float at `prec` bits, where a denominator
/// smaller than 2^{−prec/2} counts as a pole.
pub fn evaluate_genpoly(
    g: &GenPoly,
    beta_sq: &BetaSq,
    n: u64,
    prec: usize,
) -> Result<Value, EngineError> {
    match beta_sq {
        BetaSq::Exact(q) if q.is_integer() => eval_in(&RationalRing::new(beta_sq)?, g, n, beta_sq),
        BetaSq::Exact(q) if q.denom().to_u32().is_some_and(|m| m <= MAX_AUTO_RADICAL) => {
            eval_in(&RadicalRing::for_beta_sq(beta_sq)?, g, n, beta_sq)
        }
        _ => eval_in(&FloatRing::new(beta_sq, prec)?, g, n, beta_sq),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{BigRat, Poly};

    fn rf(num: &[i64], den: &[i64]) -> RatFun {
        let p = |v: &[i64]| {
            Poly::from_coeffs(v.iter().map(|&x| BigRat::from_integer(x.into())).collect())
        };
        RatFun::new(p(num), p(den)).unwrap()
    }

    #[test]
    fn low_order_closed_forms() {
        let g1 = mom_symbolic(1).unwrap();
        assert_eq!(g1, GenPoly::monomial(ExpPair::new(1, 0), RatFun::one()));
        let g2 = mom_symbolic(2).unwrap();
        assert_eq!(g2.len(), 2);
        assert_eq!(
            g2.coefficient(ExpPair::new(4, -1)),
            Some(&rf(&[-1, 0, 1], &[-2, 0, 1]))
        );
        assert_eq!(
            g2.coefficient(ExpPair::new(2, 0)),
            Some(&rf(&[-1], &[-2, 0, 1]))
        );
    }

    #[test]
    fn evaluation_and_poles() {
        let g2 = mom_symbolic(2).unwrap();
        let v = evaluate_genpoly(&g2, &BetaSq::integer(1), 1, 256).unwrap();
        assert_eq!(v, Value::Rational(BigRat::from_integer(10.into())));
        assert!(matches!(
            evaluate_genpoly(&g2, &BetaSq::ratio(1, 2), 3, 256),
            Err(EngineError::PoleAtCriticalBeta { .. })
        ));
        let near = BetaSq::from_beta(std::f64::consts::FRAC_1_SQRT_2, 256);
        // 0.7071067811865476² is 1/2 only to about 1e-16: not a pole at 256 bits
        assert!(evaluate_genpoly(&g2, &near, 3, 256).is_ok());
    }

    #[test]
    fn closed_form_sums_to_one_at_depth_zero() {
        for k in 1..=4 {
            assert_eq!(mom_symbolic(k).unwrap().coefficient_sum(), RatFun::one());
        }
    }
}
