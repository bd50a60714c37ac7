use crate::engine::{mom_dp_series, symbolic_coefficient};
use crate::numeric::{
    BetaSq, BigFloat, BigRat, ExpPair, Field, NumericError, RadicalRing, RatFun, Ring, Value,
};

use super::regime::{classify_regime, Regime, RegimeTag};
use super::AsymptoticsError;

/// Depth window used when a closed-form coefficient is unavailable.
pub const NUMERIC_WINDOW: (usize, usize) = (40, 60);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientMethod {
    Rho,
    Sigma,
    Tau,
    Numeric,
}

impl CoefficientMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoefficientMethod::Rho => "rho",
            CoefficientMethod::Sigma => "sigma",
            CoefficientMethod::Tau => "tau",
            CoefficientMethod::Numeric => "numeric",
        }
    }
}

/// MoM_n(k, β) ~ coefficient·n^{n_power}·2^{(pβ²+q)n}.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingTerm {
    pub regime: Regime,
    pub coefficient: Value,
    pub method: CoefficientMethod,
    /// Error proxy, present for numeric estimates only.
    pub error: Option<BigFloat>,
}

impl LeadingTerm {
    pub fn exponent(&self) -> ExpPair {
        self.regime.exponent
    }

    pub fn n_power(&self) -> u32 {
        self.regime.n_power
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericEstimate {
    pub regime: Regime,
    pub value: BigFloat,
    /// |r_{n_hi} − r_{n_lo}|
    pub error: BigFloat,
    /// r_n for n = n_lo..=n_hi
    pub ratios: Vec<BigFloat>,
}

fn pole(beta_sq: &BetaSq) -> AsymptoticsError {
    AsymptoticsError::PoleAtCriticalBeta {
        beta_sq: beta_sq.to_string(),
    }
}

fn require(k: usize, beta_sq: &BetaSq, expected: RegimeTag) -> Result<Regime, AsymptoticsError> {
    let regime = classify_regime(k, beta_sq);
    if regime.tag != expected {
        return Err(AsymptoticsError::RegimeViolation {
            k,
            beta_sq: beta_sq.to_string(),
            expected,
            found: regime.tag,
        });
    }
    Ok(regime)
}

// ρ(1..=k) by ρ(j) = π(j)/(2^{jβ²} − 2^{j²β²−j+1}),
// π(j) = 2^{j²β²−j} Σ_i C(j,i)·2^{2iβ²(i−j)}·ρ(i)·ρ(j−i).
fn rho_table<F: Field>(f: &F, k: usize) -> Option<Vec<F::Elem>> {
    let mut rho = vec![f.one()];
    for j in 2..=k {
        let jj = j as i64;
        let mut s = f.zero();
        for i in 1..j {
            let ii = i as i64;
            let c = f.mul(
                &f.from_int(binom(j, i)),
                &f.pow2(ExpPair::new(2 * ii * (ii - jj), 0)),
            );
            s = f.add(&s, &f.mul(&c, &f.mul(&rho[i - 1], &rho[j - i - 1])));
        }
        let pi = f.mul(&f.pow2(ExpPair::new(jj * jj, -jj)), &s);
        let den = f.sub(
            &f.pow2(ExpPair::new(jj, 0)),
            &f.pow2(ExpPair::new(jj * jj, 1 - jj)),
        );
        if f.is_zero(&den) {
            return None;
        }
        rho.push(f.div(&pi, &den)?);
    }
    Some(rho)
}

fn binom(n: usize, k: usize) -> i64 {
    crate::engine::binomial(n, k) as i64
}

/// Sub-critical coefficient: MoM_n(k, β) ~ ρ(k, β)·2^{kβ²n} when kβ² < 1.
///
/// Exact in ℚ(2^{1/m}) for rational β² = a/m, otherwise a float at `prec` bits.
pub fn rho(k: usize, beta_sq: &BetaSq, prec: usize) -> Result<Value, AsymptoticsError> {
    if k == 0 {
        return Err(AsymptoticsError::UnsupportedK { k, min: 1 });
    }
    require(k, beta_sq, RegimeTag::SubCritical)?;
    with_ring!(beta_sq, beta_sq.auto_ring(prec), |f| {
        let table = rho_table(&f, k).ok_or_else(|| pole(beta_sq))?;
        Ok(f.to_value(&table[k - 1]))
    })
}

/// Critical coefficient σ(k): MoM_n(k, 1/√k) ~ σ(k)·n·2^n.
///
/// σ(k) = ½ Σ_j C(k,j)·2^{2j(j−k)/k}·ρ(j)·ρ(k−j) with ρ at β² = 1/k,
/// computed exactly in ℚ(2^{1/k}). σ(1) is 1 by convention.
pub fn sigma(k: usize) -> Result<Value, AsymptoticsError> {
    if k == 0 {
        return Err(AsymptoticsError::UnsupportedK { k, min: 1 });
    }
    if k == 1 {
        return Ok(Value::Rational(BigRat::from_integer(1.into())));
    }
    let beta_sq = BetaSq::ratio(1, k as i64);
    let f = RadicalRing::new(&beta_sq, k as u32)?;
    let rho = rho_table(&f, k - 1).ok_or_else(|| pole(&beta_sq))?;
    let kk = k as i64;
    let mut s = f.zero();
    for j in 1..k {
        let jj = j as i64;
        let c = f.mul(
            &f.from_int(binom(k, j)),
            &f.pow2(ExpPair::new(2 * jj * (jj - kk), 0)),
        );
        s = f.add(&s, &f.mul(&c, &f.mul(&rho[j - 1], &rho[k - j - 1])));
    }
    let half = f.from_rational(&BigRat::new(1.into(), 2.into()));
    Ok(f.to_value(&f.mul(&half, &s)))
}

/// Evaluates a coefficient function at t = 2^{β²}, exactly when possible.
pub fn eval_coefficient(
    c: &RatFun,
    beta_sq: &BetaSq,
    prec: usize,
) -> Result<Value, AsymptoticsError> {
    with_ring!(beta_sq, beta_sq.auto_ring(prec), |f| {
        let t = f.pow2(ExpPair::new(1, 0));
        match c.eval(&f, &t) {
            Ok(v) => Ok(f.to_value(&v)),
            Err(NumericError::DivisionByZero) => Err(pole(beta_sq)),
            Err(e) => Err(e.into()),
        }
    })
}

/// Super-critical coefficient: MoM_n(k, β) ~ τ(k, β)·2^{(k²β²−k+1)n}.
///
/// Read off the closed form as the coefficient of the fastest-growing term.
pub fn tau(k: usize, beta_sq: &BetaSq, prec: usize) -> Result<Value, AsymptoticsError> {
    if k == 0 {
        return Err(AsymptoticsError::UnsupportedK { k, min: 1 });
    }
    let regime = require(k, beta_sq, RegimeTag::SuperCritical)?;
    let c = symbolic_coefficient(k, regime.exponent)?;
    eval_coefficient(&c, beta_sq, prec)
}

fn growth(e: ExpPair, beta_sq: &BetaSq, n: usize, prec: usize) -> BigFloat {
    let exponent = match beta_sq {
        BetaSq::Exact(q) => BigFloat::from_rational(
            &(e.value_rational(q) * BigRat::from_integer(n.into())),
            prec,
        ),
        BetaSq::Float(x) => {
            e.value_bigfloat(&x.with_precision(prec)) * BigFloat::from_i64(n as i64, prec)
        }
    };
    BigFloat::exp2(&exponent)
}

/// Ratio estimate r_n = MoM_n / (n^s·2^{(pβ²+q)n}) over n_lo..=n_hi.
///
/// Exact DP values are used whenever β² is rational, so critical points
/// such as β² = 1/m are handled without poles.
pub fn leading_coefficient_numeric(
    k: usize,
    beta_sq: &BetaSq,
    n_lo: usize,
    n_hi: usize,
    prec: usize,
) -> Result<NumericEstimate, AsymptoticsError> {
    if k == 0 {
        return Err(AsymptoticsError::UnsupportedK { k, min: 1 });
    }
    if n_lo == 0 || n_hi <= n_lo {
        return Err(AsymptoticsError::InvalidRange { n_lo, n_hi });
    }
    let regime = classify_regime(k, beta_sq);
    if k == 1 {
        // MoM_n(1, β) = 2^{β²n} exactly
        let one = BigFloat::one(prec);
        return Ok(NumericEstimate {
            regime,
            value: one.clone(),
            error: BigFloat::zero(prec),
            ratios: vec![one; n_hi - n_lo + 1],
        });
    }
    let wp = prec + 32;
    let series = mom_dp_series(k, n_hi, beta_sq, beta_sq.auto_ring(wp))?;
    let ratios: Vec<BigFloat> = (n_lo..=n_hi)
        .map(|n| {
            let mut denom = growth(regime.exponent, beta_sq, n, wp);
            if regime.n_power > 0 {
                denom = denom * BigFloat::from_i64((n as i64).pow(regime.n_power), wp);
            }
            (series[n].to_bigfloat(wp) / denom).with_precision(prec)
        })
        .collect();
    let value = ratios.last().expect("nonempty window").clone();
    let error = (&value - &ratios[0]).abs();
    Ok(NumericEstimate {
        regime,
        value,
        error,
        ratios,
    })
}

/// Regime plus leading coefficient, falling back to ratio estimation when
/// the closed-form coefficient has a pole.
pub fn leading_term(
    k: usize,
    beta_sq: &BetaSq,
    prec: usize,
) -> Result<LeadingTerm, AsymptoticsError> {
    let regime = classify_regime(k, beta_sq);
    let (coefficient, method, error) = match regime.tag {
        RegimeTag::SubCritical => (rho(k, beta_sq, prec)?, CoefficientMethod::Rho, None),
        RegimeTag::Critical => (sigma(k)?, CoefficientMethod::Sigma, None),
        RegimeTag::SuperCritical => match tau(k, beta_sq, prec) {
            Ok(v) => (v, CoefficientMethod::Tau, None),
            Err(AsymptoticsError::PoleAtCriticalBeta { .. }) => {
                log::info!("tau({k}) has a pole at beta^2 = {beta_sq}; estimating from ratios");
                numeric_term(k, beta_sq, prec)?
            }
            Err(e) => return Err(e),
        },
    };
    Ok(LeadingTerm {
        regime,
        coefficient,
        method,
        error,
    })
}

pub(crate) fn numeric_term(
    k: usize,
    beta_sq: &BetaSq,
    prec: usize,
) -> Result<(Value, CoefficientMethod, Option<BigFloat>), AsymptoticsError> {
    let (lo, hi) = NUMERIC_WINDOW;
    let est = leading_coefficient_numeric(k, beta_sq, lo, hi, prec)?;
    Ok((
        Value::Float(est.value),
        CoefficientMethod::Numeric,
        Some(est.error),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        ((a - b) / b).abs() < tol
    }

    #[test]
    fn rho_examples() {
        assert_eq!(
            rho(1, &BetaSq::from_beta(0.9, 256), 256).unwrap().to_f64(),
            1.0
        );
        let r = rho(2, &BetaSq::from_beta(0.5, 256), 256).unwrap();
        let expect = 1.0 / (2.0 * (1.0 - 2f64.powf(-0.5)));
        assert!(close(r.to_f64(), expect, 1e-14));
        let b2 = 0.16f64;
        let t2 = 2f64.powf(2.0 * b2);
        let expect = 3.0 * t2 / ((4.0 - 2f64.powf(6.0 * b2)) * (2.0 - t2));
        assert!(close(
            rho(3, &BetaSq::from_beta(0.4, 256), 256).unwrap().to_f64(),
            expect,
            1e-14
        ));
        assert!(matches!(
            rho(2, &BetaSq::integer(1), 256),
            Err(AsymptoticsError::RegimeViolation { .. })
        ));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(
            sigma(2).unwrap().as_rational(),
            Some(BigRat::new(1.into(), 2.into()))
        );
        let expect = 3.0 / (2f64.powf(7.0 / 3.0) - 4.0);
        assert!(close(sigma(3).unwrap().to_f64(), expect, 1e-14));
        for k in 2..=6 {
            assert!(sigma(k).unwrap().is_positive(), "sigma({k})");
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(
            tau(2, &BetaSq::integer(1), 256).unwrap().as_rational(),
            Some(BigRat::new(3.into(), 2.into()))
        );
        let t3 = tau(3, &BetaSq::integer(1), 256)
            .unwrap()
            .as_rational()
            .unwrap();
        assert_eq!(
            t3,
            BigRat::new(1.into(), 1.into()) + BigRat::new(186.into(), 840.into())
        );
    }

    #[test]
    fn numeric_ratio_examples() {
        let est = leading_coefficient_numeric(2, &BetaSq::ratio(1, 2), 20, 40, 256).unwrap();
        assert!((est.value.to_f64() - 0.5).abs() < 0.03);
        assert!(est.error.to_f64() < 0.03);
        let est = leading_coefficient_numeric(1, &BetaSq::from_beta(0.37, 256), 3, 9, 256).unwrap();
        assert_eq!(est.value.to_f64(), 1.0);
        let est = leading_coefficient_numeric(3, &BetaSq::integer(1), 10, 20, 256).unwrap();
        let t = tau(3, &BetaSq::integer(1), 256).unwrap().to_f64();
        assert!(close(est.value.to_f64(), t, 5e-4));
    }
}
