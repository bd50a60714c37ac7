use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::numeric::{BetaSq, BigRat, NumericError, Poly, RatFun, RingTag, Value};

use super::{mom_dp_series, mom_symbolic, EngineError};

/// How the coefficients of a [`MomPolynomial`] were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyMethod {
    /// Closed form specialised at integer t = 2^{β²}.
    Symbolic,
    /// Interpolation through exact DP values, used when a closed-form
    /// coefficient has a pole at the integer t.
    Interpolated,
}

/// MoM_n(k, β) = Σ_r a_r·X^r with X = 2^n, for integer k and β.
#[derive(Clone, Debug, PartialEq)]
pub struct MomPolynomial {
    pub k: usize,
    pub beta: u32,
    pub coefficients: BTreeMap<u64, BigRat>,
    pub method: PolyMethod,
}

impl MomPolynomial {
    pub fn degree(&self) -> u64 {
        self.coefficients.keys().next_back().copied().unwrap_or(0)
    }

    pub fn leading_coefficient(&self) -> BigRat {
        self.coefficients
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(BigRat::zero)
    }

    pub fn eval_at(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        let mut prev = self.degree();
        for (d, c) in self.coefficients.iter().rev() {
            acc *= num_traits::pow(x.clone(), (prev - d) as usize);
            acc += c;
            prev = *d;
        }
        acc * num_traits::pow(x.clone(), prev as usize)
    }

    /// Value at depth n, i.e. at X = 2^n.
    pub fn eval_depth(&self, n: u32) -> BigRat {
        let x = BigRat::from_integer(num_traits::pow(num_bigint::BigInt::from(2), n as usize));
        self.eval_at(&x)
    }

    /// (degree, coefficient) pairs, highest degree first.
    pub fn rows(&self) -> Vec<(u64, BigRat)> {
        self.coefficients
            .iter()
            .rev()
            .map(|(d, c)| (*d, c.clone()))
            .collect()
    }
}

/// Exact polynomial in X = 2^n of degree k²β² − k + 1.
pub fn mom_polynomial(k: usize, beta: u32) -> Result<MomPolynomial, EngineError> {
    if k == 0 {
        return Err(EngineError::NonPositiveK);
    }
    let b2 = (beta as i64) * (beta as i64);
    let expected = (k * k) as i64 * b2 - k as i64 + 1;
    let t = BigRat::from_integer(num_traits::pow(num_bigint::BigInt::from(2), b2 as usize));
    let poly = match from_closed_form(k, b2, &t)? {
        Some(coefficients) => MomPolynomial {
            k,
            beta,
            coefficients,
            method: PolyMethod::Symbolic,
        },
        None => {
            log::warn!(
                "resonant coefficient at k={k}, beta={beta}; interpolating exact DP values instead"
            );
            interpolate(k, beta, expected as usize)?
        }
    };
    let found = poly.degree() as i64;
    if found != expected || !poly.leading_coefficient().is_positive() {
        return Err(EngineError::DegreeLaw {
            k,
            beta,
            found,
            expected,
        });
    }
    Ok(poly)
}

// Collapses exponents (p, q) to integer degrees pβ² + q, summing the
// coefficient functions of each degree before evaluating at t. Returns
// None if a summed coefficient still has a pole at t.
fn from_closed_form(
    k: usize,
    b2: i64,
    t: &BigRat,
) -> Result<Option<BTreeMap<u64, BigRat>>, EngineError> {
    let g = mom_symbolic(k)?;
    let mut grouped: BTreeMap<i64, RatFun> = BTreeMap::new();
    for (e, c) in g.terms() {
        let d = e.p * b2 + e.q;
        let entry = grouped.entry(d).or_insert_with(RatFun::zero);
        *entry = &*entry + c;
    }
    let mut out = BTreeMap::new();
    for (d, c) in grouped {
        if c.is_zero() {
            continue;
        }
        let v = match c.eval_rational(t) {
            Ok(v) => v,
            Err(NumericError::DivisionByZero) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        if v.is_zero() {
            continue;
        }
        if d < 0 {
            // a genuine 2^{−|d|n} term would contradict polynomiality
            return Ok(None);
        }
        out.insert(d as u64, v);
    }
    Ok(Some(out))
}

fn interpolate(k: usize, beta: u32, degree: usize) -> Result<MomPolynomial, EngineError> {
    let beta_sq = BetaSq::integer((beta as i64) * (beta as i64));
    let checks = 2;
    let series = mom_dp_series(k, degree + checks, &beta_sq, RingTag::Rational)?;
    let exact: Vec<BigRat> = series
        .into_iter()
        .map(|v| match v {
            Value::Rational(q) => q,
            _ => unreachable!("rational ring yields rationals"),
        })
        .collect();
    let x = |n: usize| BigRat::from_integer(num_traits::pow(num_bigint::BigInt::from(2), n));
    let points: Vec<(BigRat, BigRat)> = (0..=degree).map(|n| (x(n), exact[n].clone())).collect();
    let p = Poly::interpolate(&points);
    for (n, value) in exact.iter().enumerate().skip(degree + 1) {
        if &p.eval_rational(&x(n)) != value {
            let found = p.degree().map_or(-1, |d| d as i64);
            return Err(EngineError::DegreeLaw {
                k,
                beta,
                found,
                expected: degree as i64,
            });
        }
    }
    let coefficients = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| (d as u64, c.clone()))
        .collect();
    Ok(MomPolynomial {
        k,
        beta,
        coefficients,
        method: PolyMethod::Interpolated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn documented_polynomials() {
        let p = mom_polynomial(2, 1).unwrap();
        assert_eq!(p.rows(), vec![(3, q(3, 2)), (2, q(-1, 2))]);
        let p = mom_polynomial(1, 3).unwrap();
        assert_eq!(p.rows(), vec![(9, q(1, 1))]);
    }

    #[test]
    fn interpolation_agrees_with_closed_form() {
        let sym = mom_polynomial(3, 1).unwrap();
        let interp = interpolate(3, 1, 7).unwrap();
        assert_eq!(sym.coefficients, interp.coefficients);
        assert_eq!(interp.method, PolyMethod::Interpolated);
    }
}
