//! Generalized exponential polynomials Σ c(t)·2^{(pβ²+q)n}.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::bigfloat::BigFloat;
use super::ratfun::RatFun;
use super::ring::Field;
use super::{BigRat, NumericError};

/// Exponent pβ² + q, read as the base-2 growth rate per unit n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ExpPair {
    pub p: i64,
    pub q: i64,
}

impl ExpPair {
    pub const ZERO: ExpPair = ExpPair { p: 0, q: 0 };

    pub const fn new(p: i64, q: i64) -> Self {
        ExpPair { p, q }
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }

    pub fn scale(&self, n: i64) -> Self {
        ExpPair {
            p: self.p * n,
            q: self.q * n,
        }
    }

    pub fn value_f64(&self, beta_sq: f64) -> f64 {
        self.p as f64 * beta_sq + self.q as f64
    }

    pub fn value_rational(&self, beta_sq: &BigRat) -> BigRat {
        beta_sq * BigRat::from_integer(self.p.into()) + BigRat::from_integer(self.q.into())
    }

    pub fn value_bigfloat(&self, beta_sq: &BigFloat) -> BigFloat {
        let prec = beta_sq.precision();
        beta_sq * &BigFloat::from_i64(self.p, prec) + BigFloat::from_i64(self.q, prec)
    }
}

impl Add for ExpPair {
    type Output = ExpPair;
    fn add(self, o: ExpPair) -> ExpPair {
        ExpPair {
            p: self.p + o.p,
            q: self.q + o.q,
        }
    }
}

impl Sub for ExpPair {
    type Output = ExpPair;
    fn sub(self, o: ExpPair) -> ExpPair {
        ExpPair {
            p: self.p - o.p,
            q: self.q - o.q,
        }
    }
}

impl Neg for ExpPair {
    type Output = ExpPair;
    fn neg(self) -> ExpPair {
        ExpPair {
            p: -self.p,
            q: -self.q,
        }
    }
}

impl fmt::Display for ExpPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p, self.q) {
            (0, q) => write!(f, "{q}"),
            (p, 0) => write!(f, "{p}b^2"),
            (p, q) if q < 0 => write!(f, "{p}b^2-{}", -q),
            (p, q) => write!(f, "{p}b^2+{q}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct GenPoly {
    terms: BTreeMap<ExpPair, RatFun>,
}

impl GenPoly {
    pub fn zero() -> Self {
        GenPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(e: ExpPair, c: RatFun) -> Self {
        let mut g = Self::zero();
        g.add_term(e, c);
        g
    }

    pub fn add_term(&mut self, e: ExpPair, c: RatFun) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpPair, &RatFun)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: ExpPair) -> Option<&RatFun> {
        self.terms.get(&e)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &RatFun) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    /// Sum of all coefficients, i.e. the value at n = 0.
    pub fn coefficient_sum(&self) -> RatFun {
        self.terms.values().fold(RatFun::zero(), |acc, c| &acc + c)
    }

    /// Value at depth n in a field where `pow2` realises 2^{pβ²+q}.
    pub fn evaluate<F: Field>(&self, field: &F, n: u64) -> Result<F::Elem, NumericError> {
        let t = field.pow2(ExpPair::new(1, 0));
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let coeff = c.eval(field, &t)?;
            let growth = field.pow2(e.scale(n as i64));
            acc = field.add(&acc, &field.mul(&coeff, &growth));
        }
        Ok(acc)
    }
}

impl Add<&GenPoly> for &GenPoly {
    type Output = GenPoly;
    fn add(self, rhs: &GenPoly) -> GenPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Mul<&GenPoly> for &GenPoly {
    type Output = GenPoly;
    fn mul(self, rhs: &GenPoly) -> GenPoly {
        let mut out = GenPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(*e1 + *e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]*2^(({e})n)")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenPoly({self})")
    }
}

/// Closed form of Σ_{λ=0}^{n−1} 2^{aλ} = (2^{an} − 1)/(2^a − 1) as a two-term GenPoly.
pub fn geometric_sum(a: ExpPair) -> Result<GenPoly, NumericError> {
    if a.is_zero() {
        return Err(NumericError::DegenerateExponent);
    }
    let den = &RatFun::two_pow(a) - &RatFun::one();
    let inv = den.recip()?;
    let mut g = GenPoly::monomial(a, inv.clone());
    g.add_term(ExpPair::ZERO, -&inv);
    Ok(g)
}

/// Σ_{λ=0}^{n−1} 2^{aλ} evaluated in a field. The flag is set when 2^a = 1
/// there, in which case the sum is n.
pub fn geometric_sum_at<F: Field>(field: &F, a: ExpPair, n: u64) -> (F::Elem, bool) {
    weighted_geometric_sum(field, a, 0, n).expect("s = 0 is supported")
}

/// Σ_{λ=0}^{n−1} (n−λ−1)^s·2^{aλ} for s ∈ {0, 1, 2}. The flag marks the
/// degenerate branch 2^a = 1.
pub fn weighted_geometric_sum<F: Field>(
    field: &F,
    a: ExpPair,
    s: u32,
    n: u64,
) -> Result<(F::Elem, bool), NumericError> {
    if s > 2 {
        return Err(NumericError::UnsupportedWeight(s));
    }
    let x = field.pow2(a);
    let one = field.one();
    let u = field.sub(&one, &x);
    let nn = field.from_int(n as i64);
    if field.is_zero(&u) {
        let n = n as i64;
        let v = match s {
            0 => n,
            1 => n * (n - 1) / 2,
            _ => (n - 1) * n * (2 * n - 1) / 6,
        };
        let v = if n == 0 { 0 } else { v };
        return Ok((field.from_int(v), true));
    }
    let inv_u = field.inv(&u).ok_or(NumericError::DivisionByZero)?;
    let xn = field.pow_u(&x, n);
    let one_minus_xn = field.sub(&one, &xn);
    let v = match s {
        // (1 − x^n)/(1 − x)
        0 => field.mul(&one_minus_xn, &inv_u),
        // n/u − (1 − x^n)/u²
        1 => {
            let inv_u2 = field.mul(&inv_u, &inv_u);
            field.sub(&field.mul(&nn, &inv_u), &field.mul(&one_minus_xn, &inv_u2))
        }
        // n²/u − 2n/u² + (2 − u)(1 − x^n)/u³
        _ => {
            let inv_u2 = field.mul(&inv_u, &inv_u);
            let inv_u3 = field.mul(&inv_u2, &inv_u);
            let n2 = field.mul(&nn, &nn);
            let two = field.from_int(2);
            let t1 = field.mul(&n2, &inv_u);
            let t2 = field.mul(&field.mul(&two, &nn), &inv_u2);
            let t3 = field.mul(&field.mul(&field.sub(&two, &u), &one_minus_xn), &inv_u3);
            field.add(&field.sub(&t1, &t2), &t3)
        }
    };
    Ok((v, false))
}

/// Direct λ-summation of the same weighted sum, used as a reference.
pub fn weighted_geometric_sum_direct<F: Field>(field: &F, a: ExpPair, s: u32, n: u64) -> F::Elem {
    let x = field.pow2(a);
    let mut acc = field.zero();
    let mut xl = field.one();
    for lambda in 0..n {
        let w = (n - lambda - 1).pow(s) as i64;
        acc = field.add(&acc, &field.mul(&field.from_int(w), &xl));
        xl = field.mul(&xl, &x);
    }
    acc
}

impl GenPoly {
    /// True when no coefficient has a rational pole at rational t.
    pub fn coefficients_defined_at(&self, t: &BigRat) -> bool {
        self.terms
            .values()
            .all(|c| !c.denom().eval_rational(t).is_zero())
    }
}
