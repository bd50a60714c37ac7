//! Rational functions in t = 2^{β²} over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::genpoly::ExpPair;
use super::poly::Poly;
use super::ring::Field;
use super::{BigRat, NumericError};

/// num/den with gcd(num, den) = 1 and den monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, NumericError> {
        if den.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.lead().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFun { num, den }
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    /// t^p·2^q, the symbolic value of 2^{pβ²+q}.
    pub fn two_pow(e: ExpPair) -> Self {
        let two_q = pow2_rational(e.q);
        if e.p >= 0 {
            RatFun {
                num: Poly::monomial(e.p as usize, two_q),
                den: Poly::one(),
            }
        } else {
            RatFun {
                num: Poly::constant(two_q),
                den: Poly::monomial((-e.p) as usize, BigRat::one()),
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn eval_rational(&self, t: &BigRat) -> Result<BigRat, NumericError> {
        let d = self.den.eval_rational(t);
        if d.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(self.num.eval_rational(t) / d)
    }

    /// Evaluates at t in a field; `Err` when the denominator is zero there.
    pub fn eval<F: Field>(&self, field: &F, t: &F::Elem) -> Result<F::Elem, NumericError> {
        let d = self.den.eval(field, t);
        if field.is_zero(&d) {
            return Err(NumericError::DivisionByZero);
        }
        let inv = field.inv(&d).ok_or(NumericError::DivisionByZero)?;
        Ok(field.mul(&self.num.eval(field, t), &inv))
    }
}

pub(crate) fn pow2_rational(q: i64) -> BigRat {
    let two = num_bigint::BigInt::from(2);
    if q >= 0 {
        BigRat::from_integer(num_traits::pow(two, q as usize))
    } else {
        BigRat::new(
            num_bigint::BigInt::one(),
            num_traits::pow(two, (-q) as usize),
        )
    }
}

impl Add<&RatFun> for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        let a = self.den.div_rem(&g).0;
        let b = rhs.den.div_rem(&g).0;
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFun::reduce(num, &a * &rhs.den)
    }
}

impl Sub<&RatFun> for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul<&RatFun> for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        // cross-cancel first to keep intermediate degrees small
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n1 = self.num.div_rem(&g1).0;
        let d2 = rhs.den.div_rem(&g1).0;
        let n2 = rhs.num.div_rem(&g2).0;
        let d1 = self.den.div_rem(&g2).0;
        RatFun::reduce(&n1 * &n2, &d1 * &d2)
    }
}

impl Div<&RatFun> for &RatFun {
    type Output = RatFun;
    /// Panics on division by the zero function.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RatFun) -> RatFun {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}
