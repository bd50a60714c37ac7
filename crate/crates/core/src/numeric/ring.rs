//! Coefficient rings used by the moment computations.
//!
//! Every quantity in the recursion is built from rationals and powers
//! 2^{pβ²+q}; a ring only has to say how to realise those powers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bigfloat::{BigFloat, DEFAULT_PRECISION};
use super::genpoly::ExpPair;
use super::radical::{radical_mul, Radical};
use super::ratfun::pow2_rational;
use super::{BigRat, NumericError};

/// Largest denominator of β² for which automatic ring selection picks the
/// exact radical field.
pub const MAX_AUTO_RADICAL: u32 = 64;

#[allow(clippy::wrong_self_convention)]
pub trait Ring: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_rational(&self, q: &BigRat) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// 2^{pβ²+q}
    fn pow2(&self, e: ExpPair) -> Self::Elem;
    fn tag(&self) -> RingTag;
    fn to_value(&self, a: &Self::Elem) -> Value;

    fn from_int(&self, v: i64) -> Self::Elem {
        self.from_rational(&BigRat::from_integer(v.into()))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow_u(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

pub trait Field: Ring {
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }
}

/// Which arithmetic a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingTag {
    Rational,
    Radical(u32),
    Float(usize),
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Rational => f.write_str("rational"),
            RingTag::Radical(m) => write!(f, "radical({m})"),
            RingTag::Float(p) => write!(f, "float({p})"),
        }
    }
}

/// β², either exactly rational or a float.
#[derive(Clone, Debug, PartialEq)]
pub enum BetaSq {
    Exact(BigRat),
    Float(BigFloat),
}

impl BetaSq {
    pub fn integer(b: i64) -> Self {
        BetaSq::Exact(BigRat::from_integer(b.into()))
    }

    pub fn ratio(p: i64, m: i64) -> Self {
        BetaSq::Exact(BigRat::new(p.into(), m.into()))
    }

    /// β² from a decimal β literal: exact when the square is an integer,
    /// otherwise a float at `prec` bits.
    pub fn from_beta_decimal(s: &str, prec: usize) -> Result<Self, NumericError> {
        let beta = parse_decimal(s).ok_or_else(|| NumericError::Parse(s.to_string()))?;
        let sq = &beta * &beta;
        if sq.is_integer() {
            Ok(BetaSq::Exact(sq))
        } else {
            Ok(BetaSq::Float(BigFloat::from_rational(&sq, prec)))
        }
    }

    /// Same as [`BetaSq::from_beta_decimal`] using the shortest decimal form of `beta`.
    pub fn from_beta(beta: f64, prec: usize) -> Self {
        Self::from_beta_decimal(&format!("{beta}"), prec).expect("finite f64 has a decimal form")
    }

    pub fn from_beta_sq_f64(beta_sq: f64, prec: usize) -> Self {
        let q = parse_decimal(&format!("{beta_sq}")).expect("finite f64 has a decimal form");
        if q.is_integer() {
            BetaSq::Exact(q)
        } else {
            BetaSq::Float(BigFloat::from_rational(&q, prec))
        }
    }

    /// Parses "p/m" or an integer as an exact β².
    pub fn parse_rational(s: &str) -> Result<Self, NumericError> {
        let err = || NumericError::Parse(s.to_string());
        let s = s.trim();
        let q = match s.split_once('/') {
            Some((p, m)) => {
                let p: BigInt = p.trim().parse().map_err(|_| err())?;
                let m: BigInt = m.trim().parse().map_err(|_| err())?;
                if m.is_zero() {
                    return Err(err());
                }
                BigRat::new(p, m)
            }
            None => BigRat::from_integer(s.parse().map_err(|_| err())?),
        };
        Ok(BetaSq::Exact(q))
    }

    pub fn as_exact(&self) -> Option<&BigRat> {
        match self {
            BetaSq::Exact(q) => Some(q),
            BetaSq::Float(_) => None,
        }
    }

    pub fn to_bigfloat(&self, prec: usize) -> BigFloat {
        match self {
            BetaSq::Exact(q) => BigFloat::from_rational(q, prec),
            BetaSq::Float(x) => x.with_precision(prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_bigfloat(DEFAULT_PRECISION).to_f64()
    }

    pub fn is_negative(&self) -> bool {
        match self {
            BetaSq::Exact(q) => q.is_negative(),
            BetaSq::Float(x) => x.is_negative(),
        }
    }

    /// Rational if β² is an integer, radical if β² = a/m with small m, float otherwise.
    pub fn auto_ring(&self, prec: usize) -> RingTag {
        match self {
            BetaSq::Exact(q) if q.is_integer() => RingTag::Rational,
            BetaSq::Exact(q) => match q.denom().to_u32() {
                Some(m) if m <= MAX_AUTO_RADICAL => RingTag::Radical(m),
                _ => RingTag::Float(prec),
            },
            BetaSq::Float(_) => RingTag::Float(prec),
        }
    }
}

impl fmt::Display for BetaSq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaSq::Exact(q) => write!(f, "{q}"),
            BetaSq::Float(x) => write!(f, "{}", x.to_decimal(20)),
        }
    }
}

/// Exact rational value of a decimal literal like "-0.25", "3" or "1.5e-2".
pub fn parse_decimal(s: &str) -> Option<BigRat> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRat::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRat::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Result of a computation, tagged by the ring that produced it.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Rational(BigRat),
    Radical(Radical),
    Float(BigFloat),
}

impl Value {
    pub fn to_bigfloat(&self, prec: usize) -> BigFloat {
        match self {
            Value::Rational(q) => BigFloat::from_rational(q, prec),
            Value::Radical(r) => r.to_bigfloat(prec),
            Value::Float(x) => x.with_precision(prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_bigfloat(DEFAULT_PRECISION).to_f64()
    }

    /// Exact rational value, if the value is known exactly and is rational.
    pub fn as_rational(&self) -> Option<BigRat> {
        match self {
            Value::Rational(q) => Some(q.clone()),
            Value::Radical(r) => r.as_rational().cloned(),
            Value::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Value::Float(_))
    }

    pub fn is_positive(&self) -> bool {
        self.to_bigfloat(DEFAULT_PRECISION).is_positive()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Value::Radical(r) => write!(f, "{r}"),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Exact rationals; β² must be an integer so that 2^{pβ²+q} is rational.
#[derive(Clone, Debug)]
pub struct RationalRing {
    beta_sq: i64,
}

impl RationalRing {
    pub fn with_beta_sq(beta_sq: i64) -> Result<Self, NumericError> {
        if beta_sq < 0 {
            return Err(NumericError::NegativeBetaSq);
        }
        Ok(RationalRing { beta_sq })
    }

    pub fn new(beta_sq: &BetaSq) -> Result<Self, NumericError> {
        match beta_sq {
            BetaSq::Exact(q) if q.is_integer() => {
                let b = q.to_integer().to_i64().ok_or(NumericError::RingMismatch {
                    ring: RingTag::Rational,
                    beta_sq: q.to_string(),
                })?;
                Self::with_beta_sq(b)
            }
            other => Err(NumericError::RingMismatch {
                ring: RingTag::Rational,
                beta_sq: other.to_string(),
            }),
        }
    }

    pub fn beta_sq(&self) -> i64 {
        self.beta_sq
    }
}

impl Ring for RationalRing {
    type Elem = BigRat;

    fn zero(&self) -> BigRat {
        BigRat::zero()
    }
    fn one(&self) -> BigRat {
        BigRat::one()
    }
    fn from_rational(&self, q: &BigRat) -> BigRat {
        q.clone()
    }
    fn add(&self, a: &BigRat, b: &BigRat) -> BigRat {
        a + b
    }
    fn neg(&self, a: &BigRat) -> BigRat {
        -a
    }
    fn sub(&self, a: &BigRat, b: &BigRat) -> BigRat {
        a - b
    }
    fn mul(&self, a: &BigRat, b: &BigRat) -> BigRat {
        a * b
    }
    fn pow2(&self, e: ExpPair) -> BigRat {
        pow2_rational(e.p * self.beta_sq + e.q)
    }
    fn tag(&self) -> RingTag {
        RingTag::Rational
    }
    fn to_value(&self, a: &BigRat) -> Value {
        Value::Rational(a.clone())
    }
}

impl Field for RationalRing {
    fn is_zero(&self, a: &BigRat) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRat) -> Option<BigRat> {
        (!a.is_zero()).then(|| a.recip())
    }
}

/// ℚ(2^{1/m}) with β² = a/m, so 2^{pβ²+q} = 2^{(pa+qm)/m}.
#[derive(Clone, Debug)]
pub struct RadicalRing {
    m: u32,
    a: i64,
}

impl RadicalRing {
    /// Accepts any m for which m·β² is an integer.
    pub fn new(beta_sq: &BetaSq, m: u32) -> Result<Self, NumericError> {
        let mismatch = || NumericError::RingMismatch {
            ring: RingTag::Radical(m),
            beta_sq: beta_sq.to_string(),
        };
        if m == 0 {
            return Err(NumericError::InvalidRootIndex);
        }
        let q = beta_sq.as_exact().ok_or_else(mismatch)?;
        if q.is_negative() {
            return Err(NumericError::NegativeBetaSq);
        }
        let scaled = q * BigRat::from_integer(m.into());
        if !scaled.is_integer() {
            return Err(mismatch());
        }
        let a = scaled.to_integer().to_i64().ok_or_else(mismatch)?;
        Ok(RadicalRing { m, a })
    }

    /// Ring for β² in lowest terms a/m.
    pub fn for_beta_sq(beta_sq: &BetaSq) -> Result<Self, NumericError> {
        let q = beta_sq
            .as_exact()
            .ok_or_else(|| NumericError::RingMismatch {
                ring: RingTag::Radical(0),
                beta_sq: beta_sq.to_string(),
            })?;
        let m = q.denom().to_u32().ok_or(NumericError::InvalidRootIndex)?;
        Self::new(beta_sq, m)
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

impl Ring for RadicalRing {
    type Elem = Radical;

    fn zero(&self) -> Radical {
        Radical::zero(self.m)
    }
    fn one(&self) -> Radical {
        Radical::one(self.m)
    }
    fn from_rational(&self, q: &BigRat) -> Radical {
        Radical::from_rational(self.m, q.clone())
    }
    fn add(&self, a: &Radical, b: &Radical) -> Radical {
        a.try_add(b).expect("operands share the ring's root index")
    }
    fn neg(&self, a: &Radical) -> Radical {
        a.neg()
    }
    fn sub(&self, a: &Radical, b: &Radical) -> Radical {
        a.try_sub(b).expect("operands share the ring's root index")
    }
    fn mul(&self, a: &Radical, b: &Radical) -> Radical {
        radical_mul(a, b).expect("operands share the ring's root index")
    }
    fn pow2(&self, e: ExpPair) -> Radical {
        Radical::two_pow(self.m, e.p * self.a + e.q * self.m as i64)
    }
    fn tag(&self) -> RingTag {
        RingTag::Radical(self.m)
    }
    fn to_value(&self, a: &Radical) -> Value {
        Value::Radical(a.clone())
    }
}

impl Field for RadicalRing {
    fn is_zero(&self, a: &Radical) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Radical) -> Option<Radical> {
        a.inverse().ok()
    }
}

/// Binary floating point at a fixed precision.
#[derive(Clone, Debug)]
pub struct FloatRing {
    beta_sq: BigFloat,
    t: BigFloat,
    prec: usize,
}

impl FloatRing {
    pub fn new(beta_sq: &BetaSq, prec: usize) -> Result<Self, NumericError> {
        if beta_sq.is_negative() {
            return Err(NumericError::NegativeBetaSq);
        }
        let prec = prec.max(super::bigfloat::MIN_PRECISION);
        let b = beta_sq.to_bigfloat(prec + 32);
        let t = BigFloat::exp2(&b);
        Ok(FloatRing {
            beta_sq: b.with_precision(prec),
            t,
            prec,
        })
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn beta_sq(&self) -> &BigFloat {
        &self.beta_sq
    }

    /// Threshold below which a value counts as zero: 2^{−prec/2}.
    pub fn zero_threshold(&self) -> BigFloat {
        BigFloat::pow2_int(-(self.prec as i64 / 2), self.prec)
    }
}

impl Ring for FloatRing {
    type Elem = BigFloat;

    fn zero(&self) -> BigFloat {
        BigFloat::zero(self.prec)
    }
    fn one(&self) -> BigFloat {
        BigFloat::one(self.prec)
    }
    fn from_rational(&self, q: &BigRat) -> BigFloat {
        BigFloat::from_rational(q, self.prec)
    }
    fn from_int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.prec)
    }
    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a + b
    }
    fn neg(&self, a: &BigFloat) -> BigFloat {
        -a
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a - b
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a * b
    }
    fn pow2(&self, e: ExpPair) -> BigFloat {
        let tp = if e.p == 0 {
            BigFloat::one(self.prec + 32)
        } else {
            self.t.powi(e.p)
        };
        (tp * BigFloat::pow2_int(e.q, self.prec + 32)).with_precision(self.prec)
    }
    fn tag(&self) -> RingTag {
        RingTag::Float(self.prec)
    }
    fn to_value(&self, a: &BigFloat) -> Value {
        Value::Float(a.clone())
    }
}

impl Field for FloatRing {
    fn is_zero(&self, a: &BigFloat) -> bool {
        a.abs() < self.zero_threshold()
    }
    fn inv(&self, a: &BigFloat) -> Option<BigFloat> {
        (!a.is_zero()).then(|| a.recip())
    }
}
