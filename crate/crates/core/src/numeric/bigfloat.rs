//! Multi-precision binary floating point.
//!
//! Thin value type over `astro_float` that remembers its working precision,
//! so mixed expressions run at the larger of the two operand precisions.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat as Raw, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as IntSign};
use num_traits::Zero;

use super::BigRat;

pub const DEFAULT_PRECISION: usize = 256;
pub const MIN_PRECISION: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

fn clamp_prec(prec: usize) -> usize {
    prec.max(MIN_PRECISION)
}

#[derive(Clone)]
pub struct BigFloat {
    raw: Raw,
    prec: usize,
}

impl BigFloat {
    fn wrap(raw: Raw, prec: usize) -> Self {
        BigFloat { raw, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        let prec = clamp_prec(prec);
        let mut raw = Raw::from_i64(v, prec.max(64));
        let _ = raw.set_precision(prec, RM);
        Self::wrap(raw, prec)
    }

    pub fn from_f64(v: f64, prec: usize) -> Self {
        let prec = clamp_prec(prec);
        Self::wrap(Raw::from_f64(v, prec), prec)
    }

    /// Correctly rounded conversion of an arbitrary integer.
    pub fn from_bigint(v: &BigInt, prec: usize) -> Self {
        let prec = clamp_prec(prec);
        if v.is_zero() {
            return Self::zero(prec);
        }
        let words = v.magnitude().to_u64_digits();
        let sign = if v.sign() == IntSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let bits = (words.len() * 64) as i32;
        let mut raw = Raw::from_words(&words, sign, bits);
        let _ = raw.set_precision(prec, RM);
        Self::wrap(raw, prec)
    }

    pub fn from_rational(q: &BigRat, prec: usize) -> Self {
        let prec = clamp_prec(prec);
        let guard = prec + 32;
        let num = Self::from_bigint(q.numer(), guard);
        let den = Self::from_bigint(q.denom(), guard);
        Self::wrap(num.raw.div(&den.raw, prec, RM), prec)
    }

    /// Parses a decimal literal such as `-1.25e-3`.
    pub fn parse(s: &str, prec: usize) -> Option<Self> {
        let prec = clamp_prec(prec);
        let raw = with_consts(|cc| Raw::parse(s.trim(), Radix::Dec, prec, RM, cc));
        if raw.is_nan() {
            None
        } else {
            Some(Self::wrap(raw, prec))
        }
    }

    pub fn pi(prec: usize) -> Self {
        let prec = clamp_prec(prec);
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn ln2(prec: usize) -> Self {
        let prec = clamp_prec(prec);
        Self::wrap(with_consts(|cc| cc.ln_2(prec, RM)), prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        let prec = clamp_prec(prec);
        let mut raw = self.raw.clone();
        let _ = raw.set_precision(prec, RM);
        Self::wrap(raw, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.raw.is_nan() && !self.raw.is_inf()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.raw.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.raw.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.raw.abs(), self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.raw.reciprocal(self.prec, RM), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.raw.sqrt(self.prec, RM), self.prec)
    }

    pub fn ln(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.raw.ln(p, RM, cc)), p)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.raw.exp(p, RM, cc)), p)
    }

    pub fn log2(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.raw.log2(p, RM, cc)), p)
    }

    pub fn pow(&self, e: &BigFloat) -> Self {
        let p = self.prec.max(e.prec);
        Self::wrap(with_consts(|cc| self.raw.pow(&e.raw, p, RM, cc)), p)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(&self, e: i64) -> Self {
        let r = Self::wrap(
            self.raw.powi(e.unsigned_abs() as usize, self.prec, RM),
            self.prec,
        );
        if e < 0 {
            r.recip()
        } else {
            r
        }
    }

    /// 2^x.
    pub fn exp2(x: &BigFloat) -> Self {
        let p = x.prec;
        let two = Raw::from_i64(2, p);
        Self::wrap(with_consts(|cc| two.pow(&x.raw, p, RM, cc)), p)
    }

    /// Exact power of two, 2^e, at the given precision.
    pub fn pow2_int(e: i64, prec: usize) -> Self {
        let prec = clamp_prec(prec);
        let mut raw = Raw::from_i64(1, prec.max(64));
        let _ = raw.set_precision(prec, RM);
        raw.set_exponent(e as i32 + 1);
        Self::wrap(raw, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.raw.is_nan() {
            return f64::NAN;
        }
        if self.raw.is_inf() {
            return if self.raw.is_positive() {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if self.raw.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exp, _)) = self.raw.as_raw_parts() else {
            return f64::NAN;
        };
        // mantissa is 0.m with the top bit of the last word set
        let hi = words[words.len() - 1];
        let sticky = words[..words.len() - 1].iter().any(|w| *w != 0);
        let top53 = hi >> 11;
        let tail = hi & 0x7ff;
        let half = 1u64 << 10;
        let mut m = top53 as f64;
        if tail > half || (tail == half && (sticky || top53 & 1 == 1)) {
            m += 1.0;
        }
        let v = libm::scalbn(m, exp - 53);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        if self.is_zero() {
            return "0".to_string();
        }
        let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 8;
        let r = self.with_precision(bits.max(MIN_PRECISION));
        let s = with_consts(|cc| r.raw.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        trim_mantissa(&s, digits)
    }
}

// Turns astro-float's "1.2345678e+3" style output into a shortened form.
fn trim_mantissa(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let point = mant.find('.').unwrap_or(mant.len());
    let int_part = &mant[..point];
    let frac_part = if point < mant.len() {
        &mant[point + 1..]
    } else {
        ""
    };
    let mut all: String = format!("{int_part}{frac_part}");
    let mut dexp = int_part.len() as i64 + exp;
    let lead = all.len() - all.trim_start_matches('0').len();
    all.drain(..lead);
    dexp -= lead as i64;
    if all.is_empty() {
        return "0".into();
    }
    if all.len() > digits {
        let round_up = all.as_bytes()[digits] >= b'5';
        all.truncate(digits);
        if round_up {
            let mut bytes = all.into_bytes();
            let mut i = bytes.len();
            loop {
                if i == 0 {
                    bytes.insert(0, b'1');
                    dexp += 1;
                    bytes.pop();
                    break;
                }
                i -= 1;
                if bytes[i] == b'9' {
                    bytes[i] = b'0';
                } else {
                    bytes[i] += 1;
                    break;
                }
            }
            all = String::from_utf8(bytes).expect("ascii digits");
        }
    }
    let all = all.trim_end_matches('0');
    let all = if all.is_empty() { "0" } else { all };
    let sign = if neg { "-" } else { "" };
    if (-6..=21).contains(&dexp) {
        if dexp <= 0 {
            format!("{sign}0.{}{}", "0".repeat((-dexp) as usize), all)
        } else if dexp as usize >= all.len() {
            format!("{sign}{}{}", all, "0".repeat(dexp as usize - all.len()))
        } else {
            format!("{sign}{}.{}", &all[..dexp as usize], &all[dexp as usize..])
        }
    } else {
        let (h, t) = all.split_at(1);
        let t = if t.is_empty() {
            String::new()
        } else {
            format!(".{t}")
        };
        format!("{sign}{h}{t}e{}", dexp - 1)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 / std::f64::consts::LOG2_10).floor() as usize;
        f.write_str(&self.to_decimal(f.precision().unwrap_or(digits.max(17))))
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, {} bits)", self.to_decimal(30), self.prec)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.raw.cmp(&other.raw) == Some(0)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.raw.cmp(&other.raw).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                let p = self.prec.max(rhs.prec);
                BigFloat::wrap(self.raw.$m(&rhs.raw, p, RM), p)
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                (&self).$m(rhs)
            }
        }
        impl $tr<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::wrap(Raw::neg(&self.raw), self.prec)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::wrap(Raw::neg(&self.raw), self.prec)
    }
}

/// Relative difference |a − b| / max(|a|, |b|), zero when both vanish.
pub fn rel_diff(a: &BigFloat, b: &BigFloat) -> BigFloat {
    let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    if scale.is_zero() {
        return BigFloat::zero(a.prec);
    }
    (a - b).abs() / scale
}

/// Exact rational value of a finite BigFloat.
pub fn to_rational(x: &BigFloat) -> Option<BigRat> {
    if !x.is_finite() {
        return None;
    }
    if x.is_zero() {
        return Some(BigRat::zero());
    }
    let (words, _, sign, exp, _) = x.raw.as_raw_parts()?;
    let mant = BigInt::from_biguint(
        IntSign::Plus,
        num_bigint::BigUint::from_slice(
            &words
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        ),
    );
    let shift = exp as i64 - (words.len() as i64 * 64);
    let two = BigInt::from(2);
    let mut q = if shift >= 0 {
        BigRat::from_integer(mant * num_traits::pow(two, shift as usize))
    } else {
        BigRat::new(mant, num_traits::pow(two, (-shift) as usize))
    };
    if sign == Sign::Neg {
        q = -q;
    }
    Some(q)
}
