use std::fmt;

use num_traits::One;

use crate::numeric::{BetaSq, BigFloat, BigRat, ExpPair};

/// |kβ² − 1| below this counts as critical when β² is a float.
pub const FLOAT_REGIME_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    SubCritical,
    Critical,
    SuperCritical,
}

impl RegimeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::SubCritical => "sub",
            RegimeTag::Critical => "critical",
            RegimeTag::SuperCritical => "super",
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Growth law MoM_n(k, β) ≍ n^{n_power}·2^{(pβ²+q)n}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regime {
    pub tag: RegimeTag,
    pub exponent: ExpPair,
    pub n_power: u32,
}

/// Compares kβ² with 1: exactly for rational β², with a
/// [`FLOAT_REGIME_TOLERANCE`] band for floats.
///
/// k = 1 at β² = 1 is tagged critical but grows as 2^n with no factor of
/// n, since MoM_n(1, β) = 2^{β²n} identically.
pub fn classify_regime(k: usize, beta_sq: &BetaSq) -> Regime {
    let kk = k as i64;
    let ord = match beta_sq {
        BetaSq::Exact(q) => (q * BigRat::from_integer(kk.into())).cmp(&BigRat::one()),
        BetaSq::Float(x) => {
            let prec = x.precision();
            let d = x * &BigFloat::from_i64(kk, prec) - BigFloat::one(prec);
            if d.abs() <= BigFloat::from_f64(FLOAT_REGIME_TOLERANCE, prec) {
                std::cmp::Ordering::Equal
            } else if d.is_negative() {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        }
    };
    match ord {
        std::cmp::Ordering::Less => Regime {
            tag: RegimeTag::SubCritical,
            exponent: ExpPair::new(kk, 0),
            n_power: 0,
        },
        std::cmp::Ordering::Equal => Regime {
            tag: RegimeTag::Critical,
            exponent: ExpPair::new(0, 1),
            n_power: if k == 1 { 0 } else { 1 },
        },
        std::cmp::Ordering::Greater => Regime {
            tag: RegimeTag::SuperCritical,
            exponent: ExpPair::new(kk * kk, 1 - kk),
            n_power: 0,
        },
    }
}
