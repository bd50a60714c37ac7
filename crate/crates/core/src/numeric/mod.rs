//! Exact and multi-precision arithmetic.

pub mod bigfloat;
pub mod genpoly;
pub mod poly;
pub mod radical;
pub mod ratfun;
pub mod ring;
pub mod special;

use thiserror::Error;

pub use bigfloat::{BigFloat, DEFAULT_PRECISION, MIN_PRECISION};
pub use genpoly::{
    geometric_sum, geometric_sum_at, weighted_geometric_sum, weighted_geometric_sum_direct,
    ExpPair, GenPoly,
};
pub use poly::Poly;
pub use radical::{radical_mul, Radical};
pub use ratfun::RatFun;
pub use ring::{BetaSq, Field, FloatRing, RadicalRing, RationalRing, Ring, RingTag, Value};

pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("root index mismatch: 2^(1/{left}) vs 2^(1/{right})")]
    RootIndexMismatch { left: u32, right: u32 },
    #[error("root index must be positive")]
    InvalidRootIndex,
    #[error("radical with root index {m} needs {m} coefficients, got {len}")]
    CoefficientCount { m: u32, len: usize },
    #[error("geometric sum with exponent (0,0) has no closed form")]
    DegenerateExponent,
    #[error("weighted geometric sum supports powers 0, 1 and 2, got {0}")]
    UnsupportedWeight(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("beta^2 must be non-negative")]
    NegativeBetaSq,
    #[error("ring {ring} cannot represent beta^2 = {beta_sq}")]
    RingMismatch { ring: RingTag, beta_sq: String },
    #[error("cannot parse number '{0}'")]
    Parse(String),
}
