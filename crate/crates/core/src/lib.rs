//! Moments of moments of the branching random walk on a binary tree.
//!
//! For the Gaussian branching random walk with increments of variance ½·ln 2
//! the partition function is Z_n = 2^{−n} Σ_l e^{2βX_n(l)} and the quantity
//! of interest is MoM_n(k, β) = E[Z_n^k]. The crate computes it
//!
//! * exactly, by dynamic programming over the recursion on the level at
//!   which the k particles first split ([`engine::mom_dp`]),
//! * symbolically, as a sum Σ c(t)·2^{(pβ²+q)n} with t = 2^{β²}
//!   ([`engine::mom_symbolic`]),
//! * by brute-force enumeration of leaf tuples ([`oracle`]),
//! * by simulation ([`montecarlo`]),
//!
//! and extracts the large-n asymptotics in all three regimes
//! ([`asymptotics`]). [`rmt`] holds the random-matrix comparison.

/// Runs `$body` with `$ring` bound to the concrete ring named by a [`RingTag`].
macro_rules! with_ring {
    ($beta_sq:expr, $tag:expr, |$ring:ident| $body:expr) => {
        match $tag {
            $crate::numeric::RingTag::Rational => {
                let $ring = $crate::numeric::RationalRing::new($beta_sq)?;
                $body
            }
            $crate::numeric::RingTag::Radical(m) => {
                let $ring = $crate::numeric::RadicalRing::new($beta_sq, m)?;
                $body
            }
            $crate::numeric::RingTag::Float(prec) => {
                let $ring = $crate::numeric::FloatRing::new($beta_sq, prec)?;
                $body
            }
        }
    };
}

pub mod asymptotics;
pub mod engine;
pub mod montecarlo;
pub mod numeric;
pub mod oracle;
pub mod rmt;

pub use numeric::{BetaSq, BigFloat, BigRat, ExpPair, GenPoly, Radical, RatFun, RingTag, Value};
