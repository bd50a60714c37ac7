//! Brute-force ground truth: MoM_n(k, β) as an explicit average over all
//! k-tuples of leaves.
//!
//! Two paths through the tree share their first lcl increments and are
//! independent afterwards, so for a tuple (l_1, …, l_k)
//!
//! E[e^{2β(X(l_1)+⋯+X(l_k))}] = 2^{β²(k·n + Σ_{i≠j} lcl(l_i, l_j))}.
//!
//! Nothing here touches the recursion used by [`crate::engine`].

use rayon::prelude::*;
use thiserror::Error;

use crate::numeric::{BetaSq, ExpPair, NumericError, Ring, RingTag, Value};

/// Default cap on k·n, i.e. on log2 of the number of enumerated tuples.
pub const DEFAULT_BUDGET: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("leaves at depths {left} and {right} cannot be compared")]
    DepthMismatch { left: u32, right: u32 },
    #[error("label {label} does not fit in depth {depth}")]
    LabelOutOfRange { label: u64, depth: u32 },
    #[error("need at least one leaf")]
    EmptyTuple,
    #[error("{0:?} is not a permutation of the tuple slots")]
    InvalidPermutation(Vec<usize>),
    #[error("k must be positive")]
    NonPositiveK,
    #[error("k*n = {kn} exceeds the enumeration budget {budget}")]
    BudgetExceeded { kn: u64, budget: u32 },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// A leaf of the depth-n binary tree; bit n−1−m of the label is the
/// branch taken at level m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Leaf {
    label: u64,
    depth: u32,
}

impl Leaf {
    pub fn new(label: u64, depth: u32) -> Result<Self, OracleError> {
        if depth > 63 || label >> depth != 0 {
            return Err(OracleError::LabelOutOfRange { label, depth });
        }
        Ok(Leaf { label, depth })
    }

    pub fn label(&self) -> u64 {
        self.label
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }
}

// n minus the bit length of a XOR b: the length of the common prefix.
#[inline]
fn lcl_raw(a: u64, b: u64, n: u32) -> u32 {
    n - (64 - (a ^ b).leading_zeros())
}

/// Last common level: the depth of the deepest common ancestor.
pub fn lcl(a: Leaf, b: Leaf) -> Result<u32, OracleError> {
    if a.depth != b.depth {
        return Err(OracleError::DepthMismatch {
            left: a.depth,
            right: b.depth,
        });
    }
    Ok(lcl_raw(a.label, b.label, a.depth))
}

/// Last common level of a set of leaves.
pub fn lcl_multi(leaves: &[Leaf]) -> Result<u32, OracleError> {
    let (first, rest) = leaves.split_first().ok_or(OracleError::EmptyTuple)?;
    rest.iter()
        .try_fold(first.depth, |acc, &l| Ok(acc.min(lcl(*first, l)?)))
}

fn check(k: usize, n: usize, budget: u32) -> Result<(), OracleError> {
    if k == 0 {
        return Err(OracleError::NonPositiveK);
    }
    let kn = (k as u64) * (n as u64);
    if kn > budget as u64 || kn > 40 {
        return Err(OracleError::BudgetExceeded { kn, budget });
    }
    Ok(())
}

/// hist[s] = number of k-tuples with Σ_{i<j} lcl(l_i, l_j) = s.
pub fn lcl_histogram(k: usize, n: usize, budget: u32) -> Result<Vec<u64>, OracleError> {
    check(k, n, budget)?;
    let nn = n as u32;
    let mask = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let bins = k * (k - 1) / 2 * n + 1;
    let total = 1u64 << (k * n);
    let hist = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; bins],
            |mut h, x| {
                let mut s = 0u32;
                for i in 0..k {
                    let a = (x >> (i * n)) & mask;
                    for j in i + 1..k {
                        s += lcl_raw(a, (x >> (j * n)) & mask, nn);
                    }
                }
                h[s as usize] += 1;
                h
            },
        )
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist)
}

/// 2^{−kn} Σ over all 2^{kn} tuples of 2^{β²(kn + Σ_{i≠j} lcl)}, in `ring`.
pub fn mom_bruteforce_in<R: Ring>(
    ring: &R,
    k: usize,
    n: usize,
    budget: u32,
) -> Result<R::Elem, OracleError> {
    let hist = lcl_histogram(k, n, budget)?;
    Ok(weigh(ring, k, n, &hist))
}

fn weigh<R: Ring>(ring: &R, k: usize, n: usize, hist: &[u64]) -> R::Elem {
    let kn = (k * n) as i64;
    let sum = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(ring.zero(), |acc, (s, &c)| {
            let w = ring.pow2(ExpPair::new(kn + 2 * s as i64, 0));
            ring.add(&acc, &ring.mul(&ring.from_int(c as i64), &w))
        });
    ring.mul(&sum, &ring.pow2(ExpPair::new(0, -kn)))
}

/// Brute-force MoM_n(k, β) in the ring named by `tag`.
pub fn mom_bruteforce(
    k: usize,
    n: usize,
    beta_sq: &BetaSq,
    tag: RingTag,
    budget: u32,
) -> Result<Value, OracleError> {
    with_ring!(beta_sq, tag, |f| Ok(
        f.to_value(&mom_bruteforce_in(&f, k, n, budget)?)
    ))
}

/// Same sum, enumerated with the tuple slots read in the order `perm` and
/// every tuple scored through [`Leaf`] and [`lcl_multi`] on each pair.
/// Used to check exchangeability.
pub fn mom_bruteforce_permuted<R: Ring>(
    ring: &R,
    k: usize,
    n: usize,
    perm: &[usize],
    budget: u32,
) -> Result<R::Elem, OracleError> {
    check(k, n, budget)?;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..k).collect::<Vec<_>>() {
        return Err(OracleError::InvalidPermutation(perm.to_vec()));
    }
    let mask = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut hist = vec![0u64; k * (k - 1) / 2 * n + 1];
    for x in 0..1u64 << (k * n) {
        let leaves = perm
            .iter()
            .map(|&slot| Leaf::new((x >> (slot * n)) & mask, n as u32))
            .collect::<Result<Vec<_>, _>>()?;
        let mut s = 0;
        for i in 0..k {
            for j in i + 1..k {
                s += lcl_multi(&[leaves[i], leaves[j]])? as usize;
            }
        }
        hist[s] += 1;
    }
    Ok(weigh(ring, k, n, &hist))
}
