use crate::numeric::{BetaSq, ExpPair, NumericError, Ring, RingTag, Value};

use super::{binomial, EngineError};

struct Level<E> {
    // 2^{j²β²−j}
    pre: E,
    // 2^{j²β²−j+1}
    growth: E,
    // C(j,i)·2^{2iβ²(i−j)} for i = 1..j−1
    split: Vec<E>,
    // Σ_{λ<d} growth^λ·S(d−1−λ) at the current depth d
    acc: E,
    // growth^d
    growth_pow: E,
}

/// MoM_d(j, β) for 1 ≤ j ≤ k_max and 0 ≤ d ≤ n_max in a fixed ring.
///
/// Each row is driven by the split recursion: the k particles travel
/// together down to level λ, then split into groups of j and k − j which
/// evolve independently below. The sum over λ is accumulated Horner-style,
/// so no division is ever performed and every β, critical or not, is fine.
pub struct MomentTable<R: Ring> {
    ring: R,
    k_max: usize,
    n_max: usize,
    rows: Vec<Vec<R::Elem>>,
    levels: Vec<Level<R::Elem>>,
}

impl<R: Ring> MomentTable<R> {
    pub fn new(ring: R, k_max: usize, n_max: usize) -> Result<Self, EngineError> {
        if k_max == 0 {
            return Err(EngineError::NonPositiveK);
        }
        let levels = (1..=k_max)
            .map(|j| {
                let jj = j as i64;
                Level {
                    pre: ring.pow2(ExpPair::new(jj * jj, -jj)),
                    growth: ring.pow2(ExpPair::new(jj * jj, 1 - jj)),
                    split: (1..j)
                        .map(|i| {
                            let ii = i as i64;
                            let c = ring.from_int(binomial(j, i) as i64);
                            ring.mul(&c, &ring.pow2(ExpPair::new(2 * ii * (ii - jj), 0)))
                        })
                        .collect(),
                    acc: ring.zero(),
                    growth_pow: ring.one(),
                }
            })
            .collect();
        let rows = (0..k_max).map(|_| vec![ring.one()]).collect();
        let mut table = MomentTable {
            ring,
            k_max,
            n_max: 0,
            rows,
            levels,
        };
        table.extend_to(n_max);
        Ok(table)
    }

    /// Grows every row to depth `n_max`, reusing what is already there.
    pub fn extend_to(&mut self, n_max: usize) {
        let t = self.ring.pow2(ExpPair::new(1, 0));
        for d in self.n_max..n_max {
            // row j at depth d+1 needs rows i < j at depth d only
            let next_first = self.ring.mul(&self.rows[0][d], &t);
            self.rows[0].push(next_first);
            for j in 2..=self.k_max {
                let mut s = self.ring.zero();
                for i in 1..j {
                    let pair = self
                        .ring
                        .mul(&self.rows[i - 1][d], &self.rows[j - i - 1][d]);
                    s = self
                        .ring
                        .add(&s, &self.ring.mul(&self.levels[j - 1].split[i - 1], &pair));
                }
                let lvl = &mut self.levels[j - 1];
                lvl.acc = self.ring.add(&self.ring.mul(&lvl.growth, &lvl.acc), &s);
                lvl.growth_pow = self.ring.mul(&lvl.growth_pow, &lvl.growth);
                let value = self
                    .ring
                    .add(&self.ring.mul(&lvl.pre, &lvl.acc), &lvl.growth_pow);
                self.rows[j - 1].push(value);
            }
        }
        self.n_max = self.n_max.max(n_max);
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, j: usize, d: usize) -> Option<&R::Elem> {
        self.rows.get(j.checked_sub(1)?)?.get(d)
    }

    /// MoM_d(j) for d = 0..=n_max.
    pub fn row(&self, j: usize) -> &[R::Elem] {
        &self.rows[j - 1]
    }
}

/// MoM_n(k, β) computed in the requested ring.
///
/// `RingTag::Rational` needs an integer β², `RingTag::Radical(m)` needs
/// m·β² to be an integer; floats accept anything.
pub fn mom_dp(k: usize, n: usize, beta_sq: &BetaSq, ring: RingTag) -> Result<Value, EngineError> {
    let series = mom_dp_series(k, n, beta_sq, ring)?;
    Ok(series
        .into_iter()
        .next_back()
        .expect("series includes depth n"))
}

/// MoM_d(k, β) for every d = 0..=n.
pub fn mom_dp_series(
    k: usize,
    n: usize,
    beta_sq: &BetaSq,
    ring: RingTag,
) -> Result<Vec<Value>, EngineError> {
    if k == 0 {
        return Err(EngineError::NonPositiveK);
    }
    if beta_sq.is_negative() {
        return Err(NumericError::NegativeBetaSq.into());
    }
    with_ring!(beta_sq, ring, |r| {
        let table = MomentTable::new(r, k, n)?;
        Ok(table
            .row(k)
            .iter()
            .map(|v| table.ring().to_value(v))
            .collect())
    })
}
