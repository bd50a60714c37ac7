//! Exact arithmetic in ℚ(2^{1/m}).

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::bigfloat::BigFloat;
use super::{BigRat, NumericError};

/// Σ_{j<m} c_j·2^{j/m}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Radical {
    m: u32,
    coeffs: Vec<BigRat>,
}

impl Radical {
    pub fn new(m: u32, coeffs: Vec<BigRat>) -> Result<Self, NumericError> {
        if m == 0 {
            return Err(NumericError::InvalidRootIndex);
        }
        if coeffs.len() != m as usize {
            return Err(NumericError::CoefficientCount {
                m,
                len: coeffs.len(),
            });
        }
        Ok(Radical { m, coeffs })
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(m: u32, coeffs: &[i64]) -> Result<Self, NumericError> {
        Self::new(
            m,
            coeffs
                .iter()
                .map(|&c| BigRat::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(m: u32) -> Self {
        Self::from_rational(m, BigRat::zero())
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, BigRat::one())
    }

    pub fn from_rational(m: u32, q: BigRat) -> Self {
        assert!(m > 0, "root index must be positive");
        let mut coeffs = vec![BigRat::zero(); m as usize];
        coeffs[0] = q;
        Radical { m, coeffs }
    }

    /// 2^{e/m} for any integer e.
    pub fn two_pow(m: u32, e: i64) -> Self {
        let (whole, frac) = e.div_mod_floor(&(m as i64));
        let mut coeffs = vec![BigRat::zero(); m as usize];
        coeffs[frac as usize] = super::ratfun::pow2_rational(whole);
        Radical { m, coeffs }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value when only the constant coefficient is nonzero.
    pub fn as_rational(&self) -> Option<&BigRat> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Radical) -> Result<(), NumericError> {
        if self.m != other.m {
            return Err(NumericError::RootIndexMismatch {
                left: self.m,
                right: other.m,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Radical) -> Result<Radical, NumericError> {
        self.check(other)?;
        Ok(Radical {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Radical) -> Result<Radical, NumericError> {
        self.check(other)?;
        Ok(Radical {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Radical {
        Radical {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> Radical {
        Radical {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    // multiplication by the generator 2^{1/m}
    fn shift(&self) -> Radical {
        let m = self.m as usize;
        let mut coeffs = Vec::with_capacity(m);
        coeffs.push(&self.coeffs[m - 1] * BigRat::from_integer(2.into()));
        coeffs.extend(self.coeffs[..m - 1].iter().cloned());
        Radical { m: self.m, coeffs }
    }

    /// Multiplicative inverse via the m×m multiplication matrix.
    pub fn inverse(&self) -> Result<Radical, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Radical::from_rational(self.m, q.recip()));
        }
        let m = self.m as usize;
        // column j holds self·2^{j/m}; solve M·x = e_0
        let mut cols = Vec::with_capacity(m);
        let mut cur = self.clone();
        for _ in 0..m {
            cols.push(cur.coeffs.clone());
            cur = cur.shift();
        }
        let mut a: Vec<Vec<BigRat>> = (0..m)
            .map(|i| {
                let mut row: Vec<BigRat> = (0..m).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 {
                    BigRat::one()
                } else {
                    BigRat::zero()
                });
                row
            })
            .collect();
        for col in 0..m {
            let pivot = (col..m)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(NumericError::DivisionByZero)?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..m {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                        *x -= &f * p;
                    }
                }
            }
        }
        Ok(Radical {
            m: self.m,
            coeffs: a.into_iter().map(|row| row[m].clone()).collect(),
        })
    }

    pub fn to_bigfloat(&self, prec: usize) -> BigFloat {
        let root = BigFloat::exp2(&BigFloat::from_rational(
            &BigRat::new(1.into(), (self.m as i64).into()),
            prec + 16,
        ));
        let mut acc = BigFloat::zero(prec + 16);
        for c in self.coeffs.iter().rev() {
            acc = acc * &root + BigFloat::from_rational(c, prec + 16);
        }
        acc.with_precision(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_bigfloat(128).to_f64()
    }
}

/// Product in ℚ(2^{1/m}) using (2^{1/m})^m = 2.
pub fn radical_mul(a: &Radical, b: &Radical) -> Result<Radical, NumericError> {
    a.check(b)?;
    let m = a.m as usize;
    let two = BigRat::from_integer(2.into());
    let mut out = vec![BigRat::zero(); m];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let prod = x * y;
            if i + j >= m {
                out[i + j - m] += prod * &two;
            } else {
                out[i + j] += prod;
            }
        }
    }
    Ok(Radical {
        m: a.m,
        coeffs: out,
    })
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            if j == 0 {
                write!(f, "{mag}")?;
            } else {
                let g = (j as u32).gcd(&self.m);
                let root = format!("2^({}/{})", j as u32 / g, self.m / g);
                if mag.is_one() {
                    f.write_str(&root)?;
                } else {
                    write!(f, "{mag}*{root}")?;
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Radical[m={}]({self})", self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(m: u32, c: &[i64]) -> Radical {
        Radical::from_ints(m, c).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(
            radical_mul(&r(2, &[0, 1]), &r(2, &[0, 1])).unwrap(),
            r(2, &[2, 0])
        );
        let a = Radical::new(1, vec![BigRat::new(3.into(), 2.into())]).unwrap();
        assert_eq!(radical_mul(&a, &r(1, &[4])).unwrap(), r(1, &[6]));
        assert_eq!(
            radical_mul(&r(3, &[0, 1, 0]), &r(3, &[0, 0, 1])).unwrap(),
            r(3, &[2, 0, 0])
        );
    }

    #[test]
    fn mismatched_root_index_is_rejected() {
        assert_eq!(
            radical_mul(&r(2, &[1, 0]), &r(3, &[1, 0, 0])),
            Err(NumericError::RootIndexMismatch { left: 2, right: 3 })
        );
        assert!(Radical::from_ints(2, &[1]).is_err());
    }

    #[test]
    fn inverse_and_powers() {
        let x = r(3, &[1, 2, -1]);
        let inv = x.inverse().unwrap();
        assert_eq!(radical_mul(&x, &inv).unwrap(), Radical::one(3));
        assert_eq!(Radical::two_pow(2, 5), r(2, &[0, 4]));
        assert_eq!(
            Radical::two_pow(2, -1).coeffs()[1],
            BigRat::new(1.into(), 2.into())
        );
        assert_eq!(r(4, &[0, 0, 3, 0]).to_string(), "3*2^(1/2)");
        assert!((r(2, &[1, 1]).to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
    }
}
