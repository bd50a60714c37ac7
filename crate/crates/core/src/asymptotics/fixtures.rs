//! Closed-form leading coefficients for k ≤ 5, transcribed term by term
//! from the published tables so that they can serve as golden data.
//!
//! Notation: x = β², e(a) = 2^{a·x}, e2(a, b) = 2^{a·x + b}.

use crate::numeric::{BetaSq, BigFloat};

use super::regime::{classify_regime, RegimeTag};
use super::AsymptoticsError;

struct Pow {
    x: BigFloat,
    prec: usize,
}

impl Pow {
    fn e(&self, a: i64) -> BigFloat {
        self.e2(a, 0)
    }

    fn e2(&self, a: i64, b: i64) -> BigFloat {
        BigFloat::exp2(
            &(&self.x * &BigFloat::from_i64(a, self.prec) + BigFloat::from_i64(b, self.prec)),
        )
    }

    fn c(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.prec)
    }

    fn frac(&self, p: i64, q: i64) -> BigFloat {
        self.c(p) / self.c(q)
    }
}

/// The tabulated leading coefficient of MoM_n(k, β) in the given regime.
///
/// Covers k = 1..5 in the sub- and super-critical regimes and k = 1..3 at
/// the critical point; other combinations report [`AsymptoticsError::NotTranscribed`].
pub fn appendix_coefficient(
    k: usize,
    beta_sq: &BetaSq,
    regime: RegimeTag,
    prec: usize,
) -> Result<BigFloat, AsymptoticsError> {
    if !(1..=5).contains(&k) {
        return Err(AsymptoticsError::UnsupportedK { k, min: 1 });
    }
    let found = classify_regime(k, beta_sq).tag;
    if found != regime {
        return Err(AsymptoticsError::RegimeViolation {
            k,
            beta_sq: beta_sq.to_string(),
            expected: regime,
            found,
        });
    }
    let wp = prec + 64;
    let p = Pow {
        x: beta_sq.to_bigfloat(wp),
        prec: wp,
    };
    let v = match (k, regime) {
        (1, _) => p.c(1),
        (2, RegimeTag::SubCritical) => k2_sub(&p),
        (2, RegimeTag::Critical) => p.frac(1, 2),
        (2, RegimeTag::SuperCritical) => k2_super(&p),
        (3, RegimeTag::SubCritical) => k3_sub(&p),
        (3, RegimeTag::Critical) => k3_critical(&p),
        (3, RegimeTag::SuperCritical) => k3_super(&p),
        (4, RegimeTag::SubCritical) => k4_sub(&p),
        (4, RegimeTag::SuperCritical) => k4_super(&p),
        (5, RegimeTag::SubCritical) => k5_sub(&p),
        (5, RegimeTag::SuperCritical) => k5_super(&p),
        (k, regime) => return Err(AsymptoticsError::NotTranscribed { k, regime }),
    };
    Ok(v.with_precision(prec))
}

/// Compact single-fraction form of the k = 4 super-critical coefficient
/// used for plotting.
pub fn k4_super_plot_form(beta_sq: &BetaSq, prec: usize) -> BigFloat {
    let wp = prec + 64;
    let p = Pow {
        x: beta_sq.to_bigfloat(wp),
        prec: wp,
    };
    let num = p.e(28) - p.c(80) + p.e(36) + p.e2(6, 3) - p.e2(8, 5) + p.c(17) * p.e2(10, 2)
        - p.c(5) * p.e2(12, 2)
        + p.e2(14, 5)
        - p.e2(16, 1)
        - p.c(7) * p.e2(18, 1)
        + p.e2(20, 4)
        - p.c(5) * p.e2(22, 1)
        - p.e2(24, 3)
        - p.e2(26, 2)
        + p.e2(30, 1);
    let den = (p.e(6) - p.c(2)) * (p.e(8) - p.c(2)) * (p.e(10) - p.c(4)) * (p.e(12) - p.c(8));
    (num / den).with_precision(prec)
}

// 1/(2(1 − 2^{2x−1}))
fn k2_sub(p: &Pow) -> BigFloat {
    p.c(1) / (p.c(2) * (p.c(1) - p.e2(2, -1)))
}

// (2^{2x} − 1)/(2(2^{2x−1} − 1))
fn k2_super(p: &Pow) -> BigFloat {
    (p.e(2) - p.c(1)) / (p.c(2) * (p.e2(2, -1) - p.c(1)))
}

// 3·2^{2x}/((2² − 2^{6x})(2 − 2^{2x}))
fn k3_sub(p: &Pow) -> BigFloat {
    p.c(3) * p.e(2) / ((p.c(4) - p.e(6)) * (p.c(2) - p.e(2)))
}

// 3/(2^{7/3} − 2²)
fn k3_critical(p: &Pow) -> BigFloat {
    let seven_thirds =
        BigFloat::from_rational(&crate::numeric::BigRat::new(7.into(), 3.into()), p.prec);
    p.c(3) / (BigFloat::exp2(&seven_thirds) - p.c(4))
}

// 1 + 3(2^{6x} − 2)/((2^{4x} − 2)(2^{6x} − 2²))
fn k3_super(p: &Pow) -> BigFloat {
    p.c(1) + p.c(3) * (p.e(6) - p.c(2)) / ((p.e(4) - p.c(2)) * (p.e(6) - p.c(4)))
}

fn k4_sub(p: &Pow) -> BigFloat {
    let two_minus_e2 = p.c(2) - p.e(2);
    // 3·2^{8x+2}/((2 − 2^{2x})(4 − 2^{6x})(8 − 2^{12x}))
    let a = p.c(3) * p.e2(8, 2) / (&two_minus_e2 * (p.c(4) - p.e(6)) * (p.c(8) - p.e(12)));
    // 3·2^{8x−3}/((2 − 2^{2x})²(2^{4x} − 2^{16x−3}))
    let b = p.c(3) * p.e2(8, -3) / (&two_minus_e2 * &two_minus_e2 * (p.e(4) - p.e2(16, -3)));
    a + b
}

fn k4_super(p: &Pow) -> BigFloat {
    let d2 = p.e(2) - p.c(2);
    let d2sq = &d2 * &d2;
    let d4 = p.e(4) - p.c(2);
    let d6_4 = p.e(6) - p.c(4);
    let top = p.e2(16, -3);

    // 1 + 4/(2^{6x} − 2)
    let head = p.c(1) + p.c(4) / (p.e(6) - p.c(2));

    // 12[1/((2^{4x}−2)(2^{6x}−4)) − (2^{6x}−2^{4x})/((2^{2x}−2)(2^{4x}−2)(2^{10x}−4))
    //    + 2^{8x}/((2^{2x}−2)(2^{6x}−4)(2^{12x}−8))]
    let b1 = p.c(1) / (&d4 * &d6_4);
    let b2 = (p.e(6) - p.e(4)) / (&d2 * &d4 * (p.e(10) - p.c(4)));
    let b3 = p.e(8) / (&d2 * &d6_4 * (p.e(12) - p.c(8)));
    let twelve = p.c(12) * (b1 - b2 + b3);

    // 3·2^{8x−3}[1/((2^{2x}−2)²(2^{16x−3}−2^{4x})) − 2^{2−6x}/((2^{2x}−2)²(2^{10x−2}−1))
    //    − 1/((2^{2x}−2)(2^{16x−3}−2^{6x−1})) + 1/((2^{2x}−2)(2^{16x−3}−2^{8x−2}))
    //    + 1/(2^{16x−3}−2^{8x−2}) + 2^{2−8x}/((2^{2x}−2)²(2^{8x−1}−1))]
    let c1 = p.c(1) / (&d2sq * (&top - p.e(4)));
    let c2 = p.e2(-6, 2) / (&d2sq * (p.e2(10, -2) - p.c(1)));
    let c3 = p.c(1) / (&d2 * (&top - p.e2(6, -1)));
    let c4 = p.c(1) / (&d2 * (&top - p.e2(8, -2)));
    let c5 = p.c(1) / (&top - p.e2(8, -2));
    let c6 = p.e2(-8, 2) / (&d2sq * (p.e2(8, -1) - p.c(1)));
    let three = p.c(3) * p.e2(8, -3) * (c1 - c2 - c3 + c4 + c5 + c6);

    head + twelve + three
}

fn k5_sub(p: &Pow) -> BigFloat {
    let a = p.c(2) - p.e(2);
    let b = p.c(4) - p.e(6);
    let c = p.c(8) - p.e(12);
    let d = p.c(16) - p.e(20);
    // 15·2^{10x+1}/((2−2^{2x})(4−2^{6x})(16−2^{20x}))
    let t1 = p.c(15) * p.e2(10, 1) / (&a * &b * &d);
    // 15·2^{20x+2}/((2−2^{2x})(4−2^{6x})(8−2^{12x})(16−2^{20x}))
    let t2 = p.c(15) * p.e2(20, 2) / (&a * &b * &c * &d);
    // 15·2^{16x}/((2−2^{2x})²(8−2^{12x})(16−2^{20x}))
    let t3 = p.c(15) * p.e(16) / (&a * &a * &c * &d);
    t1 + t2 + t3
}

fn k5_super(p: &Pow) -> BigFloat {
    let e = |a| p.e(a);
    let c = |v| p.c(v);
    let m1 = e(2) - c(1);
    let d2 = e(2) - c(2);
    let d2sq = &d2 * &d2;
    let d4 = e(4) - c(2);
    let d6 = e(6) - c(2);
    let d6_4 = e(6) - c(4);
    let d8 = e(8) - c(2);
    let d10 = e(10) - c(4);
    let d12_2 = e(12) - c(2);
    let d12_8 = e(12) - c(8);
    let d14 = e(14) - c(4);
    let d16 = e(16) - c(4);
    let d18 = e(18) - c(8);
    let d20 = e(20) - c(16);

    let terms = [
        // + 30(2^{6x}−2)(2^{2x}−1)/((2^{2x}−2)(2^{4x}−2)(2^{6x}−4)(2^{12x}−2))
        c(30) * &d6 * &m1 / (&d2 * &d4 * &d6_4 * &d12_2),
        // − 15·2^{4x+1}(2^{2x}−1)²/((2^{2x}−2)²(2^{4x}−2)(2^{16x}−4))
        -(c(15) * p.e2(4, 1) * &m1 * &m1 / (&d2sq * &d4 * &d16)),
        // + 10(2^{2x}−1)/((2^{2x}−2)(2^{12x}−2))
        c(10) * &m1 / (&d2 * &d12_2),
        // + 15·2^{6x+1}(2^{2x}−1)/((2^{2x}−2)²(2^{4x}−2)(2^{18x}−8))
        c(15) * p.e2(6, 1) * &m1 / (&d2sq * &d4 * &d18),
        // + 15·2^{8x+1}(2^{2x}−1)/((2^{2x}−2)²(2^{6x}−4)(2^{18x}−8))
        c(15) * p.e2(8, 1) * &m1 / (&d2sq * &d6_4 * &d18),
        // + 60/((2^{4x}−2)(2^{6x}−4)(2^{8x}−2))
        c(60) / (&d4 * &d6_4 * &d8),
        // + 20/((2^{6x}−2)(2^{8x}−2))
        c(20) / (&d6 * &d8),
        // + 5/(2^{8x}−2)
        c(5) / &d8,
        // − 60(2^{6x}−2^{4x})/((2^{2x}−2)(2^{4x}−2)(2^{8x}−2)(2^{10x}−4))
        -(c(60) * (e(6) - e(4)) / (&d2 * &d4 * &d8 * &d10)),
        // − 15·2^{2x}/((2^{2x}−2)(2^{8x}−2)(2^{10x}−4))
        -(c(15) * e(2) / (&d2 * &d8 * &d10)),
        // − 15·2^{2x+1}/((2^{2x}−2)²(2^{8x}−2)(2^{10x}−4))
        -(c(15) * p.e2(2, 1) / (&d2sq * &d8 * &d10)),
        // + 15·2^{8x+2}/((2^{2x}−2)(2^{6x}−4)(2^{8x}−2)(2^{12x}−8))
        c(15) * p.e2(8, 2) / (&d2 * &d6_4 * &d8 * &d12_8),
        // + 15·2^{4x}/((2^{2x}−2)²(2^{8x}−2)(2^{12x}−8))
        c(15) * e(4) / (&d2sq * &d8 * &d12_8),
        // − 15·2^{2x+1}(2^{6x}−2)/((2^{2x}−2)(2^{4x}−2)(2^{6x}−4)(2^{14x}−4))
        -(c(15) * p.e2(2, 1) * &d6 / (&d2 * &d4 * &d6_4 * &d14)),
        // − 5·2^{2x+1}/((2^{2x}−2)(2^{14x}−4))
        -(c(5) * p.e2(2, 1) / (&d2 * &d14)),
        // − 15·2^{6x+2}/((2^{4x}−2)(2^{6x}−4)(2^{14x}−4))
        -(c(15) * p.e2(6, 2) / (&d4 * &d6_4 * &d14)),
        // − 5·2^{6x+2}/((2^{6x}−2)(2^{14x}−4))
        -(c(5) * p.e2(6, 2) / (&d6 * &d14)),
        // − 15·2^{8x}/((2^{8x}−2)(2^{16x}−4))
        -(c(15) * e(8) / (&d8 * &d16)),
        // − 15·2^{8x}/((2^{2x}−2)(2^{8x}−2)(2^{16x}−4))
        -(c(15) * e(8) / (&d2 * &d8 * &d16)),
        // − 15·2^{8x}/((2^{2x}−2)²(2^{8x}−2)(2^{16x}−4))
        -(c(15) * e(8) / (&d2sq * &d8 * &d16)),
        // + 60(2^{16x}−2^{14x})/((2^{2x}−2)(2^{4x}−2)(2^{10x}−4)(2^{18x}−8))
        c(60) * (e(16) - e(14)) / (&d2 * &d4 * &d10 * &d18),
        // + 15·2^{12x}/((2^{2x}−2)(2^{10x}−4)(2^{18x}−8))
        c(15) * e(12) / (&d2 * &d10 * &d18),
        // + 15·2^{12x+1}/((2^{2x}−2)²(2^{10x}−4)(2^{18x}−8))
        c(15) * p.e2(12, 1) / (&d2sq * &d10 * &d18),
        // − 15·2^{10x+1}/((2^{2x}−2)²(2^{6x}−4)(2^{20x}−16))
        -(c(15) * p.e2(10, 1) / (&d2sq * &d6_4 * &d20)),
        // − 15·2^{20x+2}/((2^{2x}−2)(2^{6x}−4)(2^{12x}−8)(2^{20x}−16))
        -(c(15) * p.e2(20, 2) / (&d2 * &d6_4 * &d12_8 * &d20)),
        // − 15·2^{16x}/((2^{2x}−2)²(2^{12x}−8)(2^{20x}−16))
        -(c(15) * e(16) / (&d2sq * &d12_8 * &d20)),
        // + 15/((2^{2x}−2)(2^{8x}−2)²)
        c(15) / (&d2 * &d8 * &d8),
        // + 15/((2^{2x}−2)²(2^{8x}−2)²)
        c(15) / (&d2sq * &d8 * &d8),
        // + 15/(2^{8x}−2)²
        c(15) / (&d8 * &d8),
        // + 1
        c(1),
    ];
    terms.into_iter().fold(c(0), |acc, t| acc + t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        let v =
            appendix_coefficient(2, &BetaSq::integer(1), RegimeTag::SuperCritical, 256).unwrap();
        assert_eq!(v.to_f64(), 1.5);
        let v = appendix_coefficient(3, &BetaSq::ratio(1, 3), RegimeTag::Critical, 256).unwrap();
        assert!((v.to_f64() - 3.0 / (2f64.powf(7.0 / 3.0) - 4.0)).abs() < 1e-14);
        assert!(matches!(
            appendix_coefficient(4, &BetaSq::ratio(1, 4), RegimeTag::Critical, 256),
            Err(AsymptoticsError::NotTranscribed { .. })
        ));
        assert!(matches!(
            appendix_coefficient(6, &BetaSq::integer(1), RegimeTag::SuperCritical, 256),
            Err(AsymptoticsError::UnsupportedK { .. })
        ));
        assert!(matches!(
            appendix_coefficient(3, &BetaSq::integer(1), RegimeTag::SubCritical, 256),
            Err(AsymptoticsError::RegimeViolation { .. })
        ));
    }
}
