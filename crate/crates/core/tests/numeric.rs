use brw_mom::numeric::{
    geometric_sum, radical_mul, weighted_geometric_sum, weighted_geometric_sum_direct, BetaSq,
    BigFloat, BigRat, ExpPair, Field, FloatRing, Poly, Radical, RadicalRing, RatFun, RationalRing,
    Ring,
};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

fn poly(cs: &[i64]) -> Poly {
    Poly::from_coeffs(cs.iter().map(|&c| BigRat::from_integer(c.into())).collect())
}

#[test]
fn weighted_sums_match_direct_summation() {
    // every exponent with |p|, |q| ≤ 4, including the degenerate 2^a = 1 cases
    let rational = RationalRing::with_beta_sq(1).unwrap();
    let radical = RadicalRing::new(&BetaSq::ratio(1, 2), 2).unwrap();
    for p in -4..=4 {
        for q in -4..=4 {
            let a = ExpPair::new(p, q);
            for s in 0..=2 {
                for n in 0..=12 {
                    let (v, degenerate) = weighted_geometric_sum(&rational, a, s, n).unwrap();
                    assert_eq!(
                        v,
                        weighted_geometric_sum_direct(&rational, a, s, n),
                        "{a} s={s} n={n}"
                    );
                    assert_eq!(degenerate, p + q == 0);
                    let (v, degenerate) = weighted_geometric_sum(&radical, a, s, n).unwrap();
                    assert_eq!(
                        v,
                        weighted_geometric_sum_direct(&radical, a, s, n),
                        "{a} s={s} n={n}"
                    );
                    assert_eq!(degenerate, p + 2 * q == 0);
                }
            }
        }
    }
    assert!(weighted_geometric_sum(&rational, ExpPair::new(1, 0), 3, 4).is_err());
}

#[test]
fn degenerate_exponent_has_no_closed_form() {
    assert!(geometric_sum(ExpPair::ZERO).is_err());
}

#[test]
fn float_ring_flags_degeneracy_within_threshold() {
    let f = FloatRing::new(&BetaSq::ratio(1, 3), 256).unwrap();
    let (v, degenerate) = weighted_geometric_sum(&f, ExpPair::new(3, -1), 0, 10).unwrap();
    assert!(degenerate);
    assert_eq!(f.to_value(&v).to_f64(), 10.0);
}

proptest! {
    #[test]
    fn geometric_closed_form_agrees(p in -6i64..=6, q in -6i64..=6, b in 0i64..=3, n in 0u64..=20) {
        prop_assume!(p * b + q != 0);
        let f = RationalRing::with_beta_sq(b).unwrap();
        let a = ExpPair::new(p, q);
        let closed = geometric_sum(a).unwrap().evaluate(&f, n).unwrap();
        let mut direct = f.zero();
        for l in 0..n as i64 {
            direct = f.add(&direct, &f.pow2(a.scale(l)));
        }
        prop_assert_eq!(closed, direct);
    }

    #[test]
    fn ratfun_division_undoes_multiplication(
        a in prop::collection::vec(-5i64..=5, 1..5),
        b in prop::collection::vec(-5i64..=5, 1..4),
        c in prop::collection::vec(-5i64..=5, 1..4),
    ) {
        let (pa, pb, pc) = (poly(&a), poly(&b), poly(&c));
        prop_assume!(!pb.is_zero() && !pc.is_zero());
        let f = RatFun::new(pa, pb.clone()).unwrap();
        let g = RatFun::new(pc, pb).unwrap();
        let back = &(&f * &g) / &g;
        prop_assert_eq!(back, f.clone());
        prop_assert_eq!(&(&f + &g) - &g, f);
    }

    #[test]
    fn ratfun_evaluation_is_a_homomorphism(
        a in prop::collection::vec(-4i64..=4, 1..4),
        b in prop::collection::vec(-4i64..=4, 1..4),
        x in -7i64..=7,
    ) {
        let f = RatFun::from_poly(poly(&a));
        let g = RatFun::from_poly(poly(&b));
        let t = rat(x, 3);
        let (fv, gv) = (f.eval_rational(&t).unwrap(), g.eval_rational(&t).unwrap());
        prop_assert_eq!((&f * &g).eval_rational(&t).unwrap(), &fv * &gv);
        prop_assert_eq!((&f - &g).eval_rational(&t).unwrap(), fv - gv);
    }

    #[test]
    fn radical_inverse_and_product(m in 1u32..=6, cs in prop::collection::vec(-9i64..=9, 6)) {
        let x = Radical::from_ints(m, &cs[..m as usize]).unwrap();
        prop_assume!(!x.is_zero());
        let inv = x.inverse().unwrap();
        prop_assert_eq!(radical_mul(&x, &inv).unwrap(), Radical::one(m));
        let sq = radical_mul(&x, &x).unwrap();
        let (xf, sf) = (x.to_f64(), sq.to_f64());
        prop_assert!((sf - xf * xf).abs() <= 1e-9 * (1.0 + xf * xf));
    }

    #[test]
    fn radical_powers_of_two(m in 1u32..=8, e in -40i64..=40, f in -40i64..=40) {
        let a = Radical::two_pow(m, e);
        let b = Radical::two_pow(m, f);
        prop_assert_eq!(radical_mul(&a, &b).unwrap(), Radical::two_pow(m, e + f));
        let expect = 2f64.powf((e + f) as f64 / m as f64);
        prop_assert!(((radical_mul(&a, &b).unwrap().to_f64() - expect) / expect).abs() < 1e-14);
    }

    #[test]
    fn bigfloat_f64_round_trip(x in prop::num::f64::NORMAL) {
        prop_assert_eq!(BigFloat::from_f64(x, 128).to_f64(), x);
    }

    #[test]
    fn poly_division_identity(
        a in prop::collection::vec(-6i64..=6, 1..7),
        b in prop::collection::vec(-6i64..=6, 1..4),
    ) {
        let (pa, pb) = (poly(&a), poly(&b));
        prop_assume!(!pb.is_zero());
        let (q, r) = pa.div_rem(&pb);
        prop_assert_eq!(&(&q * &pb) + &r, pa);
        prop_assert!(r.is_zero() || r.degree() < pb.degree());
    }
}

#[test]
fn field_division_by_zero_is_refused() {
    let f = RadicalRing::new(&BetaSq::ratio(1, 2), 2).unwrap();
    // 2^{2·(1/2)} − 2 = 0
    let z = f.sub(&f.pow2(ExpPair::new(2, 0)), &f.from_int(2));
    assert!(f.is_zero(&z));
    assert!(f.inv(&z).is_none());
}
