use brw_mom::engine::{
    evaluate_genpoly, mom_dp, mom_dp_series, mom_polynomial, mom_symbolic, PolyMethod,
};
use brw_mom::numeric::{BetaSq, BigFloat, BigRat, RadicalRing, RationalRing, RingTag, Value};
use brw_mom::oracle::{
    self, lcl_histogram, mom_bruteforce, mom_bruteforce_in, mom_bruteforce_permuted,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn int(v: i64) -> BigRat {
    BigRat::from_integer(v.into())
}

fn pow2(e: i64) -> BigRat {
    if e >= 0 {
        BigRat::from_integer(num_traits::pow(BigInt::from(2), e as usize))
    } else {
        BigRat::new(1.into(), num_traits::pow(BigInt::from(2), (-e) as usize))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn dp_matches_enumeration_exactly() {
    for b in 0..=2 {
        let beta_sq = BetaSq::integer(b);
        for k in 1..=3 {
            for n in 0..=4 {
                let dp = mom_dp(k, n, &beta_sq, RingTag::Rational).unwrap();
                let brute =
                    mom_bruteforce(k, n, &beta_sq, RingTag::Rational, oracle::DEFAULT_BUDGET)
                        .unwrap();
                assert_eq!(dp, brute, "k={k} n={n} beta^2={b}");
            }
        }
    }
}

#[test]
fn dp_matches_enumeration_in_radical_and_float_rings() {
    let half = BetaSq::ratio(1, 2);
    let r = RadicalRing::new(&half, 2).unwrap();
    for k in 1..=3 {
        for n in 0..=4 {
            let dp = mom_dp(k, n, &half, RingTag::Radical(2)).unwrap();
            let brute = mom_bruteforce_in(&r, k, n, oracle::DEFAULT_BUDGET).unwrap();
            assert_eq!(dp, Value::Radical(brute));
        }
    }
    let b = BetaSq::from_beta(0.7, 256);
    for k in 1..=3 {
        for n in 0..=4 {
            let dp = mom_dp(k, n, &b, RingTag::Float(256)).unwrap().to_f64();
            let brute = mom_bruteforce(k, n, &b, RingTag::Float(256), oracle::DEFAULT_BUDGET)
                .unwrap()
                .to_f64();
            assert!(rel(dp, brute) < 1e-10, "k={k} n={n}");
        }
    }
}

#[test]
fn enumeration_is_exchangeable() {
    let r = RationalRing::with_beta_sq(2).unwrap();
    let base = mom_bruteforce_in(&r, 3, 2, 16).unwrap();
    for perm in [[0, 1, 2], [1, 0, 2], [2, 1, 0], [1, 2, 0]] {
        assert_eq!(mom_bruteforce_permuted(&r, 3, 2, &perm, 16).unwrap(), base);
    }
    let base = mom_bruteforce_in(&r, 4, 2, 16).unwrap();
    assert_eq!(
        mom_bruteforce_permuted(&r, 4, 2, &[3, 1, 0, 2], 16).unwrap(),
        base
    );
}

#[test]
fn diagonal_tuples() {
    for (k, n) in [(2, 3), (3, 4), (4, 3)] {
        let h = lcl_histogram(k, n, 16).unwrap();
        // only the 2^n all-equal tuples reach the top bin
        assert_eq!(*h.last().unwrap(), 1 << n);
        assert_eq!(h.iter().sum::<u64>(), 1 << (k * n));
        // their share of MoM_n is 2^{−kn}·2^n·2^{β²k²n}; at β² = 1 that is 2^{(k²−k+1)n}
        let diag = pow2(-((k * n) as i64)) * int(1 << n) * pow2((k * k * n) as i64);
        assert_eq!(diag, pow2(((k * k - k + 1) * n) as i64));
    }
}

#[test]
fn two_particle_closed_form_integer_beta() {
    for b in [1i64, 2] {
        let b2 = b * b;
        let series = mom_dp_series(2, 40, &BetaSq::integer(b2), RingTag::Rational).unwrap();
        for (n, v) in series.iter().enumerate() {
            let n = n as i64;
            // 2^{2β²n−1}(2^{(2β²−1)n} − 1)/(2^{2β²−1} − 1) + 2^{(4β²−1)n}
            let expect = pow2(2 * b2 * n - 1) * (pow2((2 * b2 - 1) * n) - int(1))
                / (pow2(2 * b2 - 1) - int(1))
                + pow2((4 * b2 - 1) * n);
            assert_eq!(v.as_rational().unwrap(), expect, "beta={b} n={n}");
        }
    }
}

#[test]
fn two_particle_closed_form_float_beta() {
    let prec = 256;
    for beta in [0.3, 0.9, 1.3] {
        let bs = BetaSq::from_beta(beta, prec);
        let x = bs.to_bigfloat(prec + 64);
        let series = mom_dp_series(2, 40, &bs, RingTag::Float(prec)).unwrap();
        let two = |e: BigFloat| BigFloat::exp2(&e);
        let c = |v: i64| BigFloat::from_i64(v, prec + 64);
        for (n, v) in series.iter().enumerate() {
            let nn = c(n as i64);
            let a = &c(2) * &x - c(1);
            let expect = two(&c(2) * &x * &nn - c(1)) * (two(&a * &nn) - c(1))
                / (two(a.clone()) - c(1))
                + two((&c(4) * &x - c(1)) * &nn);
            let got = v.to_bigfloat(prec + 64);
            let err = ((got - &expect) / expect).abs().to_f64();
            assert!(err < 1e-12, "beta={beta} n={n} err={err}");
        }
    }
}

#[test]
fn critical_two_particle_values_are_exact() {
    let series = mom_dp_series(2, 40, &BetaSq::ratio(1, 2), RingTag::Radical(2)).unwrap();
    for (n, v) in series.iter().enumerate() {
        // (n + 2)·2^{n−1}
        let expect = int(n as i64 + 2) * pow2(n as i64 - 1);
        assert_eq!(v.as_rational(), Some(expect), "n={n}");
    }
}

#[test]
fn symbolic_form_matches_dp() {
    let betas = [
        BetaSq::ratio(3, 10),
        BetaSq::ratio(7, 5),
        BetaSq::from_beta(0.83, 256),
        BetaSq::integer(1),
    ];
    for k in 1..=5 {
        let g = mom_symbolic(k).unwrap();
        for b in &betas {
            let dp = mom_dp_series(k, 12, b, b.auto_ring(256)).unwrap();
            for (n, v) in dp.iter().enumerate() {
                let s = evaluate_genpoly(&g, b, n as u64, 256).unwrap();
                if b.as_exact().is_some() {
                    assert_eq!(&s, v, "k={k} beta^2={b} n={n}");
                } else {
                    let (s, v) = (s.to_bigfloat(256), v.to_bigfloat(256));
                    let err = ((s - &v) / v).abs();
                    assert!(err < BigFloat::from_f64(1e-60, 256), "k={k} n={n}");
                }
            }
        }
    }
}

#[test]
fn symbolic_form_reports_poles() {
    let g = mom_symbolic(2).unwrap();
    assert!(matches!(
        evaluate_genpoly(&g, &BetaSq::ratio(1, 2), 3, 256),
        Err(brw_mom::engine::EngineError::PoleAtCriticalBeta { .. })
    ));
}

#[test]
fn polynomials_obey_degree_law() {
    for (k, beta, degree) in [
        (2usize, 1u32, 3u64),
        (3, 1, 7),
        (4, 1, 13),
        (2, 2, 15),
        (1, 2, 4),
    ] {
        let p = mom_polynomial(k, beta).unwrap();
        assert_eq!(p.degree(), degree);
        assert!(p.leading_coefficient() > int(0));
        let exact = mom_dp_series(
            k,
            degree as usize + 3,
            &BetaSq::integer((beta * beta) as i64),
            RingTag::Rational,
        )
        .unwrap();
        for (n, v) in exact.iter().enumerate() {
            assert_eq!(
                p.eval_depth(n as u32),
                v.as_rational().unwrap(),
                "k={k} beta={beta} n={n}"
            );
        }
    }
}

#[test]
fn no_resonances_for_small_integer_beta() {
    // every coefficient of the closed form is finite at t = 2^{β²} here,
    // so the interpolation fallback is never needed
    for k in 1..=5 {
        for beta in 1..=3 {
            let p = mom_polynomial(k, beta).unwrap();
            assert_eq!(p.method, PolyMethod::Symbolic, "k={k} beta={beta}");
            assert_eq!(
                p.degree() as i64,
                (k * k) as i64 * (beta * beta) as i64 - k as i64 + 1
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // E[Z^k] ≥ E[Z]^k = 2^{kβ²n}
    #[test]
    fn jensen_lower_bound(k in 1usize..=4, n in 0usize..=10, beta in 0.0f64..1.5) {
        let b = BetaSq::from_beta(beta, 128);
        let v = mom_dp(k, n, &b, RingTag::Float(128)).unwrap().to_f64();
        let floor = 2f64.powf(k as f64 * b.to_f64() * n as f64);
        prop_assert!(v >= floor * (1.0 - 1e-14), "{} < {}", v, floor);
    }

    // MoM_n is increasing in β on the exact side too
    #[test]
    fn monotone_in_beta(k in 2usize..=4, n in 1usize..=8, p in 0i64..=12) {
        let lo = mom_dp(k, n, &BetaSq::ratio(p, 4), RingTag::Radical(4)).unwrap();
        let hi = mom_dp(k, n, &BetaSq::ratio(p + 1, 4), RingTag::Radical(4)).unwrap();
        prop_assert!(hi.to_f64() > lo.to_f64());
    }

    #[test]
    fn rings_agree(k in 1usize..=4, n in 0usize..=9, p in 0i64..=9) {
        let b = BetaSq::ratio(p, 3);
        let exact = mom_dp(k, n, &b, RingTag::Radical(3)).unwrap().to_f64();
        let float = mom_dp(k, n, &b, RingTag::Float(192)).unwrap().to_f64();
        prop_assert!(rel(float, exact) < 1e-14);
    }
}
