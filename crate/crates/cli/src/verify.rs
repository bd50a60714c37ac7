//! Cross-checks behind `brwmom verify`.

use brw_mom::asymptotics::{
    appendix_coefficient, classify_regime, rho, sigma, tau, AsymptoticsError, RegimeTag,
};
use brw_mom::engine::{mom_dp, symbolic_coefficient};
use brw_mom::montecarlo::{estimate_moments, SimConfig};
use brw_mom::numeric::{BetaSq, BigFloat, BigRat, ExpPair, RingTag};
use brw_mom::oracle::mom_bruteforce;
use brw_mom::rmt::{dual_path_gap, growth_exponent_compare, log_slope, unitary_mom_k1_integer};

use crate::output::decimal;
use crate::CliError;

pub struct Check {
    pub name: String,
    pub value: String,
    pub reference: String,
    pub tolerance: String,
    pub pass: bool,
}

impl Check {
    fn exact(name: String, value: String, reference: String) -> Self {
        let pass = value == reference;
        Check {
            name,
            value,
            reference,
            tolerance: "exact".into(),
            pass,
        }
    }

    fn relative(name: String, value: &BigFloat, reference: &BigFloat, tol: f64) -> Self {
        let err = ((value - reference) / reference).abs().to_f64();
        Check {
            name,
            value: decimal(value),
            reference: decimal(reference),
            tolerance: format!("{tol:e} rel"),
            pass: err <= tol,
        }
    }
}

pub fn oracle(budget: u32, prec: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for b2 in [1i64, 4] {
        let beta_sq = BetaSq::integer(b2);
        for k in 1..=3usize {
            for n in 0..=4usize {
                if (k * n) as u32 > budget {
                    continue;
                }
                let dp = mom_dp(k, n, &beta_sq, RingTag::Rational)?;
                let brute = mom_bruteforce(k, n, &beta_sq, RingTag::Rational, budget)?;
                out.push(Check::exact(
                    format!("k={k} n={n} beta^2={b2}"),
                    dp.to_string(),
                    brute.to_string(),
                ));
            }
        }
    }
    let half = BetaSq::ratio(1, 2);
    let float = BetaSq::from_beta(0.7, prec);
    for k in 1..=3usize {
        for n in 0..=4usize {
            if (k * n) as u32 > budget {
                continue;
            }
            let dp = mom_dp(k, n, &half, RingTag::Radical(2))?;
            let brute = mom_bruteforce(k, n, &half, RingTag::Radical(2), budget)?;
            out.push(Check::exact(
                format!("k={k} n={n} beta^2=1/2"),
                dp.to_string(),
                brute.to_string(),
            ));
            let dp = mom_dp(k, n, &float, RingTag::Float(prec))?.to_bigfloat(prec);
            let brute =
                mom_bruteforce(k, n, &float, RingTag::Float(prec), budget)?.to_bigfloat(prec);
            out.push(Check::relative(
                format!("k={k} n={n} beta=0.7"),
                &dp,
                &brute,
                1e-10,
            ));
        }
    }
    Ok(out)
}

pub fn montecarlo(prec: usize) -> Result<Vec<Check>, CliError> {
    let cfg = SimConfig::new(6, 0.3, 100_000, 42);
    let est = estimate_moments(&cfg, &[1, 2])?;
    let beta_sq = BetaSq::from_beta(0.3, prec);
    est.iter()
        .map(|e| {
            let exact = mom_dp(e.k, cfg.n, &beta_sq, RingTag::Float(prec))?.to_f64();
            let z = (e.mean - exact) / e.stderr;
            Ok(Check {
                name: format!("k={} n=6 beta=0.3 trials=100000 seed=42", e.k),
                value: format!("{} ± {}", e.mean, e.stderr),
                reference: format!("{exact}"),
                tolerance: "|z| <= 3".into(),
                pass: z.abs() <= 3.0,
            })
        })
        .collect()
}

/// Recursions and closed-form extraction against the transcribed tables.
pub fn appendix(prec: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for k in 2..=5usize {
        for beta in [0.25, 0.45, 0.8, 1.0] {
            let b = BetaSq::from_beta(beta, prec);
            let regime = classify_regime(k, &b);
            let table = match appendix_coefficient(k, &b, regime.tag, prec) {
                Ok(v) => v,
                Err(AsymptoticsError::NotTranscribed { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            let (label, ours) = match regime.tag {
                RegimeTag::SubCritical => ("rho", rho(k, &b, prec)?),
                RegimeTag::SuperCritical => ("tau", tau(k, &b, prec)?),
                RegimeTag::Critical => ("sigma", sigma(k)?),
            };
            let ours = ours.to_bigfloat(prec);
            out.push(Check::relative(
                format!("{label} k={k} beta={beta}"),
                &ours,
                &table,
                1e-12,
            ));
            if regime.tag == RegimeTag::SubCritical {
                let c = symbolic_coefficient(k, ExpPair::new(k as i64, 0))?;
                let sym = brw_mom::asymptotics::eval_coefficient(&c, &b, prec)?.to_bigfloat(prec);
                out.push(Check::relative(
                    format!("closed form k={k} beta={beta}"),
                    &sym,
                    &table,
                    1e-12,
                ));
            }
        }
    }
    for k in 2..=3usize {
        let s = sigma(k)?.to_bigfloat(prec);
        let table =
            appendix_coefficient(k, &BetaSq::ratio(1, k as i64), RegimeTag::Critical, prec)?;
        out.push(Check::relative(format!("sigma k={k}"), &s, &table, 1e-12));
    }
    Ok(out)
}

pub fn rmt(prec: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let gap = dual_path_gap(50, 4, prec)?;
    out.push(Check {
        name: "gamma product vs exact product, N <= 50, beta <= 4".into(),
        value: format!("{gap:e}"),
        reference: "0".into(),
        tolerance: "1e-12 rel".into(),
        pass: gap <= 1e-12,
    });
    let bad = (0..=10_000u64)
        .find(|&n| unitary_mom_k1_integer(n, 1) != BigRat::from_integer((n + 1).into()));
    out.push(Check {
        name: "beta=1 product equals N+1, N <= 10000".into(),
        value: bad.map_or("all equal".into(), |n| format!("differs at N={n}")),
        reference: "all equal".into(),
        tolerance: "exact".into(),
        pass: bad.is_none(),
    });
    for beta in [0.5, 1.0, 1.5] {
        let s = log_slope(&BigFloat::from_f64(beta, prec), 1_000, 10_000, prec)?;
        let b2 = beta * beta;
        out.push(Check {
            name: format!("log-slope N=1000..10000 beta={beta}"),
            value: format!("{s}"),
            reference: format!("{b2}"),
            tolerance: "2% rel".into(),
            pass: (s - b2).abs() <= 0.02 * b2,
        });
    }
    for (k, b, label) in [
        (1, BetaSq::from_beta(0.7, prec), "0.7"),
        (2, BetaSq::integer(1), "1"),
        (3, BetaSq::ratio(1, 3), "1/sqrt(3)"),
    ] {
        let c = growth_exponent_compare(k, &b)?;
        out.push(Check {
            name: format!("growth exponents k={k} beta={label}"),
            value: format!("n^{} 2^({}n)", c.brw.n_power, c.brw_rate),
            reference: format!("(log N)^{} N^{}", c.rmt_log_power, c.rmt_exponent),
            tolerance: "N = 2^n".into(),
            pass: c.matches,
        });
    }
    Ok(out)
}
