use std::path::Path;
use std::str::FromStr;

use assert_cmd::Command;
use brw_mom::asymptotics::{appendix_coefficient, RegimeTag};
use brw_mom::engine::mom_dp;
use brw_mom::{BetaSq, BigRat, RingTag};
use num_traits::{One, Zero};
use serde_json::Value as Json;

fn brwmom() -> Command {
    let mut c = Command::cargo_bin("brwmom").unwrap();
    c.env_remove("BRWMOM_PRECISION");
    c
}

fn run(args: &[&str]) -> std::process::Output {
    brwmom().args(args).output().unwrap()
}

fn json_ok(args: &[&str]) -> Json {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Json = serde_json::from_slice(&out.stdout).unwrap();
    validate(&v);
    v
}

fn validate(v: &Json) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Json = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(v)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}\n{v:#}");
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn rat(s: &str) -> BigRat {
    BigRat::from_str(s).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn mom_examples() {
    let v = json_ok(&[
        "mom", "--k", "2", "--n", "1", "--beta", "1", "--ring", "rational",
    ]);
    assert_eq!(v["result"]["mom"]["value"], "10/1");
    assert_eq!(v["result"]["mom"]["exact"], true);
    assert_eq!(v["provenance"], "engine");

    let v = json_ok(&[
        "mom",
        "--k",
        "2",
        "--n",
        "2",
        "--beta-sq-rational",
        "1/2",
        "--ring",
        "radical",
    ]);
    assert_eq!(v["result"]["mom"]["value"], "8");
    assert_eq!(v["result"]["mom"]["ring"], "radical(2)");

    let v = json_ok(&["mom", "--k", "1", "--n", "3", "--beta", "2"]);
    assert_eq!(v["result"]["mom"]["value"], "4096/1");
}

#[test]
fn mom_float_carries_precision() {
    let v = json_ok(&["mom", "--k", "2", "--n", "3", "--beta", "0.3"]);
    assert_eq!(v["result"]["mom"]["exact"], false);
    assert_eq!(v["result"]["mom"]["precision"], 256);
    // k=2 closed form at β² = 0.09, n = 3
    let b2: f64 = 0.09;
    let a = 2f64.powf(2.0 * b2 * 3.0 - 1.0) * (2f64.powf((2.0 * b2 - 1.0) * 3.0) - 1.0)
        / (2f64.powf(2.0 * b2 - 1.0) - 1.0)
        + 2f64.powf((4.0 * b2 - 1.0) * 3.0);
    let got: f64 = v["result"]["mom"]["value"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!((got / a - 1.0).abs() < 1e-12);
}

#[test]
fn precision_env_var_sets_the_default() {
    let out = brwmom()
        .env("BRWMOM_PRECISION", "128")
        .args(["mom", "--k", "2", "--n", "3", "--beta", "0.3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Json = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["mom"]["precision"], 128);

    let out = brwmom()
        .env("BRWMOM_PRECISION", "128")
        .args([
            "--precision",
            "192",
            "mom",
            "--k",
            "2",
            "--n",
            "3",
            "--beta",
            "0.3",
        ])
        .output()
        .unwrap();
    let v: Json = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["mom"]["precision"], 192);

    let status = brwmom()
        .env("BRWMOM_PRECISION", "8")
        .args(["mom", "--k", "1", "--n", "1", "--beta", "1"])
        .output();
    assert_eq!(status.unwrap().status.code(), Some(2));
}

#[test]
fn exact_values_survive_serialization() {
    for (k, n, b) in [(3usize, 20usize, "2"), (2, 40, "1"), (3, 4, "1/3")] {
        let v = json_ok(&[
            "mom",
            "--k",
            &k.to_string(),
            "--n",
            &n.to_string(),
            "--beta-sq-rational",
            b,
        ]);
        let text = v["result"]["mom"]["value"].as_str().unwrap();
        let beta_sq = BetaSq::Exact(rat(b));
        let direct = mom_dp(k, n, &beta_sq, beta_sq.auto_ring(256)).unwrap();
        assert_eq!(text, direct.to_string());
        if beta_sq.auto_ring(256) == RingTag::Rational {
            assert_eq!(rat(text), direct.as_rational().unwrap());
        }
    }
}

#[test]
fn invalid_flags_exit_2() {
    assert_eq!(code(&["mom", "--k", "0", "--n", "1", "--beta", "1"]), 2);
    assert_eq!(code(&["mom", "--k", "2", "--n", "1"]), 2);
    assert_eq!(
        code(&[
            "mom",
            "--k",
            "2",
            "--n",
            "1",
            "--beta",
            "1",
            "--beta-sq-rational",
            "1/2"
        ]),
        2
    );
    assert_eq!(
        code(&["mom", "--k", "2", "--n", "1", "--beta-sq-rational", "1/0"]),
        2
    );
    assert_eq!(code(&["poly", "--k", "2", "--beta", "0.5"]), 2);
    assert_eq!(
        code(&[
            "sweep",
            "--k",
            "2",
            "--beta-min",
            "1",
            "--beta-max",
            "0.5",
            "--steps",
            "10"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "sweep",
            "--k",
            "2",
            "--beta-min",
            "0.1",
            "--beta-max",
            "0.5",
            "--steps",
            "1"
        ]),
        2
    );
    assert_eq!(code(&["verify", "--suite", "everything"]), 2);
    assert_eq!(
        code(&["mc", "--k", "1", "--n", "3", "--beta", "0.3", "--trials", "0"]),
        2
    );
}

#[test]
fn ring_mismatch_exits_3() {
    assert_eq!(
        code(&["mom", "--k", "2", "--n", "2", "--beta", "0.3", "--ring", "radical"]),
        3
    );
    assert_eq!(
        code(&[
            "mom",
            "--k",
            "2",
            "--n",
            "2",
            "--beta-sq-rational",
            "1/2",
            "--ring",
            "rational"
        ]),
        3
    );
}

#[test]
fn poly_examples() {
    let out = run(&["--format", "csv", "poly", "--k", "2", "--beta", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("degree,coefficient"));
    assert_eq!(csv_rows(&text), vec![vec!["3", "3/2"], vec!["2", "-1/2"]]);

    let v = json_ok(&["poly", "--k", "1", "--beta", "2"]);
    let rows = v["result"]["coefficients"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["degree"], 4);
    assert_eq!(rows[0]["coefficient"], "1/1");
}

#[test]
fn poly_round_trip_matches_mom() {
    for (k, beta) in [(2, 1), (3, 1), (2, 2), (4, 1)] {
        let v = json_ok(&["poly", "--k", &k.to_string(), "--beta", &beta.to_string()]);
        let x = BigRat::from_integer(32.into());
        let mut total = BigRat::zero();
        for row in v["result"]["coefficients"].as_array().unwrap() {
            let d = row["degree"].as_u64().unwrap();
            let mut p = BigRat::one();
            for _ in 0..d {
                p *= &x;
            }
            total += rat(row["coefficient"].as_str().unwrap()) * p;
        }
        let m = json_ok(&[
            "mom",
            "--k",
            &k.to_string(),
            "--n",
            "5",
            "--beta",
            &beta.to_string(),
        ]);
        assert_eq!(
            rat(m["result"]["mom"]["value"].as_str().unwrap()),
            total,
            "k={k} beta={beta}"
        );
    }
}

#[test]
fn asym_examples() {
    let v = json_ok(&["asym", "--k", "2", "--beta", "1"]);
    assert_eq!(v["result"]["regime"], "super");
    assert_eq!(v["result"]["exponent"], "3/1");
    assert_eq!(v["result"]["coefficient"]["value"], "3/2");

    let v = json_ok(&["asym", "--k", "2", "--beta", "0.7071067811865476"]);
    assert_eq!(v["result"]["regime"], "critical");
    assert_eq!(v["result"]["n_power"], 1);
    let c: f64 = v["result"]["coefficient"]["decimal"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!((c - 0.5).abs() < 1e-12);

    let v = json_ok(&["asym", "--k", "3", "--beta", "0.3"]);
    assert_eq!(v["result"]["regime"], "sub");
    let e: f64 = v["result"]["exponent"].as_str().unwrap().parse().unwrap();
    assert!((e - 0.27).abs() < 1e-12);
    let c: f64 = v["result"]["coefficient"]["value"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    let table =
        appendix_coefficient(3, &BetaSq::from_beta(0.3, 256), RegimeTag::SubCritical, 256).unwrap();
    assert!((c / table.to_f64() - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_examples() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k2.csv");
    let file_str = file.to_str().unwrap();
    let out = run(&[
        "sweep",
        "--k",
        "2",
        "--beta-min",
        "0.05",
        "--beta-max",
        "2",
        "--steps",
        "101",
        "--out",
        file_str,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("beta,beta_sq,regime,exponent,n_power,coefficient,method")
    );
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 101);
    for r in &rows {
        let c: f64 = r[5].parse().unwrap();
        assert!(c.is_finite() && c > 0.0, "{r:?}");
    }

    let out = run(&[
        "sweep",
        "--k",
        "2",
        "--beta-min",
        "0.1",
        "--beta-max",
        "0.2",
        "--steps",
        "2",
    ]);
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let c: f64 = rows[0][5].parse().unwrap();
    let expected = 1.0 / (2.0 * (1.0 - 2f64.powf(-0.98)));
    assert!((c / expected - 1.0).abs() < 1e-12, "{c} vs {expected}");

    let out = run(&[
        "sweep",
        "--k",
        "3",
        "--beta-min",
        "0.05",
        "--beta-max",
        "2",
        "--steps",
        "101",
    ]);
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    for r in &rows {
        let beta: f64 = r[0].parse().unwrap();
        let expect = if beta < 1.0 / 3f64.sqrt() {
            "sub"
        } else {
            "super"
        };
        assert_eq!(r[2], expect, "{r:?}");
    }
}

#[test]
fn sweep_json_validates() {
    let v = json_ok(&[
        "--format",
        "json",
        "sweep",
        "--k",
        "3",
        "--beta-min",
        "0.5",
        "--beta-max",
        "0.6",
        "--steps",
        "11",
    ]);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 11);
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let args = [
        "sweep",
        "--k",
        "2",
        "--beta-min",
        "0.1",
        "--beta-max",
        "0.5",
        "--steps",
        "3",
        "--out",
    ];
    let mut all: Vec<&str> = args.to_vec();
    all.push(bad.to_str().unwrap());
    assert_eq!(code(&all), 4);
}

#[test]
fn verify_suites() {
    let v = {
        let out = run(&["verify", "--suite", "oracle", "--budget", "16"]);
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<Json>(&out.stdout).unwrap()
    };
    validate(&v);
    assert_eq!(v["provenance"], "oracle");
    assert_eq!(v["result"]["passed"], true);

    let out = run(&["verify", "--suite", "rmt"]);
    assert_eq!(out.status.code(), Some(0));
    validate(&serde_json::from_slice(&out.stdout).unwrap());

    let out = run(&["verify", "--suite", "mc"]);
    assert_eq!(out.status.code(), Some(0));
    validate(&serde_json::from_slice(&out.stdout).unwrap());
}

/// The transcribed k=4 super-critical and k=5 tables carry a spurious term,
/// so those rows fail and the suite reports it with exit 1. Every other row
/// has to pass.
#[test]
fn verify_appendix_flags_exactly_the_known_table_errors() {
    let out = run(&["verify", "--suite", "appendix"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Json = serde_json::from_slice(&out.stdout).unwrap();
    validate(&v);
    assert_eq!(v["provenance"], "appendix-fixture");
    let checks = v["result"]["checks"].as_array().unwrap();
    let mut failing: Vec<&str> = checks
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    failing.sort_unstable();
    let mut expected = vec![
        "closed form k=5 beta=0.25",
        "rho k=5 beta=0.25",
        "tau k=4 beta=0.8",
        "tau k=4 beta=1",
        "tau k=5 beta=0.45",
        "tau k=5 beta=0.8",
        "tau k=5 beta=1",
    ];
    expected.sort_unstable();
    assert_eq!(failing, expected);
    assert!(checks.len() > expected.len() + 10);
}

#[test]
fn mc_examples() {
    let v = json_ok(&[
        "mc", "--k", "1", "--n", "6", "--beta", "0.3", "--trials", "100000", "--seed", "42",
    ]);
    let z = v["result"]["z_score"].as_f64().unwrap();
    assert!(z.abs() <= 3.0, "z = {z}");
    let exact = v["result"]["exact"].as_f64().unwrap();
    assert!((exact - 2f64.powf(0.54)).abs() < 1e-12);

    let v = json_ok(&[
        "mc", "--k", "2", "--n", "6", "--beta", "0", "--trials", "1000", "--seed", "3",
    ]);
    assert_eq!(v["result"]["estimate"].as_f64(), Some(1.0));
    assert_eq!(v["result"]["stderr"].as_f64(), Some(0.0));

    assert_eq!(
        code(&["mc", "--k", "3", "--n", "4", "--beta", "0.8", "--trials", "100"]),
        5
    );
    let v = json_ok(&[
        "mc", "--k", "3", "--n", "4", "--beta", "0.8", "--trials", "100", "--force",
    ]);
    assert_eq!(v["result"]["heavy_tail"], true);
}

#[test]
fn identical_flags_give_identical_bytes() {
    let cases: [&[&str]; 5] = [
        &[
            "mc", "--k", "2", "--n", "6", "--beta", "0.3", "--trials", "20000", "--seed", "42",
        ],
        &[
            "sweep",
            "--k",
            "4",
            "--beta-min",
            "0.05",
            "--beta-max",
            "2",
            "--steps",
            "41",
        ],
        &["asym", "--k", "5", "--beta", "0.45"],
        &["mom", "--k", "3", "--n", "9", "--beta", "0.8"],
        &["--format", "csv", "poly", "--k", "3", "--beta", "1"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
