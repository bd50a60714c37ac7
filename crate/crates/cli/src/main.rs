//! `brwmom`: moments of moments of the branching random walk from the command line.

mod output;
mod verify;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use brw_mom::asymptotics::{self, leading_term, AsymptoticsError, SweepConfig, SWEEP_CSV_HEADER};
use brw_mom::engine::{self, mom_dp, mom_polynomial, EngineError};
use brw_mom::montecarlo::{estimate_mom, MonteCarloError, SimConfig};
use brw_mom::numeric::{BetaSq, NumericError, RingTag, MIN_PRECISION};
use brw_mom::oracle::OracleError;
use brw_mom::rmt::RmtError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use output::{
    beta_sq_string, decimal, exponent_value, f64_cell, number, value_cell, value_json,
    OutputRecord, Provenance, Table,
};

#[derive(Parser, Debug)]
#[command(
    name = "brwmom",
    version,
    about = "Moments of moments of the branching random walk"
)]
struct Cli {
    /// Output format; JSON unless stated otherwise for a command.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Working precision in bits for floating-point results.
    #[arg(long, global = true, env = "BRWMOM_PRECISION", default_value_t = 256)]
    precision: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RingChoice {
    Auto,
    Rational,
    Radical,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Oracle,
    Mc,
    Appendix,
    Rmt,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct BetaArg {
    /// β as a decimal; exact rings are used when β² is an integer.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// β² as an exact rational "p/m".
    #[arg(long)]
    beta_sq_rational: Option<String>,
}

impl BetaArg {
    fn resolve(&self, prec: usize) -> Result<BetaSq, CliError> {
        let b = match (&self.beta, &self.beta_sq_rational) {
            (Some(s), _) => BetaSq::from_beta_decimal(s, prec)?,
            (None, Some(s)) => BetaSq::parse_rational(s)?,
            (None, None) => unreachable!("clap enforces the group"),
        };
        if b.is_negative() {
            return Err(CliError::Usage("beta^2 must be non-negative".into()));
        }
        Ok(b)
    }

    fn echo(&self, params: &mut Map<String, Json>) {
        if let Some(b) = &self.beta {
            params.insert("beta".into(), json!(b));
        }
        if let Some(b) = &self.beta_sq_rational {
            params.insert("beta_sq_rational".into(), json!(b));
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact or high-precision MoM_n(k, β).
    Mom {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        beta: BetaArg,
        #[arg(long, value_enum, default_value_t = RingChoice::Auto)]
        ring: RingChoice,
    },
    /// MoM_n(k, β) as a polynomial in 2^n for integer β.
    Poly {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        beta: u32,
    },
    /// Regime and leading coefficient of MoM_n(k, β) as n grows.
    Asym {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[command(flatten)]
        beta: BetaArg,
    },
    /// Leading coefficient over a grid of β. CSV by default.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        beta_min: f64,
        #[arg(long)]
        beta_max: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        steps: u64,
        /// Grid points with |β² − 1/m| below this are treated as exactly 1/m.
        #[arg(long, default_value_t = 1e-9)]
        pole_tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a cross-check suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Largest k·n enumerated by the brute-force oracle.
        #[arg(long, default_value_t = brw_mom::oracle::DEFAULT_BUDGET)]
        budget: u32,
    },
    /// Monte Carlo estimate of MoM_n(k, β) compared with the exact value.
    Mc {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run even when kβ² > 1, where the estimator has no useful error bars.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    RingMismatch(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("k*beta^2 = {0} > 1: the estimator is heavy-tailed here; pass --force to run anyway")]
    HeavyTail(String),
    #[error("{0} check(s) failed")]
    VerifyFailed(usize),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::RingMismatch(_) => 3,
            CliError::Io { .. } => 4,
            CliError::HeavyTail(_) => 5,
            CliError::VerifyFailed(_) | CliError::Compute(_) => 1,
        }
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::RingMismatch { .. } => CliError::RingMismatch(e.to_string()),
            NumericError::Parse(_) | NumericError::NegativeBetaSq => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::RingMismatch { .. } => CliError::RingMismatch(e.to_string()),
            EngineError::NonPositiveK => CliError::Usage(e.to_string()),
            EngineError::Numeric(n) => n.into(),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<AsymptoticsError> for CliError {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::Engine(inner) => inner.into(),
            AsymptoticsError::UnsupportedK { .. }
            | AsymptoticsError::InvalidRange { .. }
            | AsymptoticsError::InvalidSweep { .. }
            | AsymptoticsError::RegimeViolation { .. } => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Numeric(n) => n.into(),
            OracleError::BudgetExceeded { .. } => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<MonteCarloError> for CliError {
    fn from(e: MonteCarloError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<RmtError> for CliError {
    fn from(e: RmtError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn ring_tag(choice: RingChoice, beta_sq: &BetaSq, prec: usize) -> Result<RingTag, CliError> {
    Ok(match choice {
        RingChoice::Auto => beta_sq.auto_ring(prec),
        RingChoice::Rational => RingTag::Rational,
        RingChoice::Float => RingTag::Float(prec),
        RingChoice::Radical => {
            let q = beta_sq.as_exact().ok_or_else(|| {
                CliError::RingMismatch(format!(
                    "the radical ring needs an exact beta^2; got {beta_sq} (use --beta-sq-rational)"
                ))
            })?;
            let m =
                q.denom().to_string().parse::<u32>().map_err(|_| {
                    CliError::RingMismatch(format!("denominator of {q} is too large"))
                })?;
            RingTag::Radical(m)
        }
    })
}

fn cmd_mom(
    k: usize,
    n: usize,
    beta: &BetaArg,
    ring: RingChoice,
    prec: usize,
) -> Result<OutputRecord, CliError> {
    let beta_sq = beta.resolve(prec)?;
    let tag = ring_tag(ring, &beta_sq, prec)?;
    let v = mom_dp(k, n, &beta_sq, tag)?;
    let mut params = Map::new();
    params.insert("k".into(), json!(k));
    params.insert("n".into(), json!(n));
    beta.echo(&mut params);
    params.insert("ring".into(), json!(format!("{ring:?}").to_lowercase()));
    params.insert("precision".into(), json!(prec));
    let ring_name = tag.to_string();
    Ok(OutputRecord {
        command: "mom",
        parameters: params,
        result: json!({ "mom": value_json(&v, &ring_name, prec), "beta_sq": beta_sq_string(&beta_sq) }),
        provenance: Provenance::Engine,
        table: Table {
            header: vec!["k", "n", "beta_sq", "ring", "value"],
            rows: vec![vec![
                k.to_string(),
                n.to_string(),
                beta_sq_string(&beta_sq),
                ring_name,
                value_cell(&v),
            ]],
        },
    })
}

fn cmd_poly(k: usize, beta: u32) -> Result<OutputRecord, CliError> {
    let p = mom_polynomial(k, beta)?;
    let rows = p.rows();
    let frac = |q: &brw_mom::BigRat| format!("{}/{}", q.numer(), q.denom());
    let coefficients: Vec<Json> = rows
        .iter()
        .map(|(d, c)| json!({ "degree": d, "coefficient": frac(c) }))
        .collect();
    let mut params = Map::new();
    params.insert("k".into(), json!(k));
    params.insert("beta".into(), json!(beta));
    Ok(OutputRecord {
        command: "poly",
        parameters: params,
        result: json!({
            "degree": p.degree(),
            "method": match p.method { engine::PolyMethod::Symbolic => "symbolic", engine::PolyMethod::Interpolated => "interpolated" },
            "coefficients": coefficients,
        }),
        provenance: Provenance::Engine,
        table: Table {
            header: vec!["degree", "coefficient"],
            rows: rows
                .iter()
                .map(|(d, c)| vec![d.to_string(), frac(c)])
                .collect(),
        },
    })
}

fn cmd_asym(k: usize, beta: &BetaArg, prec: usize) -> Result<OutputRecord, CliError> {
    let beta_sq = beta.resolve(prec)?;
    let lt = leading_term(k, &beta_sq, prec)?;
    let ring_name = match &lt.coefficient {
        brw_mom::Value::Rational(_) => "rational".to_string(),
        brw_mom::Value::Radical(r) => format!("radical({})", r.m()),
        brw_mom::Value::Float(x) => format!("float({})", x.precision()),
    };
    let exponent = exponent_value(lt.exponent(), &beta_sq);
    let mut params = Map::new();
    params.insert("k".into(), json!(k));
    beta.echo(&mut params);
    params.insert("precision".into(), json!(prec));
    Ok(OutputRecord {
        command: "asym",
        parameters: params,
        result: json!({
            "beta_sq": beta_sq_string(&beta_sq),
            "regime": lt.regime.tag.as_str(),
            "exponent": exponent,
            "exponent_form": lt.exponent().to_string(),
            "n_power": lt.n_power(),
            "coefficient": value_json(&lt.coefficient, &ring_name, prec),
            "method": lt.method.as_str(),
            "error": lt.error.as_ref().map(decimal),
        }),
        provenance: Provenance::Engine,
        table: Table {
            header: vec![
                "k",
                "beta_sq",
                "regime",
                "exponent",
                "n_power",
                "coefficient",
                "method",
            ],
            rows: vec![vec![
                k.to_string(),
                beta_sq_string(&beta_sq),
                lt.regime.tag.as_str().into(),
                exponent,
                lt.n_power().to_string(),
                value_cell(&lt.coefficient),
                lt.method.as_str().into(),
            ]],
        },
    })
}

fn cmd_sweep(cfg: &SweepConfig) -> Result<OutputRecord, CliError> {
    let rows = asymptotics::sweep(cfg)?;
    let json_rows: Vec<Json> = rows
        .iter()
        .map(|r| {
            json!({
                "beta": number(r.beta),
                "beta_sq": number(r.beta_sq.to_f64()),
                "regime": r.regime.tag.as_str(),
                "exponent": number(r.exponent()),
                "n_power": r.regime.n_power,
                "coefficient": number(r.coefficient.to_f64()),
                "method": r.method.as_str(),
            })
        })
        .collect();
    let mut params = Map::new();
    params.insert("k".into(), json!(cfg.k));
    params.insert("beta_min".into(), number(cfg.beta_min));
    params.insert("beta_max".into(), number(cfg.beta_max));
    params.insert("steps".into(), json!(cfg.steps));
    params.insert("pole_tolerance".into(), number(cfg.pole_tolerance));
    params.insert("precision".into(), json!(cfg.precision));
    Ok(OutputRecord {
        command: "sweep",
        parameters: params,
        result: json!({ "rows": json_rows }),
        provenance: Provenance::Engine,
        table: Table {
            header: SWEEP_CSV_HEADER.split(',').collect(),
            rows: rows
                .iter()
                .map(|r| r.to_csv_line().split(',').map(String::from).collect())
                .collect(),
        },
    })
}

fn cmd_verify(suite: Suite, budget: u32, prec: usize) -> Result<(OutputRecord, usize), CliError> {
    let (checks, provenance) = match suite {
        Suite::Oracle => (verify::oracle(budget, prec)?, Provenance::Oracle),
        Suite::Mc => (verify::montecarlo(prec)?, Provenance::MonteCarlo),
        Suite::Appendix => (verify::appendix(prec)?, Provenance::AppendixFixture),
        Suite::Rmt => (verify::rmt(prec)?, Provenance::Engine),
    };
    let failed = checks.iter().filter(|c| !c.pass).count();
    for c in checks.iter().filter(|c| !c.pass) {
        log::warn!(
            "FAIL {}: {} vs {} ({})",
            c.name,
            c.value,
            c.reference,
            c.tolerance
        );
    }
    let json_checks: Vec<Json> = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name, "value": c.value, "reference": c.reference,
                "tolerance": c.tolerance, "pass": c.pass,
            })
        })
        .collect();
    let mut params = Map::new();
    params.insert("suite".into(), json!(format!("{suite:?}").to_lowercase()));
    params.insert("budget".into(), json!(budget));
    params.insert("precision".into(), json!(prec));
    let record = OutputRecord {
        command: "verify",
        parameters: params,
        result: json!({ "passed": failed == 0, "failed": failed, "checks": json_checks }),
        provenance,
        table: Table {
            header: vec!["name", "value", "reference", "tolerance", "pass"],
            rows: checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.value.clone(),
                        c.reference.clone(),
                        c.tolerance.clone(),
                        c.pass.to_string(),
                    ]
                })
                .collect(),
        },
    };
    Ok((record, failed))
}

fn cmd_mc(k: usize, cfg: &SimConfig, force: bool, prec: usize) -> Result<OutputRecord, CliError> {
    let beta_sq = BetaSq::from_beta(cfg.beta, prec);
    let load = k as f64 * cfg.beta * cfg.beta;
    if load > 1.0 && !force {
        return Err(CliError::HeavyTail(format!("{load}")));
    }
    let est = estimate_mom(cfg, k)?;
    let exact = mom_dp(k, cfg.n, &beta_sq, beta_sq.auto_ring(prec))?.to_f64();
    let z = if est.stderr > 0.0 {
        (est.mean - exact) / est.stderr
    } else if est.mean == exact {
        0.0
    } else {
        f64::NAN
    };
    let mut params = Map::new();
    params.insert("k".into(), json!(k));
    params.insert("n".into(), json!(cfg.n));
    params.insert("beta".into(), number(cfg.beta));
    params.insert("trials".into(), json!(cfg.trials));
    params.insert("seed".into(), json!(cfg.seed));
    params.insert("force".into(), json!(force));
    Ok(OutputRecord {
        command: "mc",
        parameters: params,
        result: json!({
            "estimate": number(est.mean),
            "stderr": number(est.stderr),
            "exact": number(exact),
            "z_score": number(z),
            "heavy_tail": est.heavy_tail,
        }),
        provenance: Provenance::MonteCarlo,
        table: Table {
            header: vec![
                "k",
                "n",
                "beta",
                "trials",
                "seed",
                "estimate",
                "stderr",
                "exact",
                "z_score",
                "heavy_tail",
            ],
            rows: vec![vec![
                k.to_string(),
                cfg.n.to_string(),
                f64_cell(cfg.beta),
                cfg.trials.to_string(),
                cfg.seed.to_string(),
                f64_cell(est.mean),
                f64_cell(est.stderr),
                f64_cell(exact),
                f64_cell(z),
                est.heavy_tail.to_string(),
            ]],
        },
    })
}

fn render(record: &OutputRecord, format: Format) -> String {
    match format {
        Format::Json => record.to_json(),
        Format::Csv => record.to_csv(),
    }
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let prec = cli.precision;
    if prec < MIN_PRECISION {
        return Err(CliError::Usage(format!(
            "precision must be at least {MIN_PRECISION} bits"
        )));
    }
    let format = cli.format.unwrap_or(Format::Json);
    match cli.command {
        Command::Mom { k, n, beta, ring } => {
            emit(&render(&cmd_mom(k as usize, n, &beta, ring, prec)?, format))
        }
        Command::Poly { k, beta } => emit(&render(&cmd_poly(k as usize, beta)?, format)),
        Command::Asym { k, beta } => emit(&render(&cmd_asym(k as usize, &beta, prec)?, format)),
        Command::Sweep {
            k,
            beta_min,
            beta_max,
            steps,
            pole_tolerance,
            out,
        } => {
            let cfg = SweepConfig {
                k: k as usize,
                beta_min,
                beta_max,
                steps: steps as usize,
                precision: prec,
                pole_tolerance,
            };
            let text = render(&cmd_sweep(&cfg)?, cli.format.unwrap_or(Format::Csv));
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|source| CliError::Io { path, source })
                }
                None => emit(&text),
            }
        }
        Command::Verify { suite, budget } => {
            let (record, failed) = cmd_verify(suite, budget, prec)?;
            emit(&render(&record, format))?;
            if failed > 0 {
                return Err(CliError::VerifyFailed(failed));
            }
            Ok(())
        }
        Command::Mc {
            k,
            n,
            beta,
            trials,
            seed,
            force,
        } => {
            if !beta.is_finite() {
                return Err(CliError::Usage("beta must be finite".into()));
            }
            let cfg = SimConfig {
                precision: prec,
                ..SimConfig::new(n, beta, trials, seed)
            };
            emit(&render(&cmd_mc(k as usize, &cfg, force, prec)?, format))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
