use std::fmt::Write as _;

use brw_mom::numeric::{BetaSq, BigFloat, ExpPair, Value};
use serde_json::{json, Map, Value as Json};

/// Which part of the library produced a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Engine,
    Oracle,
    MonteCarlo,
    AppendixFixture,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Engine => "engine",
            Provenance::Oracle => "oracle",
            Provenance::MonteCarlo => "montecarlo",
            Provenance::AppendixFixture => "appendix-fixture",
        }
    }
}

/// One command invocation: what was asked, what came back, who computed it.
pub struct OutputRecord {
    pub command: &'static str,
    pub parameters: Map<String, Json>,
    pub result: Json,
    pub provenance: Provenance,
    /// CSV rendering: header plus rows.
    pub table: Table,
}

#[derive(Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl OutputRecord {
    pub fn to_json(&self) -> String {
        let v = json!({
            "command": self.command,
            "parameters": self.parameters,
            "result": self.result,
            "provenance": self.provenance.as_str(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        self.table.to_csv()
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.header.join(",")).unwrap();
        for r in &self.rows {
            writeln!(out, "{}", r.join(",")).unwrap();
        }
        out
    }
}

/// Significant decimal digits carried by `prec` bits.
pub fn digits_for(prec: usize) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor() as usize
}

pub fn decimal(x: &BigFloat) -> String {
    x.to_decimal(digits_for(x.precision()))
}

/// Exact rationals as "p/q", radicals in 2^(j/m) form, floats as decimals
/// with the precision they were computed at.
pub fn value_json(v: &Value, ring: &str, prec: usize) -> Json {
    match v {
        Value::Float(x) => json!({
            "value": decimal(x),
            "exact": false,
            "ring": ring,
            "precision": x.precision(),
        }),
        exact => json!({
            "value": exact.to_string(),
            "exact": true,
            "ring": ring,
            "decimal": exact.to_bigfloat(prec).to_decimal(digits_for(prec)),
        }),
    }
}

/// Plain string form used in CSV cells.
pub fn value_cell(v: &Value) -> String {
    match v {
        Value::Float(x) => decimal(x),
        exact => exact.to_string(),
    }
}

pub fn beta_sq_string(b: &BetaSq) -> String {
    match b {
        BetaSq::Exact(q) => format!("{}/{}", q.numer(), q.denom()),
        BetaSq::Float(x) => decimal(x),
    }
}

/// pβ² + q, exact when β² is.
pub fn exponent_value(e: ExpPair, b: &BetaSq) -> String {
    match b {
        BetaSq::Exact(q) => {
            let v = e.value_rational(q);
            format!("{}/{}", v.numer(), v.denom())
        }
        BetaSq::Float(x) => decimal(&e.value_bigfloat(x)),
    }
}

/// f64 for JSON; non-finite values become null.
pub fn number(x: f64) -> Json {
    serde_json::Number::from_f64(x).map_or(Json::Null, Json::Number)
}

pub fn f64_cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}
