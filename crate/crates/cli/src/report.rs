//! Serialization of congruence reports as JSON, CSV or an aligned table.
//!
//! Every number is written as a decimal string. Lemma-style identities over Q
//! carry modulus `"0"` and rational sides such as `"-5/12"`; polynomial sides
//! are written as `"[c0,c1,...]"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use invsum::congruence::{CongruenceReport, Params, TheoremId, Value, Variant};
use invsum::{Rational, Ring};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireParams {
    pub n: Option<String>,
    pub p: Option<String>,
    pub e: Option<String>,
    pub c: Option<String>,
    pub m: Option<String>,
    pub i: Option<String>,
    pub variant: Option<String>,
}

/// The serialized shape of one report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireReport {
    pub theorem: String,
    pub sequence: String,
    pub params: WireParams,
    pub lhs: String,
    pub rhs: String,
    pub modulus: String,
    pub pass: bool,
}

fn opt<T: ToString>(v: Option<T>) -> Option<String> {
    v.map(|x| x.to_string())
}

impl From<&CongruenceReport> for WireReport {
    fn from(r: &CongruenceReport) -> Self {
        let p = &r.params;
        WireReport {
            theorem: r.theorem.id().to_string(),
            sequence: r.sequence.clone(),
            params: WireParams {
                n: opt(p.n),
                p: opt(p.p),
                e: opt(p.e),
                c: opt(p.c),
                m: opt(p.m),
                i: opt(p.i),
                variant: opt(p.variant),
            },
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            modulus: r.modulus().to_string(),
            pass: r.pass,
        }
    }
}

fn parse_field<T: std::str::FromStr>(name: &str, v: &Option<String>) -> Result<Option<T>, CliError> {
    v.as_deref()
        .map(|s| s.parse::<T>().map_err(|_| CliError::Parse(format!("bad {name}: {s}"))))
        .transpose()
}

fn parse_value(s: &str, modulus: u64, params: &Params) -> Result<Value, CliError> {
    let bad = || CliError::Parse(format!("bad value: {s}"));
    if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let ring = Ring::new(params.p.ok_or_else(bad)?, 1)?;
        if inner.is_empty() {
            return Ok(Value::Poly(Vec::new()));
        }
        let coeffs = inner
            .split(',')
            .map(|c| ring.residue(c.parse().map_err(|_| bad())?).map_err(CliError::from))
            .collect::<Result<_, _>>()?;
        return Ok(Value::Poly(coeffs));
    }
    if modulus == 0 {
        return s.parse::<Rational>().map(Value::Exact).map_err(|_| bad());
    }
    let ring = Ring::new(params.p.ok_or_else(bad)?, params.e.ok_or_else(bad)?)?;
    if ring.modulus() != modulus {
        return Err(CliError::Parse(format!("modulus {modulus} does not match {ring}")));
    }
    Ok(Value::Residue(ring.residue(s.parse().map_err(|_| bad())?)?))
}

impl TryFrom<&WireReport> for CongruenceReport {
    type Error = CliError;

    fn try_from(w: &WireReport) -> Result<Self, CliError> {
        let theorem: TheoremId = w.theorem.parse()?;
        let params = Params {
            n: parse_field("n", &w.params.n)?,
            p: parse_field("p", &w.params.p)?,
            e: parse_field("e", &w.params.e)?,
            c: parse_field("c", &w.params.c)?,
            m: parse_field("m", &w.params.m)?,
            i: parse_field("i", &w.params.i)?,
            variant: parse_field::<Variant>("variant", &w.params.variant)?,
        };
        let modulus: u64 = w
            .modulus
            .parse()
            .map_err(|_| CliError::Parse(format!("bad modulus: {}", w.modulus)))?;
        let lhs = parse_value(&w.lhs, modulus, &params)?;
        let rhs = parse_value(&w.rhs, modulus, &params)?;
        let mut report = CongruenceReport::new(theorem, w.sequence.clone(), params, lhs, rhs);
        report.pass = w.pass;
        Ok(report)
    }
}

/// Reads back the array written by [`emit_report`] in JSON form.
pub fn parse_json(text: &str) -> Result<Vec<CongruenceReport>, CliError> {
    let wire: Vec<WireReport> =
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    wire.iter().map(CongruenceReport::try_from).collect()
}

const COLUMNS: [&str; 13] = [
    "theorem", "sequence", "n", "p", "e", "c", "m", "i", "variant", "lhs", "rhs", "modulus", "pass",
];

fn flatten(w: &WireReport) -> [String; 13] {
    let o = |v: &Option<String>| v.clone().unwrap_or_default();
    [
        w.theorem.clone(),
        w.sequence.clone(),
        o(&w.params.n),
        o(&w.params.p),
        o(&w.params.e),
        o(&w.params.c),
        o(&w.params.m),
        o(&w.params.i),
        o(&w.params.variant),
        w.lhs.clone(),
        w.rhs.clone(),
        w.modulus.clone(),
        w.pass.to_string(),
    ]
}

pub fn emit_report(reports: &[CongruenceReport], format: Format) -> Vec<u8> {
    let wire: Vec<WireReport> = reports.iter().map(WireReport::from).collect();
    match format {
        Format::Json => {
            let mut out = if wire.is_empty() {
                "[]".to_string()
            } else {
                serde_json::to_string_pretty(&wire).expect("plain strings serialize")
            };
            out.push('\n');
            out.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for r in &wire {
                w.write_record(flatten(r)).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
        Format::Text => text_table(&wire).into_bytes(),
    }
}

fn text_table(wire: &[WireReport]) -> String {
    let rows: Vec<[String; 13]> = wire
        .iter()
        .map(|w| {
            let mut row = flatten(w);
            for cell in row.iter_mut() {
                if cell.is_empty() {
                    *cell = "-".to_string();
                }
            }
            row[12] = if w.pass { "ok" } else { "FAIL" }.to_string();
            row
        })
        .collect();
    let mut widths = COLUMNS.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&COLUMNS);
    for row in &rows {
        line(&row.each_ref().map(String::as_str));
    }
    out
}

/// Totals printed after a sweep: a footer for text, a trailing object for JSON.
pub fn emit_summary(
    reports: &[CongruenceReport],
    skipped: &BTreeMap<String, usize>,
    format: Format,
) -> Vec<u8> {
    let passed = reports.iter().filter(|r| r.pass).count();
    let failed = reports.len() - passed;
    match format {
        Format::Json => {
            let skipped: BTreeMap<&str, String> =
                skipped.iter().map(|(k, v)| (k.as_str(), v.to_string())).collect();
            let meta = serde_json::json!({
                "summary": {
                    "reports": reports.len().to_string(),
                    "passed": passed.to_string(),
                    "failed": failed.to_string(),
                    "skipped": skipped,
                }
            });
            format!("{meta}\n").into_bytes()
        }
        Format::Csv | Format::Text => {
            let mut out = format!("{} reports, {passed} passed, {failed} failed", reports.len());
            let total: usize = skipped.values().sum();
            if total > 0 {
                let parts: Vec<String> = skipped.iter().map(|(k, v)| format!("{k} {v}")).collect();
                let _ = write!(out, "; skipped {total} ({})", parts.join(", "));
            }
            out.push('\n');
            out.into_bytes()
        }
    }
}
