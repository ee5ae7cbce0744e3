//! Output encodings shared by the command-line front end and the tests.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::density::Functional;
use crate::error::{validation, Error, Result};
use crate::productset::GapReport;

/// `v` rounded to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(num) = n.as_f64().and_then(|f| serde_json::Number::from_f64(round12(f))) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serializes `value` with floats rounded, pretty-printed.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| validation(e.to_string()))?;
    round_json(&mut v);
    serde_json::to_string_pretty(&v).map_err(|e| validation(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityRow {
    pub functional: Functional,
    pub m: Option<u32>,
    pub n: u64,
    pub k_star: Option<u64>,
    pub value: f64,
}

/// Sorts rows by `(functional, n)` and writes them as CSV with `#` header
/// comment lines.
pub fn write_density_csv(out: &mut impl Write, params: &[(&str, String)], rows: &mut [DensityRow]) -> Result<()> {
    rows.sort_by_key(|a| (a.functional, a.n, a.m));
    write_comments(out, params)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["functional", "m", "n", "k_star", "value"]).map_err(csv_err)?;
    for r in rows.iter() {
        w.write_record([
            r.functional.name().to_string(),
            r.m.map(|m| m.to_string()).unwrap_or_default(),
            r.n.to_string(),
            r.k_star.map(|k| k.to_string()).unwrap_or_default(),
            round12(r.value).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(Error::from_io)
}

pub fn write_gap_csv(out: &mut impl Write, params: &[(&str, String)], reports: &[GapReport]) -> Result<()> {
    write_comments(out, params)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "x", "m", "products", "lo", "hi"]).map_err(csv_err)?;
    for r in reports {
        w.write_record([r.n, r.x, r.m, r.products_examined, r.window.0, r.window.1].map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    w.flush().map_err(Error::from_io)
}

fn write_comments(out: &mut impl Write, params: &[(&str, String)]) -> Result<()> {
    for (k, v) in params {
        writeln!(out, "# {k}={v}").map_err(Error::from_io)?;
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    validation(format!("csv output failed: {e}"))
}
