//! CSV and JSON rendering. Floats in CSV use 17 significant digits; JSON uses
//! the shortest representation that parses back to the same `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// A JSON report: configuration echo, tolerances in force, results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<C, T> {
    pub command: String,
    pub config: C,
    pub tolerances: BTreeMap<String, f64>,
    pub results: T,
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Header plus rows, comma separated.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
