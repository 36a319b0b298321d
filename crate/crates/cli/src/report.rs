//! Report output: 12 significant digits, config echo, JSON or CSV.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Echo of the invocation, embedded in every report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub deterministic: bool,
    /// Remaining subcommand-specific flags.
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub extra: Map<String, Value>,
}

impl RunConfig {
    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        round_value(&mut v);
        v
    }
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal text of `sig12(x)`.
pub fn fmt12(x: f64) -> String {
    let r = sig12(x);
    if r == 0.0 {
        "0".into()
    } else if (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Rounds every float in `v` in place; integers are left alone.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(sig12(x))) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Assembles `{"config", "seed", ["timestamp"], ...body}` with rounded numbers.
pub fn wrap(config: &RunConfig, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("config".into(), config.to_value());
    out.insert("seed".into(), config.seed.map_or(Value::Null, Value::from));
    if !config.deterministic {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        out.insert("timestamp".into(), Value::from(secs));
    }
    if let Value::Object(b) = body {
        out.extend(b);
    }
    let mut v = Value::Object(out);
    round_value(&mut v);
    v
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// CSV text with a `# config: …` comment line ahead of the header.
pub fn csv_text(config: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Usage(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?).expect("utf8 csv");
    let echo = wrap(config, Value::Object(Map::new()));
    Ok(format!("# config: {}\n{body}", serde_json::to_string(&echo).expect("config serializes")))
}

/// Bare numeric matrix, one row per line.
pub fn matrix_csv(rows: &[Vec<f64>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r.iter().map(|&x| fmt12(x))).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?).expect("utf8 csv"))
}
