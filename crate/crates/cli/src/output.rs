//! Artifact writing: a CSV of estimates and a JSON summary, all numbers with
//! 17 significant digits.

use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};

use crate::error::CliError;

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub key: String,
    pub estimate: f64,
    pub se: f64,
    pub replicas: u64,
}

impl Row {
    pub fn new(key: impl Into<String>, estimate: f64, se: f64, replicas: u64) -> Self {
        Self {
            key: key.into(),
            estimate,
            se,
            replicas,
        }
    }

    /// Exact value: zero standard error.
    pub fn exact(key: impl Into<String>, value: f64) -> Self {
        Self::new(key, value, 0.0, 0)
    }
}

/// Everything an experiment produces.
#[derive(Debug, Clone, Default)]
pub struct Artifacts {
    pub rows: Vec<Row>,
    pub metrics: Map<String, Value>,
    /// Pass/fail verdicts of built-in checks; any `false` is reported.
    pub checks: Map<String, Value>,
    pub summary: String,
    /// Extra files (name, contents) written next to the main artifacts.
    pub extra: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn metric(&mut self, key: &str, v: f64) {
        self.metrics.insert(key.to_string(), number(v));
    }

    pub fn metric_value(&mut self, key: &str, v: Value) {
        self.metrics.insert(key.to_string(), v);
    }

    pub fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.to_string(), Value::Bool(ok));
    }

    pub fn failed_checks(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|(_, v)| **v == Value::Bool(false))
            .map(|(k, _)| k.clone())
            .collect()
    }
}

/// `{:.16e}`: 17 significant digits, parseable back to the same `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON number with 17 significant digits; non-finite values become null.
pub fn number(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let n: Number = format_f64(v).parse().expect("formatted float is a JSON number");
    Value::Number(n)
}

pub fn numbers(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|&v| number(v)).collect())
}

pub fn csv_bytes(rows: &[Row]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(["key", "estimate", "se", "replicas"]).map_err(io)?;
    for r in rows {
        w.write_record([r.key.clone(), format_f64(r.estimate), format_f64(r.se), r.replicas.to_string()])
            .map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

pub fn summary_json(experiment: &str, digest: &str, master_seed: u64, replicas: u64, artifacts: &Artifacts) -> Result<Vec<u8>, CliError> {
    let mut root = Map::new();
    root.insert("experiment".into(), Value::String(experiment.into()));
    root.insert("config_digest".into(), Value::String(digest.into()));
    root.insert("master_seed".into(), Value::Number(master_seed.into()));
    root.insert("replicas".into(), Value::Number(replicas.into()));
    root.insert("metrics".into(), Value::Object(artifacts.metrics.clone()));
    root.insert("checks".into(), Value::Object(artifacts.checks.clone()));
    root.insert("summary".into(), Value::String(artifacts.summary.clone()));
    let mut bytes = serde_json::to_vec_pretty(&Value::Object(root)).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `<experiment>.csv`, `<experiment>.json` and any extra files into
/// `dir`; returns the written paths.
pub fn write_artifacts(dir: &Path, experiment: &str, digest: &str, master_seed: u64, replicas: u64, artifacts: &Artifacts) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv_path = dir.join(format!("{experiment}.csv"));
    std::fs::write(&csv_path, csv_bytes(&artifacts.rows)?)?;
    written.push(csv_path);
    let json_path = dir.join(format!("{experiment}.json"));
    std::fs::write(&json_path, summary_json(experiment, digest, master_seed, replicas, artifacts)?)?;
    written.push(json_path);
    for (name, bytes) in &artifacts.extra {
        let p = dir.join(name);
        std::fs::write(&p, bytes)?;
        written.push(p);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_exactly() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, f64::MIN_POSITIVE] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            assert_eq!(number(v).to_string().parse::<f64>().unwrap(), v);
        }
        assert_eq!(number(f64::NAN), Value::Null);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let text = String::from_utf8(csv_bytes(&[Row::new("t=1", 0.5, 0.01, 10)]).unwrap()).unwrap();
        assert_eq!(text, "key,estimate,se,replicas\nt=1,5.0000000000000000e-1,1.0000000000000000e-2,10\n");
    }
}
