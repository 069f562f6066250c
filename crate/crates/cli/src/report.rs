use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Rounds to 12 significant digits; negative zero becomes zero.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn num(x: f64) -> Value {
    serde_json::json!(sig12(x))
}

pub fn complex(z: Complex64) -> Value {
    serde_json::json!([sig12(z.re), sig12(z.im)])
}

/// 12-significant-digit text for CSV cells.
pub fn cell(x: f64) -> String {
    let r = sig12(x);
    let a = r.abs();
    if a != 0.0 && !(1e-6..1e12).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub seed: u64,
    pub results: Value,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    /// CSV rendering of the main table.
    #[serde(skip)]
    pub csv: String,
    /// Number of failed checks that should turn into a non-zero exit.
    #[serde(skip)]
    pub violations: usize,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            seed,
            results: Value::Null,
            tolerances: BTreeMap::new(),
            wall_time_s: None,
            csv: String::new(),
            violations: 0,
        }
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Writes the report to `out` or stdout.
pub fn emit(report: &RunReport, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.csv.clone(),
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}
