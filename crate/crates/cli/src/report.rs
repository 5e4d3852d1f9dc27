//! JSON report assembly. Reports are built as `serde_json::Value` trees, whose
//! maps keep keys sorted, so parsing a report and printing it again yields the
//! same bytes.

use std::io::Write;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use hhl_poisson::{PoissonProblem, SpectralData};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Default)]
pub struct Report {
    pub problem: Value,
    pub layout: Value,
    pub result: Value,
    pub errors: Value,
    pub cost: Value,
    pub timing: Option<Duration>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "problem": self.problem,
            "layout": self.layout,
            "result": self.result,
            "errors": self.errors,
            "cost": self.cost,
            "timing": self.timing.map(|t| json!({ "seconds": t.as_secs_f64() })),
        })
    }
}

pub fn value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).context("serializing report")
}

pub fn problem_value(problem: &PoissonProblem, spectral: &SpectralData) -> Value {
    json!({
        "n_grid": problem.n_grid(),
        "n_qubits": problem.n_qubits(),
        "mesh_width": problem.mesh_width(),
        "rhs": problem.rhs(),
        "scale": problem.scale(),
        "eigenvalues": spectral.lambdas,
        "kappa": spectral.kappa,
    })
}

pub fn to_json_string(value: &Value) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).context("formatting report")?;
    text.push('\n');
    Ok(text)
}

/// Writes to `out`, or stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
