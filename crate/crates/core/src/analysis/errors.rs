use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poisson::normalized;

/// Reference entries at or below this magnitude carry no relative error.
const ZERO_REFERENCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// `|q_i - a_i| / |a_i|` per interior basis state; `None` where the
    /// reference amplitude is zero.
    pub per_state_relative_error: Vec<Option<f64>>,
    pub max_relative_error: f64,
    pub mean_relative_error: f64,
    /// `|<a|q>|` of the normalized vectors.
    pub state_fidelity: f64,
}

impl ErrorReport {
    /// Positions excluded because the reference vanishes there.
    pub fn excluded(&self) -> Vec<usize> {
        self.per_state_relative_error
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Componentwise relative error after normalizing both vectors and aligning
/// the global sign of `quantum` to `classical`.
pub fn relative_errors(quantum: &[f64], classical: &[f64]) -> Result<ErrorReport> {
    if quantum.len() != classical.len() {
        return Err(Error::LengthMismatch {
            expected: classical.len(),
            found: quantum.len(),
        });
    }
    let a = normalized(classical);
    let mut q = normalized(quantum);
    let dot: f64 = a.iter().zip(&q).map(|(x, y)| x * y).sum();
    if dot < 0.0 {
        q.iter_mut().for_each(|x| *x = -*x);
    }
    let per_state: Vec<Option<f64>> = a
        .iter()
        .zip(&q)
        .map(|(ai, qi)| (ai.abs() > ZERO_REFERENCE).then(|| (qi - ai).abs() / ai.abs()))
        .collect();
    let defined: Vec<f64> = per_state.iter().flatten().copied().collect();
    let max = defined.iter().copied().fold(0.0, f64::max);
    let mean = if defined.is_empty() {
        0.0
    } else {
        defined.iter().sum::<f64>() / defined.len() as f64
    };
    Ok(ErrorReport {
        per_state_relative_error: per_state,
        max_relative_error: max,
        mean_relative_error: mean,
        state_fidelity: dot.abs().min(1.0),
    })
}

/// `0.5 * sum |p_i - q_i|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
