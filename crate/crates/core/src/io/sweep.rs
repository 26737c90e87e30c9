//! Objective sensitivity over a grid of procurement weights `w1` and
//! supplier delay factors γ.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::model::ProcurementInstance;
use crate::pso::{run, LowerSolver, SwarmConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub w1: f64,
    pub gamma: f64,
    /// `w1·procurement + (1 − w1)·shortage`.
    pub objective: f64,
    /// Unweighted `Σ (p·q + a)`.
    pub procurement: f64,
    /// Unweighted buyer shortage cost.
    pub shortage: f64,
}

/// Parses `start:end:step` into the inclusive grid
/// `start, start + step, …, end`. Values are rounded to nine decimals so
/// the grid carries no accumulated floating-point drift.
pub fn parse_grid(axis: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = axis.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(format!("expected start:end:step, got `{axis}`"));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("`{s}` in `{axis}`: {e}"))
    };
    let (start, end, step) = (num(start)?, num(end)?, num(step)?);
    if !(start.is_finite() && end.is_finite() && step.is_finite()) || step <= 0.0 || end < start {
        return Err(format!("`{axis}` needs finite start <= end and a positive step"));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(format!("`{axis}` has {count} points"));
    }
    Ok((0..count)
        .map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

/// Runs the swarm at every `(w1, γ)` pair, `w1` outermost. Every point uses
/// the same swarm seed.
pub fn sweep(
    inst: &ProcurementInstance,
    w1s: &[f64],
    gammas: &[f64],
    cfg: &SwarmConfig,
    solver: LowerSolver,
) -> Result<Vec<SweepPoint>, SolveError> {
    if let Some(bad) = w1s.iter().find(|w| !(0.0..=1.0).contains(*w)) {
        return Err(SolveError::Rejected(format!("weight {bad} is outside [0, 1]")));
    }
    if let Some(bad) = gammas.iter().find(|g| !(**g >= 0.0)) {
        return Err(SolveError::Rejected(format!("delay factor {bad} is negative")));
    }
    let mut out = Vec::with_capacity(w1s.len() * gammas.len());
    for &w1 in w1s {
        for &gamma in gammas {
            let variant = inst
                .with_procurement_weight(w1)
                .with_supplier_delay_factor(gamma);
            let report = run(&variant, cfg, solver)?;
            out.push(SweepPoint {
                w1,
                gamma,
                objective: report.objective.total,
                procurement: report.objective.procurement,
                shortage: report.objective.shortage,
            });
        }
    }
    Ok(out)
}
