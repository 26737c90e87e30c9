use serde::{Deserialize, Serialize};

use super::deviation;
use crate::error::SolveError;
use crate::model::ProcurementInstance;
use crate::pso::{run, LowerSolver, SwarmConfig};
use crate::rng::derive_seed;

/// One algorithm's results on one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    /// Mean of `(objective − best_found) / best_found`; `None` when no run
    /// of any algorithm found a feasible allocation.
    pub mean_deviation: Option<f64>,
    pub mean_objective: f64,
    pub best_objective: f64,
    pub mean_seconds: f64,
}

/// One problem of a comparison suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub problem: String,
    pub supplier_count: usize,
    pub item_count: usize,
    pub repetitions: usize,
    pub best_found: f64,
    pub algorithms: Vec<AlgorithmSummary>,
}

impl ComparisonRow {
    pub fn summary(&self, algorithm: &str) -> Option<&AlgorithmSummary> {
        self.algorithms.iter().find(|a| a.algorithm == algorithm)
    }
}

/// Runs every algorithm `repetitions` times on every problem. Repetition `r`
/// of problem `k` uses the same swarm seed for every algorithm, so the
/// algorithms differ only in their lower-level planner. The best-found value
/// of a problem is the minimum over all of its runs.
pub fn compare_suite(
    problems: &[ProcurementInstance],
    algorithms: &[LowerSolver],
    repetitions: usize,
    swarm: &SwarmConfig,
    seed: u64,
) -> Result<Vec<ComparisonRow>, SolveError> {
    if repetitions == 0 {
        return Err(SolveError::Rejected("at least one repetition is needed".into()));
    }
    let mut rows = Vec::with_capacity(problems.len());
    for (k, inst) in problems.iter().enumerate() {
        let mut results: Vec<Vec<(f64, f64)>> = vec![Vec::with_capacity(repetitions); algorithms.len()];
        for r in 0..repetitions {
            let cfg = SwarmConfig {
                seed: derive_seed(seed, &[k as u64, r as u64]),
                ..*swarm
            };
            for (a, solver) in algorithms.iter().enumerate() {
                let report = run(inst, &cfg, *solver)?;
                results[a].push((report.objective.total, report.wall_seconds));
            }
        }
        let best_found = results
            .iter()
            .flatten()
            .map(|&(v, _)| v)
            .fold(f64::INFINITY, f64::min);
        let n = repetitions as f64;
        let algorithms = algorithms
            .iter()
            .zip(&results)
            .map(|(solver, runs)| {
                let mean_deviation = runs
                    .iter()
                    .map(|&(v, _)| deviation(v, best_found))
                    .sum::<Option<f64>>()
                    .map(|s| s / n);
                AlgorithmSummary {
                    algorithm: solver.name().to_string(),
                    mean_deviation,
                    mean_objective: runs.iter().map(|&(v, _)| v).sum::<f64>() / n,
                    best_objective: runs.iter().map(|&(v, _)| v).fold(f64::INFINITY, f64::min),
                    mean_seconds: runs.iter().map(|&(_, s)| s).sum::<f64>() / n,
                }
            })
            .collect();
        rows.push(ComparisonRow {
            problem: inst.name.clone(),
            supplier_count: inst.supplier_count(),
            item_count: inst.item_count(),
            repetitions,
            best_found,
            algorithms,
        });
    }
    Ok(rows)
}

/// Mean of each algorithm's per-problem mean deviation, in `algorithms`
/// order. `None` for an algorithm when some problem has no defined deviation.
pub fn suite_means(rows: &[ComparisonRow], algorithms: &[&str]) -> Vec<Option<f64>> {
    algorithms
        .iter()
        .map(|name| {
            let total: Option<f64> = rows
                .iter()
                .map(|row| row.summary(name).and_then(|s| s.mean_deviation))
                .sum();
            total.map(|t| t / rows.len().max(1) as f64)
        })
        .collect()
}
