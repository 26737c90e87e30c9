//! Reference planners for the supplier subproblem: a greedy descent and a
//! simulated annealing over production schedules, and the harness that
//! compares them inside the swarm.

mod annealing;
mod compare;
mod greedy;

pub use annealing::{anneal_subproblem, AnnealingConfig, AnnealingSolution, AnnealingStats};
pub use compare::{compare_suite, suite_means, AlgorithmSummary, ComparisonRow};
pub use greedy::greedy_solve_subproblem;

use crate::model::ItemPlan;

/// A subproblem plan with the cost its planner accumulated.
#[derive(Debug, Clone)]
pub struct LowerSolution {
    pub plan: ItemPlan,
    pub cost: f64,
}

/// Relative gap `(value − best) / best` to the best value found. `None`
/// when `best` is not a positive finite number.
pub fn deviation(value: f64, best: f64) -> Option<f64> {
    (best > 0.0 && best.is_finite()).then(|| (value - best) / best)
}

#[cfg(test)]
mod tests;
