//! Certifies the planner on random micro cases against the brute-force
//! oracle: exact costs with an unbounded beam, and a heuristic that never
//! exceeds the true cost-to-go.

use serde::Serialize;

use crate::error::SolveError;
use crate::io::micro_case;
use crate::oracle::{brute_force, completion_cost_table, EnumerationBudget, OracleProblem};
use crate::planner::{heuristic_cost, solve_subproblem, PlannerState, SearchConfig, Subproblem};

/// Relative tolerance of cost comparisons.
pub const COST_TOLERANCE: f64 = 1e-9;

pub fn costs_agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= COST_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AuditReport {
    pub cases: usize,
    /// Cases where search and enumeration found the same cost.
    pub exact: usize,
    /// Cases both declared infeasible.
    pub infeasible: usize,
    /// Seeds where the two disagree.
    pub mismatches: Vec<u64>,
    pub states_checked: u64,
    /// `(seed, period, inventory, remaining, h, cost-to-go)` of every state
    /// whose heuristic overestimates.
    pub overestimates: Vec<(u64, u32, u32, u32, f64, f64)>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.overestimates.is_empty()
    }
}

/// Audits the micro cases of `seeds`. Budget overruns of the oracle are
/// returned as errors rather than counted.
pub fn micro_audit(seeds: impl IntoIterator<Item = u64>) -> Result<AuditReport, SolveError> {
    let mut report = AuditReport::default();
    for seed in seeds {
        let c = micro_case(seed);
        report.cases += 1;
        let problem = OracleProblem::new(&c.params, 0, c.quantity, c.horizon, c.lt_lower);
        let sub = Subproblem::new(&c.params, 0, c.quantity, c.horizon, c.lt_lower);

        let oracle = brute_force(&problem, &mut EnumerationBudget::default());
        let search = solve_subproblem(&sub, &SearchConfig::exact());
        match (oracle, search) {
            (Ok(o), Ok(s)) if costs_agree(o.cost, s.cost) => report.exact += 1,
            (Err(SolveError::Infeasible(_)), Err(SolveError::Infeasible(_))) => report.infeasible += 1,
            (Err(e @ SolveError::BudgetExceeded { .. }), _) => return Err(e),
            _ => report.mismatches.push(seed),
        }

        let table = completion_cost_table(&problem, &mut EnumerationBudget::default())?;
        for ((period, inventory, remaining), value) in table.entries() {
            report.states_checked += 1;
            let state = PlannerState {
                period,
                inventory,
                remaining,
            };
            let h = heuristic_cost(&sub, &state);
            let over = if value.is_finite() {
                h > value + COST_TOLERANCE * value.abs().max(1.0)
            } else {
                false
            };
            if over {
                report
                    .overestimates
                    .push((seed, period, inventory, remaining, h, value));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_micro_seeds_pass() {
        let r = micro_audit(0..25).unwrap();
        assert_eq!(r.cases, 25);
        assert_eq!(r.exact + r.infeasible, 25);
        assert!(r.states_checked > 25);
        assert!(r.passed());
    }

    #[test]
    fn tolerance_is_relative() {
        assert!(costs_agree(1e12, 1e12 + 1.0));
        assert!(!costs_agree(1.0, 1.0 + 1e-6));
    }
}
