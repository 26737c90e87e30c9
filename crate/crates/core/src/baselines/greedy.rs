use crate::error::SolveError;
use crate::planner::{heuristic_cost, idle_tail_cost, reconstruct_plan, PeriodAction, Subproblem};

use super::LowerSolution;

/// Follows the child with the lowest heuristic value from the start state,
/// never backtracking. Ties go to the lower `g + h`, then to enumeration
/// order.
pub fn greedy_solve_subproblem(sub: &Subproblem<'_>, stride: u32) -> Result<LowerSolution, SolveError> {
    let mut state = sub.start();
    let mut actions: Vec<PeriodAction> = Vec::new();
    let mut cost = 0.0;
    while state.remaining > 0 {
        let mut best: Option<(f64, f64, PeriodAction, crate::planner::PlannerState, f64)> = None;
        for (action, next, step) in sub.successors(&state, stride) {
            let h = heuristic_cost(sub, &next);
            if !h.is_finite() {
                continue;
            }
            let f = cost + step + h;
            let better = match &best {
                None => true,
                Some((bh, bf, ..)) => h < *bh || (h == *bh && f < *bf),
            };
            if better {
                best = Some((h, f, action, next, step));
            }
        }
        let Some((_, _, action, next, step)) = best else {
            return Err(SolveError::Infeasible(format!(
                "greedy descent stuck in period {} with {} units undelivered",
                state.period + 1,
                state.remaining
            )));
        };
        actions.push(action);
        cost += step;
        state = next;
    }
    if actions.is_empty() {
        cost += idle_tail_cost(sub.params, sub.item, sub.opening_stock, sub.horizon);
    }
    let plan = reconstruct_plan(sub, &actions)?;
    Ok(LowerSolution { plan, cost })
}
