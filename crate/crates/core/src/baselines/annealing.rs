use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::planner::{reconstruct_plan, PeriodAction, PlannerState, Subproblem};
use crate::rng::substream;

use super::greedy::greedy_solve_subproblem;
use super::LowerSolution;

/// Simulated-annealing settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealingConfig {
    pub moves: u32,
    /// Proposals sampled around the start to calibrate the temperature.
    pub warmup: u32,
    /// Target acceptance rate of uphill moves at the start temperature.
    pub initial_acceptance: f64,
    /// Skips calibration when set. Zero turns the search into descent.
    pub initial_temperature: Option<f64>,
    pub cooling: f64,
    pub moves_per_temperature: u32,
}

impl Default for AnnealingConfig {
    fn default() -> Self {
        Self {
            moves: 500,
            warmup: 50,
            initial_acceptance: 0.9,
            initial_temperature: None,
            cooling: 0.95,
            moves_per_temperature: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AnnealingStats {
    pub proposed: u32,
    /// Proposals whose schedule could not ship the order.
    pub rejected_infeasible: u32,
    pub accepted: u32,
    pub accepted_worse: u32,
    pub initial_temperature: f64,
    pub final_temperature: f64,
    pub start_cost: f64,
}

#[derive(Debug, Clone)]
pub struct AnnealingSolution {
    pub solution: LowerSolution,
    pub stats: AnnealingStats,
}

/// Production volumes per period; shipments follow from the delivery rule.
#[derive(Debug, Clone, PartialEq)]
struct Schedule {
    ordinary: Vec<u32>,
    overtime: Vec<u32>,
}

impl Schedule {
    fn slot(&mut self, slot: usize) -> &mut u32 {
        let t = slot / 2;
        if slot % 2 == 0 {
            &mut self.ordinary[t]
        } else {
            &mut self.overtime[t]
        }
    }
}

/// Runs the schedule through the delivery rule. `None` when a period cannot
/// ship, units are produced after the order is complete, or the horizon ends
/// with units undelivered.
fn simulate(sub: &Subproblem<'_>, sched: &Schedule) -> Option<(f64, Vec<PeriodAction>)> {
    let mut state: PlannerState = sub.start();
    let mut cost = 0.0;
    let mut actions = Vec::new();
    for t in 0..sub.horizon as usize {
        let (yr, yn) = (sched.ordinary[t], sched.overtime[t]);
        if state.remaining == 0 {
            if yr + yn > 0 {
                return None;
            }
            continue;
        }
        if yr + yn > sub.production_need(&state) {
            return None;
        }
        let (next, shipment, step) = sub.step(&state, yr, yn)?;
        cost += step;
        actions.push(PeriodAction {
            ordinary: yr,
            overtime: yn,
            shipment,
        });
        state = next;
    }
    (state.remaining == 0).then_some((cost, actions))
}

/// Moves one unit of production between two (period, mode) slots with room.
fn propose(sub: &Subproblem<'_>, sched: &Schedule, rng: &mut impl Rng) -> Option<Schedule> {
    let p = sub.params;
    let j = sub.item;
    let slots = 2 * sub.horizon as usize;
    let capacity = |slot: usize| {
        let t = (slot / 2) as u32 + 1;
        if slot % 2 == 0 {
            p.ordinary_units(j, t)
        } else {
            p.overtime_units(j, t)
        }
    };
    let mut next = sched.clone();
    let sources: Vec<usize> = (0..slots).filter(|&s| *next.slot(s) > 0).collect();
    let targets: Vec<usize> = (0..slots).filter(|&s| *next.slot(s) < capacity(s)).collect();
    if sources.is_empty() || targets.is_empty() {
        return None;
    }
    let from = sources[rng.gen_range(0..sources.len())];
    let to = targets[rng.gen_range(0..targets.len())];
    if from == to {
        return None;
    }
    *next.slot(from) -= 1;
    *next.slot(to) += 1;
    Some(next)
}

/// Anneals the production schedule, starting from the greedy plan. The RNG
/// stream is derived from `seed`, the supplier, the item and the quantity,
/// so the same request always gets the same answer.
pub fn anneal_subproblem(
    sub: &Subproblem<'_>,
    supplier: usize,
    stride: u32,
    cfg: &AnnealingConfig,
    seed: u64,
) -> Result<AnnealingSolution, SolveError> {
    let start = greedy_solve_subproblem(sub, stride)?;
    let mut stats = AnnealingStats {
        start_cost: start.cost,
        ..AnnealingStats::default()
    };
    if sub.production_need(&sub.start()) == 0 {
        return Ok(AnnealingSolution {
            solution: start,
            stats,
        });
    }
    let mut rng = substream(
        seed,
        &[0x5a, supplier as u64, sub.item as u64, u64::from(sub.quantity)],
    );
    let mut current = Schedule {
        ordinary: start.plan.prod_ord.clone(),
        overtime: start.plan.prod_ot.clone(),
    };
    let Some((mut current_cost, _)) = simulate(sub, &current) else {
        return Err(SolveError::Internal(
            "greedy schedule does not replay under the delivery rule".into(),
        ));
    };

    let mut temperature = match cfg.initial_temperature {
        Some(t) => t.max(0.0),
        None => {
            let mut uphill = Vec::new();
            for _ in 0..cfg.warmup {
                if let Some(cand) = propose(sub, &current, &mut rng) {
                    if let Some((c, _)) = simulate(sub, &cand) {
                        if c > current_cost {
                            uphill.push(c - current_cost);
                        }
                    }
                }
            }
            if uphill.is_empty() {
                1.0
            } else {
                let mean = uphill.iter().sum::<f64>() / uphill.len() as f64;
                mean / (1.0 / cfg.initial_acceptance.clamp(1e-9, 1.0 - 1e-9)).ln()
            }
        }
    };
    stats.initial_temperature = temperature;

    let mut best = current.clone();
    let mut best_cost = current_cost;
    for k in 0..cfg.moves {
        if k > 0 && cfg.moves_per_temperature > 0 && k % cfg.moves_per_temperature == 0 {
            temperature *= cfg.cooling;
        }
        stats.proposed += 1;
        let Some(cand) = propose(sub, &current, &mut rng) else {
            continue;
        };
        let Some((cost, _)) = simulate(sub, &cand) else {
            stats.rejected_infeasible += 1;
            continue;
        };
        let delta = cost - current_cost;
        let accept = delta <= 0.0
            || (temperature > 0.0 && rng.gen::<f64>() < (-delta / temperature).exp());
        if accept {
            stats.accepted += 1;
            if delta > 0.0 {
                stats.accepted_worse += 1;
            }
            current = cand;
            current_cost = cost;
            if current_cost < best_cost {
                best_cost = current_cost;
                best = current.clone();
            }
        }
    }
    stats.final_temperature = temperature;

    let (cost, actions) = simulate(sub, &best)
        .ok_or_else(|| SolveError::Internal("best schedule no longer replays".into()))?;
    let plan = reconstruct_plan(sub, &actions)?;
    Ok(AnnealingSolution {
        solution: LowerSolution { plan, cost },
        stats,
    })
}
