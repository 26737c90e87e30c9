//! Brute-force reference solvers for small instances.
//!
//! These enumerate every production sequence inside the capacities, let the
//! delivery rule fix each period's shipment, and score complete plans with
//! the model's cost functions. They share no code with the planner and exist
//! to certify it: exact costs, cost-to-go tables for heuristic audits, and the
//! optimal allocation of tiny bi-level instances.

use std::collections::HashMap;

use crate::delivery::{deliver, PeriodContext};
use crate::error::SolveError;
use crate::model::{
    bid_price, buyer_objective, period_cost, supplier_delay_penalty, AllocationMatrix, ItemPlan,
    ObjectiveValue, PeriodActivity, PeriodTerms, ProcurementInstance, SupplierParams,
    SupplierPlan,
};

/// Cap on enumerated states; running past it fails loudly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_states: u64,
    pub visited: u64,
    pub pruned: u64,
}

impl EnumerationBudget {
    pub const DEFAULT_MAX: u64 = 1_000_000;

    pub fn new(max_states: u64) -> Self {
        Self {
            max_states,
            visited: 0,
            pruned: 0,
        }
    }

    fn visit(&mut self) -> Result<(), SolveError> {
        self.visited += 1;
        if self.visited > self.max_states {
            return Err(SolveError::BudgetExceeded {
                visited: self.visited,
                limit: self.max_states,
            });
        }
        Ok(())
    }
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_MAX)
    }
}

/// One supplier-item problem as the oracle sees it.
#[derive(Debug, Clone, Copy)]
pub struct OracleProblem<'a> {
    pub params: &'a SupplierParams,
    pub item: usize,
    pub quantity: u32,
    pub horizon: u32,
    pub lt_lower: u32,
    pub opening_stock: u32,
}

impl<'a> OracleProblem<'a> {
    pub fn new(params: &'a SupplierParams, item: usize, quantity: u32, horizon: u32, lt_lower: u32) -> Self {
        Self {
            params,
            item,
            quantity,
            horizon,
            lt_lower,
            opening_stock: params.safety_stock[item],
        }
    }

    fn ss(&self) -> u32 {
        self.params.safety_stock[self.item]
    }

    fn context(&self, t: u32, stock: u32, remaining: u32, production: u32) -> PeriodContext {
        PeriodContext {
            period: t,
            horizon: self.horizon,
            stock_before: stock,
            remaining,
            production,
        }
    }

    /// Every `(ordinary, overtime)` pair allowed in period `t` that does not
    /// produce past what the order still needs.
    fn productions(&self, t: u32, stock: u32, remaining: u32) -> Vec<(u32, u32)> {
        let usable = stock.saturating_sub(self.ss());
        let need = remaining.saturating_sub(usable);
        let ord = self.params.ordinary_units(self.item, t).min(need);
        let ot = self.params.overtime_units(self.item, t).min(need);
        let mut out = Vec::new();
        for yr in 0..=ord {
            for yn in 0..=ot {
                if yr + yn <= need {
                    out.push((yr, yn));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub cost: f64,
    pub plan: ItemPlan,
}

/// Cheapest plan over every production sequence, by depth-first enumeration.
pub fn brute_force_subproblem(
    params: &SupplierParams,
    item: usize,
    quantity: u32,
    horizon: u32,
    lt_lower: u32,
    budget: &mut EnumerationBudget,
) -> Result<OracleSolution, SolveError> {
    brute_force(&OracleProblem::new(params, item, quantity, horizon, lt_lower), budget)
}

pub fn brute_force(problem: &OracleProblem<'_>, budget: &mut EnumerationBudget) -> Result<OracleSolution, SolveError> {
    let mut best: Option<OracleSolution> = None;
    let mut acts = Vec::with_capacity(problem.horizon as usize);
    enumerate(
        problem,
        1,
        problem.opening_stock,
        problem.quantity,
        &mut acts,
        &mut best,
        budget,
    )?;
    best.ok_or_else(|| {
        SolveError::Infeasible(format!(
            "no sequence ships {} units within {} periods",
            problem.quantity, problem.horizon
        ))
    })
}

fn enumerate(
    problem: &OracleProblem<'_>,
    t: u32,
    stock: u32,
    remaining: u32,
    acts: &mut Vec<PeriodActivity>,
    best: &mut Option<OracleSolution>,
    budget: &mut EnumerationBudget,
) -> Result<(), SolveError> {
    if t > problem.horizon {
        if remaining > 0 {
            budget.pruned += 1;
            return Ok(());
        }
        let plan = ItemPlan::assemble(
            problem.params,
            problem.item,
            problem.quantity,
            problem.opening_stock,
            problem.lt_lower,
            acts,
        )?;
        if best.as_ref().is_none_or(|b| plan.total_cost < b.cost) {
            *best = Some(OracleSolution {
                cost: plan.total_cost,
                plan,
            });
        }
        return Ok(());
    }
    let fleet = problem.params.vehicle_count;
    for (yr, yn) in problem.productions(t, stock, remaining) {
        budget.visit()?;
        let ctx = problem.context(t, stock, remaining, yr + yn);
        let Some(ship) = deliver(problem.params, problem.item, &ctx) else {
            budget.pruned += 1;
            continue;
        };
        acts.push(PeriodActivity {
            ordinary: yr,
            overtime: yn,
            sends: ship.loads(fleet),
        });
        enumerate(
            problem,
            t + 1,
            stock + yr + yn - ship.total,
            remaining - ship.total,
            acts,
            best,
            budget,
        )?;
        acts.pop();
    }
    Ok(())
}

/// Optimal cost-to-go of every state reachable from the start, keyed by
/// `(periods done, stock, undelivered)`.
///
/// The holding cost of the idle periods after the last shipment is charged
/// on the transition that completes the order, so states with nothing left to
/// deliver are worth zero. Unfinishable states are infinite.
#[derive(Debug, Clone, Default)]
pub struct CompletionTable {
    values: HashMap<(u32, u32, u32), f64>,
}

impl CompletionTable {
    pub fn get(&self, period: u32, inventory: u32, remaining: u32) -> Option<f64> {
        self.values.get(&(period, inventory, remaining)).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `((period, inventory, remaining), cost)` in key order.
    pub fn entries(&self) -> Vec<((u32, u32, u32), f64)> {
        let mut out: Vec<_> = self.values.iter().map(|(&k, &v)| (k, v)).collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

pub fn completion_cost_table(
    problem: &OracleProblem<'_>,
    budget: &mut EnumerationBudget,
) -> Result<CompletionTable, SolveError> {
    let mut table = CompletionTable::default();
    cost_to_go(problem, 0, problem.opening_stock, problem.quantity, &mut table, budget)?;
    Ok(table)
}

fn idle_cost(problem: &OracleProblem<'_>, t: u32, stock: u32) -> f64 {
    let sends = vec![0; problem.params.vehicle_count as usize];
    let mut total = 0.0;
    for _ in t + 1..=problem.horizon {
        let terms = PeriodTerms {
            ordinary: 0,
            overtime: 0,
            sends: &sends,
            vehicles_used: 0,
            setup: false,
            stock_before: stock,
            stock_after: stock,
            delay_penalty: 0.0,
        };
        total += period_cost(problem.params, problem.item, &terms).total;
    }
    total
}

fn cost_to_go(
    problem: &OracleProblem<'_>,
    t: u32,
    stock: u32,
    remaining: u32,
    table: &mut CompletionTable,
    budget: &mut EnumerationBudget,
) -> Result<f64, SolveError> {
    if let Some(v) = table.get(t, stock, remaining) {
        return Ok(v);
    }
    let value = if remaining == 0 {
        0.0
    } else if t >= problem.horizon {
        f64::INFINITY
    } else {
        let p = problem.params;
        let j = problem.item;
        let next_t = t + 1;
        let fleet = p.vehicle_count;
        let mut best = f64::INFINITY;
        for (yr, yn) in problem.productions(next_t, stock, remaining) {
            budget.visit()?;
            let ctx = problem.context(next_t, stock, remaining, yr + yn);
            let Some(ship) = deliver(p, j, &ctx) else {
                budget.pruned += 1;
                continue;
            };
            let loads = ship.loads(fleet);
            let after = stock + yr + yn - ship.total;
            let left = remaining - ship.total;
            let terms = PeriodTerms {
                ordinary: yr,
                overtime: yn,
                sends: &loads,
                vehicles_used: loads.iter().filter(|&&l| l > 0).count() as u32,
                setup: yr + yn > 0,
                stock_before: stock,
                stock_after: after,
                delay_penalty: supplier_delay_penalty(ship.total, next_t, problem.lt_lower, p.delay_factor),
            };
            let mut step = period_cost(p, j, &terms).total;
            if left == 0 {
                step += idle_cost(problem, next_t, after);
            }
            let rest = cost_to_go(problem, next_t, after, left, table, budget)?;
            best = best.min(step + rest);
        }
        best
    };
    table.values.insert((t, stock, remaining), value);
    Ok(value)
}

/// The exact optimum of a bi-level instance over every demand-feasible
/// allocation.
#[derive(Debug, Clone)]
pub struct BilevelOptimum {
    pub allocation: AllocationMatrix,
    pub objective: ObjectiveValue,
    pub plans: Vec<SupplierPlan>,
    pub allocations_evaluated: u64,
}

/// Every vector `(q_1, …, q_n)` with each entry zero or inside its bounds and
/// the entries summing to `demand`.
pub fn feasible_splits(demand: u32, bounds: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(bounds.len());
    splits(demand, bounds, &mut cur, &mut out);
    out
}

fn splits(left: u32, bounds: &[(u32, u32)], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let Some((&(lo, hi), rest)) = bounds.split_first() else {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    };
    let room: u64 = rest.iter().map(|&(_, h)| u64::from(h)).sum();
    let mut options = vec![0];
    options.extend(lo.max(1)..=hi.min(left));
    for q in options {
        if q > left || u64::from(left - q) > room {
            continue;
        }
        cur.push(q);
        splits(left - q, rest, cur, out);
        cur.pop();
    }
}

pub fn brute_force_bilevel(
    inst: &ProcurementInstance,
    budget: &mut EnumerationBudget,
) -> Result<BilevelOptimum, SolveError> {
    let n = inst.supplier_count();
    let m = inst.item_count();
    let per_item: Vec<Vec<Vec<u32>>> = (0..m)
        .map(|j| {
            let bounds: Vec<_> = (0..n).map(|i| inst.buyer.bounds(i, j)).collect();
            feasible_splits(inst.buyer.demand[j], &bounds)
        })
        .collect();
    let combos = per_item
        .iter()
        .try_fold(1u64, |acc, v| acc.checked_mul(v.len() as u64))
        .unwrap_or(u64::MAX);
    if combos > budget.max_states {
        return Err(SolveError::BudgetExceeded {
            visited: combos,
            limit: budget.max_states,
        });
    }
    if combos == 0 {
        return Err(SolveError::Infeasible("no demand-feasible allocation".into()));
    }

    let mut cache: HashMap<(usize, usize, u32), Option<ItemPlan>> = HashMap::new();
    let mut best: Option<BilevelOptimum> = None;
    let mut evaluated = 0u64;
    let mut index = vec![0usize; m];
    loop {
        let mut alloc = AllocationMatrix::zeros(n, m);
        for (j, &k) in index.iter().enumerate() {
            for (i, &q) in per_item[j][k].iter().enumerate() {
                alloc.set(i, j, q);
            }
        }
        evaluated += 1;
        if let Some((objective, plans)) = evaluate(inst, &alloc, &mut cache, budget)? {
            if best.as_ref().is_none_or(|b| objective.total < b.objective.total) {
                best = Some(BilevelOptimum {
                    allocation: alloc,
                    objective,
                    plans,
                    allocations_evaluated: 0,
                });
            }
        }
        // Odometer over the per-item choices.
        let mut j = 0;
        loop {
            if j == m {
                let mut out = best.ok_or_else(|| {
                    SolveError::Infeasible("every allocation has an infeasible supplier plan".into())
                })?;
                out.allocations_evaluated = evaluated;
                return Ok(out);
            }
            index[j] += 1;
            if index[j] < per_item[j].len() {
                break;
            }
            index[j] = 0;
            j += 1;
        }
    }
}

type Evaluated = Option<(ObjectiveValue, Vec<SupplierPlan>)>;

fn evaluate(
    inst: &ProcurementInstance,
    alloc: &AllocationMatrix,
    cache: &mut HashMap<(usize, usize, u32), Option<ItemPlan>>,
    budget: &mut EnumerationBudget,
) -> Result<Evaluated, SolveError> {
    let mut plans = vec![SupplierPlan::default(); inst.supplier_count()];
    for (i, s) in inst.suppliers.iter().enumerate() {
        for j in 0..inst.item_count() {
            let q = alloc.get(i, j);
            if q == 0 {
                continue;
            }
            let entry = match cache.get(&(i, j, q)) {
                Some(e) => e.clone(),
                None => {
                    let solved = match brute_force_subproblem(s, j, q, inst.horizon, inst.buyer.lt_lower(), budget) {
                        Ok(sol) => Some(sol.plan),
                        Err(SolveError::Infeasible(_)) => None,
                        Err(e) => return Err(e),
                    };
                    cache.insert((i, j, q), solved.clone());
                    solved
                }
            };
            let Some(mut plan) = entry else {
                return Ok(None);
            };
            plan.price = bid_price(plan.total_cost, plan.delay_sum(), q, s.profit_rate)?;
            plans[i].insert(plan);
        }
    }
    let objective = buyer_objective(alloc, &plans, &inst.buyer)?;
    Ok(Some((objective, plans)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::supplier;
    use crate::model::check_plan_feasible;

    fn tiny() -> SupplierParams {
        let mut s = supplier(1);
        s.cap_ord = vec![2.0];
        s.cap_ot = vec![2.0];
        s.vehicle_count = 1;
        s.vehicle_cap = vec![3];
        s.store_cap = vec![6];
        s
    }

    #[test]
    fn warehouse_plan_wins_when_stock_covers_the_order() {
        let s = tiny();
        let mut problem = OracleProblem::new(&s, 0, 2, 2, 1);
        problem.opening_stock = 4;
        let sol = brute_force(&problem, &mut EnumerationBudget::default()).unwrap();
        assert!(sol.plan.is_warehouse_only());
        assert!(check_plan_feasible(&sol.plan, &s, 2, 2).is_empty());
    }

    #[test]
    fn enumeration_stays_within_the_product_bound() {
        let s = tiny();
        let mut budget = EnumerationBudget::default();
        let sol = brute_force_subproblem(&s, 0, 5, 2, 1, &mut budget).unwrap();
        assert!(budget.visited <= (3 * 2 * 4) * (3 * 2 * 4));
        assert_eq!(sol.plan.total_produced(), 5);
        assert!(check_plan_feasible(&sol.plan, &s, 5, 2).is_empty());
    }

    #[test]
    fn oversized_order_is_infeasible() {
        let s = tiny();
        let err = brute_force_subproblem(&s, 0, 9, 2, 1, &mut EnumerationBudget::default()).unwrap_err();
        assert!(matches!(err, SolveError::Infeasible(_)));
    }

    #[test]
    fn budget_overrun_is_loud() {
        let s = tiny();
        let err = brute_force_subproblem(&s, 0, 5, 3, 1, &mut EnumerationBudget::new(10)).unwrap_err();
        assert!(matches!(err, SolveError::BudgetExceeded { limit: 10, .. }));
    }

    #[test]
    fn table_matches_enumeration_and_goals_are_free() {
        let s = tiny();
        let problem = OracleProblem::new(&s, 0, 5, 3, 1);
        let table = completion_cost_table(&problem, &mut EnumerationBudget::default()).unwrap();
        let sol = brute_force(&problem, &mut EnumerationBudget::default()).unwrap();
        let start = table.get(0, 0, 5).unwrap();
        assert!((start - sol.cost).abs() <= 1e-9 * sol.cost.abs().max(1.0));
        for ((_, _, remaining), v) in table.entries() {
            if remaining == 0 {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn split_lattice() {
        let splits = feasible_splits(6, &[(2, 4), (2, 4)]);
        assert_eq!(splits, vec![vec![2, 4], vec![3, 3], vec![4, 2]]);
        assert_eq!(feasible_splits(5, &[(5, 5)]), vec![vec![5]]);
        assert!(feasible_splits(7, &[(1, 3), (1, 3)]).is_empty());
    }
}
