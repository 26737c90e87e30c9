//! A* planning of one supplier's production and deliveries for one item.
//!
//! A state is `(period, stock, undelivered quantity)`. From period `t` the
//! planner branches on ordinary production, adds overtime only once ordinary
//! capacity is full, and lets the delivery rule decide the shipment. Orders
//! that the usable stock already covers need no production and collapse to a
//! single chain of delivery-only periods.

mod engine;
mod heuristic;

pub use engine::{
    search, Beam, SearchFailure, SearchNode, SearchOutcome, SearchSpace, SearchStats, Successor,
    TraceStep,
};
pub use heuristic::heuristic_cost;

use serde::{Deserialize, Serialize};

use crate::delivery::{deliver, PeriodContext, Shipment};
use crate::error::SolveError;
use crate::model::{
    period_cost, supplier_delay_penalty, ItemPlan, PeriodActivity, PeriodTerms, SupplierParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlannerState {
    /// Periods already planned; `0` before the first period.
    pub period: u32,
    pub inventory: u32,
    pub remaining: u32,
}

/// What happens in one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodAction {
    pub ordinary: u32,
    pub overtime: u32,
    pub shipment: Shipment,
}

impl PeriodAction {
    pub fn production(&self) -> u32 {
        self.ordinary + self.overtime
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchConfig {
    #[serde(with = "beam_serde")]
    pub beam: Beam,
    /// Spacing of the enumerated production volumes; the largest volume is
    /// always included. Values above one trade optimality for speed.
    pub stride: u32,
    pub expansion_limit: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            beam: Beam::DEFAULT,
            stride: 1,
            expansion_limit: None,
        }
    }
}

impl SearchConfig {
    pub fn exact() -> Self {
        Self {
            beam: Beam::Unbounded,
            stride: 1,
            expansion_limit: None,
        }
    }
}

mod beam_serde {
    use super::Beam;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(beam: &Beam, s: S) -> Result<S::Ok, S::Error> {
        match beam {
            Beam::Bounded(k) => s.serialize_some(k),
            Beam::Unbounded => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Beam, D::Error> {
        Ok(match Option::<usize>::deserialize(d)? {
            Some(k) => Beam::Bounded(k),
            None => Beam::Unbounded,
        })
    }
}

/// Production volumes per period, with suffix totals. Index `t` holds
/// period `t`; the suffix entries at `t` cover periods `t+1..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityTable {
    pub ordinary: Vec<u32>,
    pub overtime: Vec<u32>,
    pub ordinary_after: Vec<u64>,
    pub overtime_after: Vec<u64>,
    /// Largest single-period volume after `t`.
    pub widest_after: Vec<u64>,
}

impl CapacityTable {
    pub fn new(p: &SupplierParams, item: usize, horizon: u32) -> Self {
        let len = horizon as usize + 1;
        let mut table = Self {
            ordinary: vec![0; len],
            overtime: vec![0; len],
            ordinary_after: vec![0; len],
            overtime_after: vec![0; len],
            widest_after: vec![0; len],
        };
        for t in 1..=horizon {
            table.ordinary[t as usize] = p.ordinary_units(item, t);
            table.overtime[t as usize] = p.overtime_units(item, t);
        }
        for t in (0..horizon as usize).rev() {
            let (o, v) = (u64::from(table.ordinary[t + 1]), u64::from(table.overtime[t + 1]));
            table.ordinary_after[t] = table.ordinary_after[t + 1] + o;
            table.overtime_after[t] = table.overtime_after[t + 1] + v;
            table.widest_after[t] = table.widest_after[t + 1].max(o + v);
        }
        table
    }

    /// Total volume of periods `t+1..=T`.
    pub fn total_after(&self, t: u32) -> u64 {
        let t = t as usize;
        self.ordinary_after[t] + self.overtime_after[t]
    }
}

/// One supplier's lower-level problem for one item.
#[derive(Debug, Clone)]
pub struct Subproblem<'a> {
    pub params: &'a SupplierParams,
    pub item: usize,
    pub quantity: u32,
    pub horizon: u32,
    pub lt_lower: u32,
    pub opening_stock: u32,
    pub capacity: CapacityTable,
}

impl<'a> Subproblem<'a> {
    /// Starts from the safety stock.
    pub fn new(
        params: &'a SupplierParams,
        item: usize,
        quantity: u32,
        horizon: u32,
        lt_lower: u32,
    ) -> Self {
        Self {
            params,
            item,
            quantity,
            horizon,
            lt_lower,
            opening_stock: params.safety_stock[item],
            capacity: CapacityTable::new(params, item, horizon),
        }
    }

    /// Overrides the opening stock, which must not be below the safety stock.
    pub fn with_opening_stock(mut self, stock: u32) -> Self {
        self.opening_stock = stock.max(self.params.safety_stock[self.item]);
        self
    }

    pub fn start(&self) -> PlannerState {
        PlannerState {
            period: 0,
            inventory: self.opening_stock,
            remaining: self.quantity,
        }
    }

    /// Stock expected at the end of the horizon.
    pub fn closing_stock(&self) -> u32 {
        let ss = self.params.safety_stock[self.item];
        self.opening_stock.saturating_sub(self.quantity).max(ss)
    }

    /// True when usable stock covers the order and nothing is produced.
    pub fn is_warehouse_order(&self) -> bool {
        let ss = self.params.safety_stock[self.item];
        self.quantity <= self.opening_stock - ss
    }

    /// Units still to be produced from `state` onwards.
    pub fn production_need(&self, state: &PlannerState) -> u32 {
        let usable = state.inventory.saturating_sub(self.params.safety_stock[self.item]);
        state.remaining.saturating_sub(usable)
    }

    /// Cost of one period: the supplier cost terms for the action plus, when
    /// the order completes before the horizon, the holding of the closing
    /// stock over the idle tail.
    pub fn step(&self, state: &PlannerState, ordinary: u32, overtime: u32) -> Option<(PlannerState, Shipment, f64)> {
        let p = self.params;
        let j = self.item;
        let t = state.period + 1;
        let production = ordinary + overtime;
        let ctx = PeriodContext {
            period: t,
            horizon: self.horizon,
            stock_before: state.inventory,
            remaining: state.remaining,
            production,
        };
        let shipment = deliver(p, j, &ctx)?;
        let next = PlannerState {
            period: t,
            inventory: state.inventory + production - shipment.total,
            remaining: state.remaining - shipment.total,
        };
        let used = shipment.vehicles as usize;
        let mut stack = [0u32; 8];
        let heap;
        let sends: &[u32] = if used <= stack.len() {
            shipment.fill_loads(&mut stack);
            &stack[..used]
        } else {
            heap = shipment.loads(shipment.vehicles);
            &heap
        };
        let terms = PeriodTerms {
            ordinary,
            overtime,
            sends,
            vehicles_used: shipment.vehicles,
            setup: production > 0,
            stock_before: state.inventory,
            stock_after: next.inventory,
            delay_penalty: supplier_delay_penalty(shipment.total, t, self.lt_lower, p.delay_factor),
        };
        let mut cost = period_cost(p, j, &terms).total;
        if next.remaining == 0 && t < self.horizon {
            cost += idle_tail_cost(p, j, next.inventory, self.horizon - t);
        }
        Some((next, shipment, cost))
    }

    /// Necessary conditions for a completion to exist from `state`.
    fn can_complete(&self, state: &PlannerState) -> bool {
        if state.remaining == 0 {
            return true;
        }
        if state.period >= self.horizon {
            return false;
        }
        let p = self.params;
        let left = self.horizon - state.period;
        let ship_room =
            u64::from(p.vehicle_count) * u64::from(p.per_vehicle_cap(self.item)) * u64::from(left);
        if u64::from(state.remaining) > ship_room {
            return false;
        }
        u64::from(self.production_need(state)) <= self.capacity.total_after(state.period)
    }

    /// Children of `state`: every enumerated production volume whose shipment
    /// the delivery rule accepts and whose successor can still complete.
    pub fn successors(&self, state: &PlannerState, stride: u32) -> Vec<(PeriodAction, PlannerState, f64)> {
        let mut out = Vec::new();
        if state.remaining == 0 || state.period >= self.horizon {
            return out;
        }
        let t = state.period + 1;
        let need = self.production_need(state);
        let ord_cap = self.capacity.ordinary[t as usize];
        let ot_cap = self.capacity.overtime[t as usize];
        let mut push = |yr: u32, yn: u32| {
            if let Some((next, shipment, cost)) = self.step(state, yr, yn) {
                if self.can_complete(&next) {
                    let action = PeriodAction {
                        ordinary: yr,
                        overtime: yn,
                        shipment,
                    };
                    out.push((action, next, cost));
                }
            }
        };
        let top = need.min(ord_cap);
        for yr in stepped(top, stride) {
            push(yr, 0);
            if yr == ord_cap && need > yr {
                for yn in stepped(ot_cap.min(need - yr), stride).skip(1) {
                    push(yr, yn);
                }
            }
        }
        out
    }
}

/// `0, s, 2s, …` below `top`, then `top` itself.
fn stepped(top: u32, stride: u32) -> impl Iterator<Item = u32> {
    let stride = stride.max(1) as usize;
    (0..top)
        .step_by(stride)
        .chain(std::iter::once(top))
}

pub(crate) fn idle_tail_cost(p: &SupplierParams, j: usize, stock: u32, periods: u32) -> f64 {
    p.hold_cost_interval[j] * f64::from(stock) * f64::from(periods)
}

struct Space<'s, 'a> {
    sub: &'s Subproblem<'a>,
    stride: u32,
}

impl SearchSpace for Space<'_, '_> {
    type State = PlannerState;
    type Action = PeriodAction;

    fn start(&self) -> PlannerState {
        self.sub.start()
    }

    fn is_goal(&self, state: &PlannerState) -> bool {
        state.remaining == 0
    }

    fn expand(&self, state: &PlannerState, out: &mut Vec<Successor<PlannerState, PeriodAction>>) {
        out.extend(
            self.sub
                .successors(state, self.stride)
                .into_iter()
                .map(|(action, state, cost)| Successor {
                    action,
                    state,
                    cost,
                }),
        );
    }

    fn heuristic(&self, state: &PlannerState) -> f64 {
        heuristic_cost(self.sub, state)
    }
}

/// Expands one node into its children with `g`, `h` and `f` filled in.
pub fn expand_node(
    sub: &Subproblem<'_>,
    node: &SearchNode<PlannerState, PeriodAction>,
    parent_index: usize,
    stride: u32,
) -> Vec<SearchNode<PlannerState, PeriodAction>> {
    sub.successors(&node.state, stride)
        .into_iter()
        .map(|(action, state, cost)| {
            let g = node.g + cost;
            let h = heuristic_cost(sub, &state);
            SearchNode {
                state,
                g,
                h,
                f: g + h,
                action: Some(action),
                parent: Some(parent_index),
                depth: node.depth + 1,
            }
        })
        .collect()
}

/// A solved subproblem.
#[derive(Debug, Clone)]
pub struct SubproblemSolution {
    pub plan: ItemPlan,
    /// Cost accumulated by the search, equal to `plan.total_cost` up to
    /// rounding.
    pub cost: f64,
    pub stats: SearchStats,
}

/// Solves the subproblem by A*.
pub fn solve_subproblem(sub: &Subproblem<'_>, cfg: &SearchConfig) -> Result<SubproblemSolution, SolveError> {
    if sub.horizon == 0 {
        return Err(SolveError::Infeasible("horizon has no periods".into()));
    }
    let space = Space {
        sub,
        stride: cfg.stride,
    };
    let outcome = match search(&space, cfg.beam, cfg.expansion_limit, None) {
        Ok(o) => o,
        Err(SearchFailure::Exhausted) => {
            return Err(SolveError::Infeasible(format!(
                "no plan ships {} units of item {} within {} periods",
                sub.quantity, sub.item, sub.horizon
            )))
        }
        Err(SearchFailure::LimitReached { expanded }) => {
            return Err(SolveError::BudgetExceeded {
                visited: expanded,
                limit: cfg.expansion_limit.unwrap_or(expanded),
            })
        }
    };
    let path = outcome
        .path()
        .ok_or_else(|| SolveError::Internal("broken parent chain".into()))?;
    let actions: Vec<PeriodAction> = path[1..]
        .iter()
        .map(|&i| outcome.nodes[i].action.expect("non-root nodes carry an action"))
        .collect();
    let plan = reconstruct_plan(sub, &actions)?;
    let mut cost = outcome.goal_node().g;
    if actions.is_empty() {
        cost += idle_tail_cost(sub.params, sub.item, sub.opening_stock, sub.horizon);
    }
    Ok(SubproblemSolution {
        plan,
        cost,
        stats: outcome.stats,
    })
}

/// Turns the goal path's actions into a full-horizon plan, padding idle
/// periods after the last shipment.
pub fn reconstruct_plan(sub: &Subproblem<'_>, actions: &[PeriodAction]) -> Result<ItemPlan, SolveError> {
    let fleet = sub.params.vehicle_count;
    if actions.len() > sub.horizon as usize {
        return Err(SolveError::Internal(format!(
            "{} actions for a {}-period horizon",
            actions.len(),
            sub.horizon
        )));
    }
    let mut acts: Vec<PeriodActivity> = actions
        .iter()
        .map(|a| PeriodActivity {
            ordinary: a.ordinary,
            overtime: a.overtime,
            sends: a.shipment.loads(fleet),
        })
        .collect();
    acts.resize(sub.horizon as usize, PeriodActivity::idle(fleet));
    let plan = ItemPlan::assemble(
        sub.params,
        sub.item,
        sub.quantity,
        sub.opening_stock,
        sub.lt_lower,
        &acts,
    )?;
    if plan.total_shipped() != u64::from(sub.quantity) {
        return Err(SolveError::Internal(format!(
            "reconstructed plan ships {} of {}",
            plan.total_shipped(),
            sub.quantity
        )));
    }
    Ok(plan)
}

#[cfg(test)]
mod tests;
