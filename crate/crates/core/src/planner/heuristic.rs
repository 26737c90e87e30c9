//! Lower bound on the cost of completing a subproblem from a state.
//!
//! Every term bounds a separate family of the period cost, so their sum never
//! exceeds the cheapest completion:
//!
//! * production: the remaining need filled from the cheaper mode first;
//! * setup: one charge per period that must produce;
//! * fixed and quadratic delivery cost, bounded jointly over the number of
//!   loads `N` as `α·N + H·PT/2 · S²/N`;
//! * variable delivery cost `β·S`;
//! * inter-period holding of at least the safety stock;
//! * the telescoped stock term, which is exact;
//! * delay penalties of an earliest-possible shipping schedule.

use crate::model::SupplierParams;

use super::{PlannerState, Subproblem};

pub fn heuristic_cost(sub: &Subproblem<'_>, state: &PlannerState) -> f64 {
    if state.remaining == 0 {
        return 0.0;
    }
    let p = sub.params;
    let j = sub.item;
    let t = state.period;
    let horizon = sub.horizon;
    if t >= horizon {
        return f64::INFINITY;
    }
    let ss = p.safety_stock[j];
    let left = horizon - t;
    let s = state.remaining;
    let usable = state.inventory.saturating_sub(ss).min(s);
    let need = s - usable;

    let mut h = production_bound(sub, t, need);
    if !h.is_finite() {
        return h;
    }

    let cap = p.per_vehicle_cap(j);
    let fleet = p.vehicle_count;
    let Some(load_bound) = load_bound(p, j, s, cap, u64::from(fleet) * u64::from(left)) else {
        return f64::INFINITY;
    };
    h += load_bound;
    h += p.vehicle_var_cost * f64::from(s);
    h += p.hold_cost_interval[j] * f64::from(ss) * f64::from(left);

    let closing = f64::from(state.inventory.saturating_sub(s).max(ss));
    let now = f64::from(state.inventory);
    h += 0.5 * p.quadratic_holding(j) * (closing * closing - now * now);

    match delay_bound(sub, t, usable, s, u64::from(fleet) * u64::from(cap)) {
        Some(d) => h + d,
        None => f64::INFINITY,
    }
}

/// Cheapest production of `need` units over periods `t+1..=T`, or infinity
/// when capacity falls short. Setup is charged once per period that is needed
/// at the largest per-period volume.
fn production_bound(sub: &Subproblem<'_>, t: u32, need: u32) -> f64 {
    if need == 0 {
        return 0.0;
    }
    let p = sub.params;
    let j = sub.item;
    let caps = &sub.capacity;
    let ord_total = caps.ordinary_after[t as usize];
    let ot_total = caps.overtime_after[t as usize];
    let widest = caps.widest_after[t as usize];
    let need = u64::from(need);
    if need > ord_total + ot_total || widest == 0 {
        return f64::INFINITY;
    }
    let (cor, cov) = (p.prod_cost_ord[j], p.prod_cost_ot[j]);
    let (cheap, cheap_cap, dear) = if cor <= cov {
        (cor, ord_total, cov)
    } else {
        (cov, ot_total, cor)
    };
    let first = need.min(cheap_cap);
    let production = cheap * first as f64 + dear * (need - first) as f64;
    let setups = need.div_ceil(widest);
    production + p.setup_cost[j] * setups as f64
}

/// `min α·N + k·S²/N` over the feasible load counts `N`; `k = H·PT/2`.
fn load_bound(p: &SupplierParams, j: usize, s: u32, cap: u32, slots: u64) -> Option<f64> {
    if cap == 0 {
        return None;
    }
    let lo = u64::from(s.div_ceil(cap));
    let hi = slots.min(u64::from(s));
    if lo > hi {
        return None;
    }
    let alpha = p.vehicle_fixed_cost;
    let k = 0.5 * p.quadratic_holding(j);
    let s = f64::from(s);
    let eval = |n: u64| alpha * n as f64 + k * s * s / n as f64;
    let mut best = eval(lo).min(eval(hi));
    if alpha > 0.0 && k > 0.0 {
        let star = s * (k / alpha).sqrt();
        for n in [star.floor(), star.ceil()] {
            let n = (n.max(lo as f64) as u64).min(hi);
            best = best.min(eval(n));
        }
    }
    Some(best)
}

/// Delay penalties of shipping as early as stock, production capacity and the
/// fleet allow. `None` when even that schedule cannot ship everything.
fn delay_bound(sub: &Subproblem<'_>, t: u32, usable: u32, s: u32, per_period: u64) -> Option<f64> {
    let gamma = sub.params.delay_factor;
    let caps = &sub.capacity;
    let total = u64::from(s);
    let mut shipped = 0u64;
    let mut available = u64::from(usable);
    let mut cost = 0.0;
    for tau in t + 1..=sub.horizon {
        available += u64::from(caps.ordinary[tau as usize]) + u64::from(caps.overtime[tau as usize]);
        let ship = (total - shipped).min(per_period).min(available - shipped);
        if tau > sub.lt_lower {
            cost += gamma * f64::from(tau - sub.lt_lower) * ship as f64;
        }
        shipped += ship;
        if shipped == total {
            return Some(cost);
        }
    }
    None
}
