use serde::{Deserialize, Serialize};

use super::plan::{CostBreakdown, ItemPlan, SupplierPlan};
use super::types::{AllocationMatrix, BuyerParams, SupplierParams};
use crate::error::ModelError;

/// Supplier delay penalty `lodc` for one period at its lower bound:
/// `max(0, γ (t − LT_lower) · sends)`.
pub fn supplier_delay_penalty(sends_in_period: u32, t: u32, lt_lower: u32, gamma: f64) -> f64 {
    lag_penalty(sends_in_period, t, lt_lower, gamma)
}

/// Buyer shortage cost `updc` for one period at its lower bound:
/// `max(0, λ (t − LT_upper) · sends)`.
pub fn buyer_shortage_cost(sends_in_period: u32, t: u32, lt_upper: u32, lambda: f64) -> f64 {
    lag_penalty(sends_in_period, t, lt_upper, lambda)
}

fn lag_penalty(sends: u32, t: u32, due: u32, factor: f64) -> f64 {
    if t <= due || sends == 0 {
        return 0.0;
    }
    (factor * f64::from(t - due) * f64::from(sends)).max(0.0)
}

/// Inputs of one period's cost terms for one item.
#[derive(Debug, Clone, Copy)]
pub struct PeriodTerms<'a> {
    pub ordinary: u32,
    pub overtime: u32,
    pub sends: &'a [u32],
    pub vehicles_used: u32,
    pub setup: bool,
    pub stock_before: u32,
    pub stock_after: u32,
    pub delay_penalty: f64,
}

/// Evaluates the supplier cost of a single period:
/// `cor·yr + cov·yn + H·PT/2·(Σ send² + I_t² − I_{t−1}²) + H'·I_t + α·used + β·Σ send + lodc + sc·setup`.
///
/// `I'` is read as the end-of-period stock held across the interval to the
/// next period.
pub fn period_cost(params: &SupplierParams, item: usize, terms: &PeriodTerms<'_>) -> CostBreakdown {
    let hpt = params.quadratic_holding(item);
    let sq_sends: f64 = terms.sends.iter().map(|&s| f64::from(s).powi(2)).sum();
    let before = f64::from(terms.stock_before);
    let after = f64::from(terms.stock_after);
    let shipped: u32 = terms.sends.iter().sum();
    let mut c = CostBreakdown {
        production_ord: params.prod_cost_ord[item] * f64::from(terms.ordinary),
        production_ot: params.prod_cost_ot[item] * f64::from(terms.overtime),
        holding: hpt * 0.5 * (sq_sends + after * after - before * before),
        holding_interval: params.hold_cost_interval[item] * after,
        delivery_fixed: params.vehicle_fixed_cost * f64::from(terms.vehicles_used),
        delivery_var: params.vehicle_var_cost * f64::from(shipped),
        setup: if terms.setup {
            params.setup_cost[item]
        } else {
            0.0
        },
        delay: terms.delay_penalty,
        total: 0.0,
    };
    c.total = c.component_sum();
    c
}

/// `TC_ij`, summed period by period.
pub fn supplier_total_cost(
    plan: &ItemPlan,
    params: &SupplierParams,
    item: usize,
) -> Result<CostBreakdown, ModelError> {
    let horizon = plan.prod_ord.len();
    if item >= params.item_count() {
        return Err(ModelError::DimensionMismatch(format!(
            "item {item} outside supplier's {} items",
            params.item_count()
        )));
    }
    let lens = [
        plan.prod_ot.len(),
        plan.sends.len(),
        plan.vehicle_used.len(),
        plan.setup.len(),
        plan.delay_penalty.len(),
    ];
    if lens.iter().any(|&l| l != horizon) || plan.inventory.len() != horizon + 1 {
        return Err(ModelError::DimensionMismatch(format!(
            "plan for item {item} has inconsistent period vectors"
        )));
    }
    let mut total = CostBreakdown::default();
    for idx in 0..horizon {
        if plan.sends[idx].len() != plan.vehicle_used[idx].len() {
            return Err(ModelError::DimensionMismatch(format!(
                "period {} has {} sends but {} vehicle flags",
                idx + 1,
                plan.sends[idx].len(),
                plan.vehicle_used[idx].len()
            )));
        }
        let terms = PeriodTerms {
            ordinary: plan.prod_ord[idx],
            overtime: plan.prod_ot[idx],
            sends: &plan.sends[idx],
            vehicles_used: plan.vehicle_used[idx].iter().filter(|&&u| u).count() as u32,
            setup: plan.setup[idx],
            stock_before: plan.inventory[idx],
            stock_after: plan.inventory[idx + 1],
            delay_penalty: plan.delay_penalty[idx],
        };
        total += period_cost(params, item, &terms);
    }
    Ok(total)
}

/// Unit bid price `(1 + g) / q · (TC − Σ lodc)`. Delay penalties are not
/// billed to the buyer.
pub fn bid_price(total_cost: f64, delay_sum: f64, quantity: u32, profit_rate: f64) -> Result<f64, ModelError> {
    if quantity == 0 {
        return Err(ModelError::NoAllocation);
    }
    Ok((1.0 + profit_rate) / f64::from(quantity) * (total_cost - delay_sum))
}

/// The buyer's objective split into its weighted parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    /// `Σ_ij (p_ij q_ij + x_ij a_ij)`, unweighted.
    pub procurement: f64,
    /// `Σ_ijt x_ij updc_ij^t`, unweighted.
    pub shortage: f64,
    /// `w1 · procurement + w2 · shortage`.
    pub total: f64,
}

impl ObjectiveValue {
    pub fn infeasible() -> Self {
        Self {
            procurement: f64::INFINITY,
            shortage: f64::INFINITY,
            total: f64::INFINITY,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.total.is_finite()
    }
}

/// The buyer's weighted objective
/// `w1·Σ (p·q + a) + w2·Σ updc`. `plans[i]` must hold a plan for every item allocated to supplier `i`
/// whose shipments add up to `q_ij`.
pub fn buyer_objective(
    alloc: &AllocationMatrix,
    plans: &[SupplierPlan],
    buyer: &BuyerParams,
) -> Result<ObjectiveValue, ModelError> {
    if plans.len() != alloc.supplier_count() {
        return Err(ModelError::PlanMismatch(format!(
            "{} supplier plans for {} suppliers",
            plans.len(),
            alloc.supplier_count()
        )));
    }
    let (w1, w2) = buyer.weights;
    let mut procurement = 0.0;
    let mut shortage = 0.0;
    for (i, supplier_plan) in plans.iter().enumerate() {
        for j in 0..alloc.item_count() {
            let q = alloc.get(i, j);
            match (q, supplier_plan.get(j)) {
                (0, None) => {}
                (0, Some(_)) => {
                    return Err(ModelError::PlanMismatch(format!(
                        "supplier {i} has a plan for unallocated item {j}"
                    )))
                }
                (_, None) => {
                    return Err(ModelError::PlanMismatch(format!(
                        "supplier {i} has no plan for item {j} (q = {q})"
                    )))
                }
                (q, Some(plan)) => {
                    if plan.total_shipped() != u64::from(q) {
                        return Err(ModelError::PlanMismatch(format!(
                            "supplier {i} ships {} of item {j}, allocation is {q}",
                            plan.total_shipped()
                        )));
                    }
                    procurement += plan.price * f64::from(q) + buyer.ordering_cost[i][j];
                    for t in 1..=plan.horizon() {
                        shortage += buyer_shortage_cost(
                            plan.shipped_in(t),
                            t,
                            buyer.lt_upper(),
                            buyer.delay_factor,
                        );
                    }
                }
            }
        }
    }
    Ok(ObjectiveValue {
        procurement,
        shortage,
        total: w1 * procurement + w2 * shortage,
    })
}
