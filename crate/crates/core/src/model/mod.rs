//! Symbols of the bi-level model: instance data, cost laws, plan feasibility
//! and horizon estimation.

mod cost;
mod plan;
mod types;
mod validate;

pub use cost::{
    bid_price, buyer_objective, buyer_shortage_cost, period_cost, supplier_delay_penalty,
    supplier_total_cost, ObjectiveValue, PeriodTerms,
};
pub use plan::{CostBreakdown, ItemPlan, PeriodActivity, SupplierPlan};
pub use types::{
    AllocationMatrix, BuyerParams, ProcurementInstance, SupplierParams, DEFAULT_WEIGHTS,
};
pub use validate::{
    check_plan_feasible, estimate_horizon, validate_instance, InstanceViolation, PlanViolation,
};
