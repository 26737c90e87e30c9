use thiserror::Error;

use super::plan::ItemPlan;
use super::types::{ProcurementInstance, SupplierParams};
use crate::error::ModelError;

/// A broken instance invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceViolation {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("due window inverted: LT_lower {lower} > LT_upper {upper}")]
    DueWindowInverted { lower: u32, upper: u32 },
    #[error("allocation bounds inverted for supplier {supplier}, item {item}")]
    BoundsInverted { supplier: usize, item: usize },
    #[error("demand uncoverable for item {item}: demand {demand} > sum of Q_max {capacity}")]
    DemandUncoverable { item: usize, demand: u32, capacity: u64 },
    #[error("weights ({0}, {1}) must be non-negative and sum to 1")]
    Weights(f64, f64),
    #[error("processing time of item {item} at supplier {supplier} must be positive")]
    ProcessingTime { supplier: usize, item: usize },
    #[error("negative or non-finite {field} at supplier {supplier}")]
    NegativeValue { supplier: usize, field: &'static str },
    #[error("negative or non-finite buyer {0}")]
    NegativeBuyerValue(&'static str),
    #[error("supplier {supplier}: {what} must be positive")]
    NonPositive { supplier: usize, what: String },
    #[error("safety stock of item {item} exceeds store capacity at supplier {supplier}")]
    SafetyStockAboveStore { supplier: usize, item: usize },
    #[error("horizon must be at least one period")]
    ZeroHorizon,
}

/// Lists every broken invariant of `inst`; an empty list means the instance
/// is well formed.
pub fn validate_instance(inst: &ProcurementInstance) -> Vec<InstanceViolation> {
    let mut out = Vec::new();
    let buyer = &inst.buyer;
    let n = inst.supplier_count();
    let m = inst.item_count();

    if inst.horizon == 0 {
        out.push(InstanceViolation::ZeroHorizon);
    }
    if n == 0 || m == 0 {
        out.push(InstanceViolation::Dimension(format!(
            "{n} suppliers and {m} items; both must be positive"
        )));
        return out;
    }
    let matrices = [
        ("q_min", &buyer.q_min),
        ("q_max", &buyer.q_max),
    ];
    for (name, mat) in matrices {
        if mat.len() != n || mat.iter().any(|row| row.len() != m) {
            out.push(InstanceViolation::Dimension(format!("{name} must be {n} x {m}")));
        }
    }
    if buyer.ordering_cost.len() != n || buyer.ordering_cost.iter().any(|row| row.len() != m) {
        out.push(InstanceViolation::Dimension(format!("ordering_cost must be {n} x {m}")));
    }
    for (i, s) in inst.suppliers.iter().enumerate() {
        let per_item = [
            ("cor", s.prod_cost_ord.len()),
            ("cov", s.prod_cost_ot.len()),
            ("pt", s.proc_time.len()),
            ("h", s.hold_cost.len()),
            ("h_prime", s.hold_cost_interval.len()),
            ("sc", s.setup_cost.len()),
            ("ss", s.safety_stock.len()),
            ("vcap", s.vehicle_cap.len()),
            ("incap", s.store_cap.len()),
        ];
        for (name, len) in per_item {
            if len != m {
                out.push(InstanceViolation::Dimension(format!(
                    "supplier {i} {name} has {len} entries, expected {m}"
                )));
            }
        }
        if s.cap_ord.is_empty() || s.cap_ot.is_empty() {
            out.push(InstanceViolation::Dimension(format!(
                "supplier {i} needs at least one orc and ovc entry"
            )));
        }
    }
    if !out.is_empty() {
        return out;
    }

    let (lower, upper) = buyer.due_window;
    if lower > upper {
        out.push(InstanceViolation::DueWindowInverted { lower, upper });
    }
    let (w1, w2) = buyer.weights;
    if !(w1 >= 0.0 && w2 >= 0.0 && ((w1 + w2) - 1.0).abs() <= 1e-9) {
        out.push(InstanceViolation::Weights(w1, w2));
    }
    if !(buyer.delay_factor >= 0.0 && buyer.delay_factor.is_finite()) {
        out.push(InstanceViolation::NegativeBuyerValue("delay factor"));
    }
    if buyer.ordering_cost.iter().flatten().any(|&a| !(a >= 0.0 && a.is_finite())) {
        out.push(InstanceViolation::NegativeBuyerValue("ordering cost"));
    }
    for i in 0..n {
        for j in 0..m {
            if buyer.q_min[i][j] > buyer.q_max[i][j] {
                out.push(InstanceViolation::BoundsInverted { supplier: i, item: j });
            }
        }
    }
    for (j, &d) in buyer.demand.iter().enumerate() {
        let capacity: u64 = (0..n).map(|i| u64::from(buyer.q_max[i][j])).sum();
        if u64::from(d) > capacity {
            out.push(InstanceViolation::DemandUncoverable {
                item: j,
                demand: d,
                capacity,
            });
        }
    }
    for (i, s) in inst.suppliers.iter().enumerate() {
        supplier_violations(i, s, &mut out);
    }
    out
}

fn supplier_violations(i: usize, s: &SupplierParams, out: &mut Vec<InstanceViolation>) {
    let non_negative = |v: f64| v >= 0.0 && v.is_finite();
    let vectors: [(&'static str, &[f64]); 8] = [
        ("cor", &s.prod_cost_ord),
        ("cov", &s.prod_cost_ot),
        ("orc", &s.cap_ord),
        ("ovc", &s.cap_ot),
        ("h", &s.hold_cost),
        ("h_prime", &s.hold_cost_interval),
        ("sc", &s.setup_cost),
        ("pt", &s.proc_time),
    ];
    for (field, values) in vectors {
        if values.iter().any(|&v| !non_negative(v)) {
            out.push(InstanceViolation::NegativeValue { supplier: i, field });
        }
    }
    let scalars = [
        ("alpha", s.vehicle_fixed_cost),
        ("beta", s.vehicle_var_cost),
        ("gamma", s.delay_factor),
        ("profit_rate", s.profit_rate),
    ];
    for (field, v) in scalars {
        if !non_negative(v) {
            out.push(InstanceViolation::NegativeValue { supplier: i, field });
        }
    }
    if s.vehicle_count == 0 {
        out.push(InstanceViolation::NonPositive {
            supplier: i,
            what: "vehicle count".into(),
        });
    }
    for j in 0..s.item_count() {
        if !(s.proc_time[j] > 0.0) {
            out.push(InstanceViolation::ProcessingTime { supplier: i, item: j });
        }
        if s.vehicle_cap[j] == 0 {
            out.push(InstanceViolation::NonPositive {
                supplier: i,
                what: format!("vehicle capacity of item {j}"),
            });
        }
        if s.store_cap[j] == 0 {
            out.push(InstanceViolation::NonPositive {
                supplier: i,
                what: format!("store capacity of item {j}"),
            });
        }
        if s.safety_stock[j] > s.store_cap[j] {
            out.push(InstanceViolation::SafetyStockAboveStore { supplier: i, item: j });
        }
    }
}

/// Horizon estimate: the larger of the production and the delivery period
/// counts needed for `Q_max`, maximized over every `(i, j)` pair with a
/// positive `Q_max` and floored at one period.
///
/// Per-period capacities are averaged over the listed periods.
pub fn estimate_horizon(inst: &ProcurementInstance) -> Result<u32, ModelError> {
    let mut horizon = 1u32;
    for (i, s) in inst.suppliers.iter().enumerate() {
        let orc = mean(&s.cap_ord);
        for j in 0..inst.item_count() {
            let q_max = inst.buyer.q_max[i][j];
            if q_max == 0 {
                continue;
            }
            let ship = f64::from(s.vehicle_count) * f64::from(s.per_vehicle_cap(j));
            if orc <= 0.0 || ship <= 0.0 {
                return Err(ModelError::UnboundedHorizon { supplier: i, item: j });
            }
            let q = f64::from(q_max);
            let production = q * s.proc_time[j] / orc;
            let delivery = q / ship;
            let periods = ceil_tolerant(production.max(delivery));
            horizon = horizon.max(periods);
        }
    }
    Ok(horizon)
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn ceil_tolerant(x: f64) -> u32 {
    let c = (x - 1e-9).ceil();
    if c >= u32::MAX as f64 {
        u32::MAX
    } else {
        c.max(1.0) as u32
    }
}

/// A broken lower-level constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanViolation {
    #[error("plan shape mismatch: {0}")]
    Shape(String),
    #[error("ordinary capacity exceeded in period {period}: {volume} > {limit}")]
    OrdinaryCapacity { period: u32, volume: u32, limit: u32 },
    #[error("overtime capacity exceeded in period {period}: {volume} > {limit}")]
    OvertimeCapacity { period: u32, volume: u32, limit: u32 },
    #[error("production without setup in period {period}")]
    MissingSetup { period: u32 },
    #[error("production total {produced} differs from required {required}")]
    ProductionTotal { produced: u64, required: u64 },
    #[error("inventory balance broken in period {period}")]
    Balance { period: u32 },
    #[error("store capacity exceeded in period {period}: {stock} > {limit}")]
    StoreCapacity { period: u32, stock: u32, limit: u32 },
    #[error("delivery shortfall: shipped {shipped} of {quantity}")]
    DeliveryShortfall { shipped: u64, quantity: u32 },
    #[error("delivery excess: shipped {shipped} of {quantity}")]
    DeliveryExcess { shipped: u64, quantity: u32 },
    #[error("vehicle {vehicle} in period {period} carries {load} beyond its capacity {limit}")]
    VehicleCapacity { period: u32, vehicle: usize, load: u32, limit: u32 },
    #[error("vehicle {vehicle} in period {period} ships {load} while flagged unused")]
    UnusedVehicleShips { period: u32, vehicle: usize, load: u32 },
    #[error("too many vehicles in period {period}: {used} > {limit}")]
    VehicleCount { period: u32, used: usize, limit: u32 },
}

/// Checks the plan against the lower-level constraints (capacities, setup,
/// production total, inventory balance, store limit, delivery total, vehicle
/// loads and counts).
///
/// The production total is generalized for an opening stock above safety
/// stock: the closing stock must be `max(ss, I⁰ − q)`, so the plan must
/// produce `q + closing − I⁰`. With `I⁰ = ss` this is exactly `q`.
pub fn check_plan_feasible(
    plan: &ItemPlan,
    params: &SupplierParams,
    quantity: u32,
    horizon: u32,
) -> Vec<PlanViolation> {
    let mut out = Vec::new();
    let item = plan.item;
    let t_len = horizon as usize;
    let shape_ok = item < params.item_count()
        && plan.prod_ord.len() == t_len
        && plan.prod_ot.len() == t_len
        && plan.sends.len() == t_len
        && plan.vehicle_used.len() == t_len
        && plan.setup.len() == t_len
        && plan.inventory.len() == t_len + 1
        && plan
            .sends
            .iter()
            .zip(&plan.vehicle_used)
            .all(|(s, u)| s.len() == u.len());
    if !shape_ok {
        out.push(PlanViolation::Shape(format!(
            "expected {horizon} periods for item {item}"
        )));
        return out;
    }

    let vcap = params.vehicle_cap[item];
    let incap = params.store_cap[item];
    for idx in 0..t_len {
        let t = idx as u32 + 1;
        let yr = plan.prod_ord[idx];
        let yn = plan.prod_ot[idx];
        let ord_limit = params.ordinary_units(item, t);
        if yr > ord_limit {
            out.push(PlanViolation::OrdinaryCapacity { period: t, volume: yr, limit: ord_limit });
        }
        let ot_limit = params.overtime_units(item, t);
        if yn > ot_limit {
            out.push(PlanViolation::OvertimeCapacity { period: t, volume: yn, limit: ot_limit });
        }
        // Big-M of the setup constraint is the order quantity.
        let produced = u64::from(yr) + u64::from(yn);
        let big_m = if plan.setup[idx] { u64::from(quantity) } else { 0 };
        if produced > big_m {
            out.push(PlanViolation::MissingSetup { period: t });
        }
        let shipped: u64 = plan.sends[idx].iter().map(|&s| u64::from(s)).sum();
        let before = i64::from(plan.inventory[idx]);
        let after = i64::from(plan.inventory[idx + 1]);
        if after != before + produced as i64 - shipped as i64 {
            out.push(PlanViolation::Balance { period: t });
        }
        if plan.inventory[idx + 1] > incap {
            out.push(PlanViolation::StoreCapacity {
                period: t,
                stock: plan.inventory[idx + 1],
                limit: incap,
            });
        }
        let mut used = 0usize;
        for (v, (&load, &flag)) in plan.sends[idx].iter().zip(&plan.vehicle_used[idx]).enumerate() {
            if flag {
                used += 1;
            }
            if load > 0 && !flag {
                out.push(PlanViolation::UnusedVehicleShips { period: t, vehicle: v, load });
            }
            let limit = vcap.min(incap);
            if load > limit {
                out.push(PlanViolation::VehicleCapacity { period: t, vehicle: v, load, limit });
            }
        }
        if used > params.vehicle_count as usize {
            out.push(PlanViolation::VehicleCount {
                period: t,
                used,
                limit: params.vehicle_count,
            });
        }
    }

    let shipped = plan.total_shipped();
    if shipped < u64::from(quantity) {
        out.push(PlanViolation::DeliveryShortfall { shipped, quantity });
    } else if shipped > u64::from(quantity) {
        out.push(PlanViolation::DeliveryExcess { shipped, quantity });
    }

    let opening = u64::from(plan.opening_stock());
    let ss = u64::from(params.safety_stock[item]);
    let closing = ss.max(opening.saturating_sub(u64::from(quantity)));
    let required = u64::from(quantity) + closing - opening;
    let produced = plan.total_produced();
    if produced != required {
        out.push(PlanViolation::ProductionTotal { produced, required });
    }
    out
}
