use serde::{Deserialize, Serialize};

/// Default objective weights (procurement, shortage).
pub const DEFAULT_WEIGHTS: (f64, f64) = (0.4, 0.6);

/// Tolerance applied before flooring capacity ratios such as `orc / PT`.
pub(crate) const FLOOR_EPS: f64 = 1e-9;

/// The buyer's (leader's) data.
///
/// Matrices are indexed `[supplier][item]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuyerParams {
    pub demand: Vec<u32>,
    /// Early and late acceptable due dates `(LT_lower, LT_upper)`.
    pub due_window: (u32, u32),
    pub q_min: Vec<Vec<u32>>,
    pub q_max: Vec<Vec<u32>>,
    /// Shortage factor λ charged per item and period after `LT_upper`.
    pub delay_factor: f64,
    pub ordering_cost: Vec<Vec<f64>>,
    pub weights: (f64, f64),
}

impl BuyerParams {
    pub fn lt_lower(&self) -> u32 {
        self.due_window.0
    }

    pub fn lt_upper(&self) -> u32 {
        self.due_window.1
    }

    pub fn bounds(&self, supplier: usize, item: usize) -> (u32, u32) {
        (self.q_min[supplier][item], self.q_max[supplier][item])
    }
}

/// One supplier's (follower's) data.
///
/// Per-item vectors are indexed by item. `cap_ord` and `cap_ot` are indexed by
/// period (`t - 1`); a vector shorter than the horizon repeats its last entry,
/// so a single value means a constant capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupplierParams {
    pub prod_cost_ord: Vec<f64>,
    pub prod_cost_ot: Vec<f64>,
    pub cap_ord: Vec<f64>,
    pub cap_ot: Vec<f64>,
    pub proc_time: Vec<f64>,
    pub hold_cost: Vec<f64>,
    pub hold_cost_interval: Vec<f64>,
    pub setup_cost: Vec<f64>,
    pub safety_stock: Vec<u32>,
    pub vehicle_cap: Vec<u32>,
    pub store_cap: Vec<u32>,
    pub vehicle_count: u32,
    pub vehicle_fixed_cost: f64,
    pub vehicle_var_cost: f64,
    pub delay_factor: f64,
    pub profit_rate: f64,
}

fn per_period(values: &[f64], t: u32) -> f64 {
    debug_assert!(t >= 1);
    match values.len() {
        0 => 0.0,
        n => values[(t as usize - 1).min(n - 1)],
    }
}

impl SupplierParams {
    /// Ordinary-time capacity (time units) in period `t` (1-based).
    pub fn ordinary_capacity(&self, t: u32) -> f64 {
        per_period(&self.cap_ord, t)
    }

    pub fn overtime_capacity(&self, t: u32) -> f64 {
        per_period(&self.cap_ot, t)
    }

    /// Largest ordinary production volume of `item` in period `t`: `⌊orc_t / PT⌋`.
    pub fn ordinary_units(&self, item: usize, t: u32) -> u32 {
        units(self.ordinary_capacity(t), self.proc_time[item])
    }

    /// Largest overtime production volume of `item` in period `t`: `⌊ovc_t / PT⌋`.
    pub fn overtime_units(&self, item: usize, t: u32) -> u32 {
        units(self.overtime_capacity(t), self.proc_time[item])
    }

    /// Largest quantity one vehicle may carry: `min(VCap, InCap)`.
    pub fn per_vehicle_cap(&self, item: usize) -> u32 {
        self.vehicle_cap[item].min(self.store_cap[item])
    }

    /// `H · PT`, the coefficient of the quadratic holding term.
    pub fn quadratic_holding(&self, item: usize) -> f64 {
        self.hold_cost[item] * self.proc_time[item]
    }

    pub fn item_count(&self) -> usize {
        self.prod_cost_ord.len()
    }
}

fn units(capacity: f64, proc_time: f64) -> u32 {
    if proc_time <= 0.0 || capacity <= 0.0 {
        return 0;
    }
    let ratio = capacity / proc_time + FLOOR_EPS;
    if ratio >= u32::MAX as f64 {
        u32::MAX
    } else {
        ratio.floor() as u32
    }
}

/// Complete problem data for one bi-level procurement instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcurementInstance {
    pub name: String,
    pub buyer: BuyerParams,
    pub suppliers: Vec<SupplierParams>,
    pub horizon: u32,
}

impl ProcurementInstance {
    pub fn item_count(&self) -> usize {
        self.buyer.demand.len()
    }

    pub fn supplier_count(&self) -> usize {
        self.suppliers.len()
    }

    /// A copy with every supplier's delay factor γ replaced.
    pub fn with_supplier_delay_factor(&self, gamma: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.suppliers {
            s.delay_factor = gamma;
        }
        out
    }

    /// A copy with objective weights `(w1, 1 - w1)`.
    pub fn with_procurement_weight(&self, w1: f64) -> Self {
        let mut out = self.clone();
        out.buyer.weights = (w1, 1.0 - w1);
        out
    }
}

/// The buyer's decision `q_ij`, one request for quotation.
///
/// The activation flag `x_ij` is not stored; it is `q_ij > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AllocationMatrix {
    q: Vec<Vec<u32>>,
}

impl AllocationMatrix {
    pub fn zeros(suppliers: usize, items: usize) -> Self {
        Self {
            q: vec![vec![0; items]; suppliers],
        }
    }

    pub fn from_rows(q: Vec<Vec<u32>>) -> Self {
        Self { q }
    }

    pub fn get(&self, supplier: usize, item: usize) -> u32 {
        self.q[supplier][item]
    }

    pub fn set(&mut self, supplier: usize, item: usize, value: u32) {
        self.q[supplier][item] = value;
    }

    pub fn is_active(&self, supplier: usize, item: usize) -> bool {
        self.q[supplier][item] > 0
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.q
    }

    pub fn supplier_count(&self) -> usize {
        self.q.len()
    }

    pub fn item_count(&self) -> usize {
        self.q.first().map_or(0, Vec::len)
    }

    pub fn column_sum(&self, item: usize) -> u64 {
        self.q.iter().map(|row| u64::from(row[item])).sum()
    }

    /// True when every column sums to its demand and every positive entry
    /// lies within its `[Q_min, Q_max]` band.
    pub fn is_demand_feasible(&self, buyer: &BuyerParams) -> bool {
        if self.q.len() != buyer.q_min.len() {
            return false;
        }
        for (j, &d) in buyer.demand.iter().enumerate() {
            if self.column_sum(j) != u64::from(d) {
                return false;
            }
        }
        self.q.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, &q)| {
                let (lo, hi) = buyer.bounds(i, j);
                q == 0 || (lo <= q && q <= hi)
            })
        })
    }
}
