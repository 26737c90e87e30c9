//! The per-period delivery rule.
//!
//! Given the stock carried into a period, the period's production and the
//! undelivered quantity, the rule fixes how many vehicles leave and how much
//! each carries. It first sizes a delivery so that the quadratic holding cost
//! of a load equals its transport cost, then augments every load to move
//! leftover stock when holding it would cost more than shipping it, adds
//! vehicles for what still does not fit, and holds the rest.
//!
//! Safety stock is never shipped: only stock above it is usable.

use crate::model::SupplierParams;

const ROOT_EPS: f64 = 1e-9;

/// Allowed quantity per delivery when the inter-period interval is ignored:
/// the positive root of `H·PT/2 · s² − β·s − α = 0`, floored and capped by
/// store capacity, vehicle capacity and the remaining demand.
///
/// When `H·PT = 0` the root is unbounded and only the caps apply. The result
/// is at least one whenever `remaining > 0`.
pub fn base_delivery_quantity(params: &SupplierParams, item: usize, remaining: u32) -> u32 {
    let cap = params
        .store_cap[item]
        .min(params.vehicle_cap[item])
        .min(remaining);
    if cap == 0 {
        return 0;
    }
    let hpt = params.quadratic_holding(item);
    if hpt <= 0.0 {
        return cap;
    }
    let alpha = params.vehicle_fixed_cost;
    let beta = params.vehicle_var_cost;
    let root = (beta + (beta * beta + 2.0 * alpha * hpt).sqrt()) / hpt;
    let floored = (root + ROOT_EPS).floor();
    let quantity = if floored >= f64::from(cap) { cap } else { floored as u32 };
    quantity.max(1)
}

/// Number of deliveries: `min(V, ⌈production / aq⌉)`.
pub fn delivery_count(production: u32, aq: u32, vehicles: u32) -> u32 {
    assert!(aq >= 1, "allowed quantity must be positive");
    vehicles.min(production.div_ceil(aq))
}

/// Per-vehicle augmentation that balances the holding terms against the
/// delivery cost of the augmented loads.
///
/// Solves, for `x`,
/// `nv·k(aq+x)² + k(I − nv·x)² + H'(I − nv·x) − k·I₀² = α·nv + β·nv(aq+x)`
/// with `k = H·PT/2`, `I` the end stock before augmentation and `I₀` the
/// stock carried into the period. Returns the floor of the smallest
/// non-negative real root, or zero when there is none.
pub fn augmentation_per_vehicle(
    params: &SupplierParams,
    item: usize,
    vehicles_in_use: u32,
    aq: u32,
    end_stock: u32,
    stock_before: u32,
) -> u32 {
    if vehicles_in_use == 0 {
        return 0;
    }
    let k = params.quadratic_holding(item) / 2.0;
    let hp = params.hold_cost_interval[item];
    let alpha = params.vehicle_fixed_cost;
    let beta = params.vehicle_var_cost;
    let nv = f64::from(vehicles_in_use);
    let aq = f64::from(aq);
    let stock = f64::from(end_stock);
    let before = f64::from(stock_before);

    let a2 = k * nv + k * nv * nv;
    let a1 = 2.0 * k * nv * aq - 2.0 * k * stock * nv - hp * nv - beta * nv;
    let a0 = k * nv * aq * aq + k * stock * stock + hp * stock
        - k * before * before
        - alpha * nv
        - beta * nv * aq;

    smallest_non_negative_root(a2, a1, a0)
        .map(|x| {
            let f = (x + ROOT_EPS).floor();
            if f >= f64::from(u32::MAX) {
                u32::MAX
            } else {
                f as u32
            }
        })
        .unwrap_or(0)
}

fn smallest_non_negative_root(a2: f64, a1: f64, a0: f64) -> Option<f64> {
    let scale = a2.abs().max(a1.abs()).max(a0.abs()).max(1.0);
    if a2.abs() <= 1e-12 * scale {
        if a1.abs() <= 1e-12 * scale {
            return None;
        }
        let x = -a0 / a1;
        return (x >= -ROOT_EPS).then_some(x.max(0.0));
    }
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // Numerically stable pair of roots.
    let q = -0.5 * (a1 + a1.signum() * sq);
    let mut roots = [q / a2, if q != 0.0 { a0 / q } else { q / a2 }];
    roots.sort_by(f64::total_cmp);
    roots.into_iter().find(|&r| r >= -ROOT_EPS).map(|r| r.max(0.0))
}

/// A period's shipment: `total` items split as evenly as possible over
/// `vehicles` trucks, the first `total % vehicles` trucks carrying one more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Shipment {
    pub total: u32,
    pub vehicles: u32,
}

impl Shipment {
    pub const NONE: Shipment = Shipment {
        total: 0,
        vehicles: 0,
    };

    /// Per-vehicle loads over a fleet of `fleet` vehicles.
    pub fn loads(&self, fleet: u32) -> Vec<u32> {
        let mut out = vec![0; fleet as usize];
        self.fill_loads(&mut out);
        out
    }

    /// Writes the loads of the vehicles in use to the front of `out`.
    pub fn fill_loads(&self, out: &mut [u32]) {
        if self.vehicles == 0 {
            return;
        }
        let quotient = self.total / self.vehicles;
        let remainder = self.total % self.vehicles;
        for (v, slot) in out.iter_mut().take(self.vehicles as usize).enumerate() {
            *slot = quotient + u32::from((v as u32) < remainder);
        }
    }

    /// Sum of squared loads, the argument of the quadratic holding term.
    pub fn sum_of_squares(&self) -> f64 {
        if self.vehicles == 0 {
            return 0.0;
        }
        let quotient = f64::from(self.total / self.vehicles);
        let remainder = f64::from(self.total % self.vehicles);
        let plain = f64::from(self.vehicles) - remainder;
        plain * quotient * quotient + remainder * (quotient + 1.0) * (quotient + 1.0)
    }
}

/// Where a period starts and what it produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodContext {
    pub period: u32,
    pub horizon: u32,
    pub stock_before: u32,
    pub remaining: u32,
    pub production: u32,
}

impl PeriodContext {
    fn usable(&self, safety_stock: u32) -> u32 {
        (self.stock_before + self.production)
            .saturating_sub(safety_stock)
            .min(self.remaining)
    }
}

/// Result of the augmented delivery step before extra vehicles are called.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedDelivery {
    pub sends: Vec<u32>,
    pub end_stock: u32,
    /// Vehicles in use and the per-vehicle load target `aq + x`.
    pub vehicles: u32,
    pub load: u32,
}

/// Base deliveries of size `aq` for this period's production, augmented per
/// vehicle to move leftover stock, with the shipped total capped by usable
/// stock, vehicle capacity and the augmented loads. Whatever exceeds the cap
/// is held.
pub fn augmented_delivery(
    params: &SupplierParams,
    item: usize,
    ctx: &PeriodContext,
) -> AugmentedDelivery {
    let ss = params.safety_stock[item];
    let fleet = params.vehicle_count;
    let usable = ctx.usable(ss);
    let gross = ctx.stock_before + ctx.production;
    if usable == 0 || fleet == 0 {
        return AugmentedDelivery {
            sends: vec![0; fleet as usize],
            end_stock: gross,
            vehicles: 0,
            load: 0,
        };
    }
    let cap = params.per_vehicle_cap(item);
    let aq = base_delivery_quantity(params, item, ctx.remaining).min(cap);
    let basis = if ctx.production > 0 { ctx.production } else { usable };
    let nv = delivery_count(basis, aq, fleet).max(1);
    let base_total = usable.min(nv * aq);
    let leftover = usable - base_total;
    let x = if leftover > 0 {
        augmentation_per_vehicle(params, item, nv, aq, gross - base_total, ctx.stock_before)
    } else {
        0
    };
    let load = aq.saturating_add(x).min(cap);
    let total = usable.min(nv * cap).min(nv * load);
    let shipment = Shipment {
        total,
        vehicles: nv.min(total),
    };
    AugmentedDelivery {
        sends: shipment.loads(fleet),
        end_stock: gross - total,
        vehicles: nv,
        load,
    }
}

/// The full delivery rule for one period. Returns `None` when no shipment
/// allowed by the rule keeps the end stock within store capacity, or when
/// usable stock would be left over in the final period.
pub fn deliver(params: &SupplierParams, item: usize, ctx: &PeriodContext) -> Option<Shipment> {
    let ss = params.safety_stock[item];
    let fleet = params.vehicle_count;
    let incap = params.store_cap[item];
    let usable = ctx.usable(ss);
    let gross = ctx.stock_before + ctx.production;
    let last = ctx.period >= ctx.horizon;
    if usable == 0 {
        return (gross <= incap).then_some(Shipment::NONE);
    }

    let aug = augmented_delivery(params, item, ctx);
    let mut vehicles = aug.vehicles;
    // Extra vehicles for leftover stock, one at a time.
    while vehicles < fleet && usable > vehicles * aug.load {
        vehicles += 1;
    }
    let mut total = usable.min(vehicles * aug.load);

    let violates = |total: u32| gross - total > incap || (last && total < usable);
    if violates(total) {
        let cap = params.per_vehicle_cap(item);
        vehicles = fleet.min(usable.div_ceil(cap));
        total = usable.min(vehicles * cap);
        if violates(total) {
            return None;
        }
    }
    Some(Shipment {
        total,
        vehicles: vehicles.min(total),
    })
}
