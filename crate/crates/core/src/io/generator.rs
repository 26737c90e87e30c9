//! Random instances.
//!
//! `generate_instance` draws full-size buyer/supplier data; `micro_case` and
//! `tiny_bilevel` draw problems small enough for the brute-force oracle.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::instance_file::InstanceFile;
use crate::model::{
    estimate_horizon, BuyerParams, ProcurementInstance, SupplierParams, DEFAULT_WEIGHTS,
};

/// `(suppliers, items)` of the small comparison suite.
pub const SMALL_SUITE_SIZES: [(usize, usize); 14] = [
    (2, 1),
    (2, 2),
    (2, 3),
    (2, 5),
    (2, 7),
    (3, 1),
    (3, 2),
    (3, 3),
    (3, 5),
    (3, 7),
    (4, 1),
    (4, 2),
    (4, 3),
    (5, 1),
];

/// `(suppliers, items)` of the large comparison suite.
pub const LARGE_SUITE_SIZES: [(usize, usize); 4] = [(8, 30), (10, 50), (10, 70), (15, 70)];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn supplier(r: &mut ChaCha8Rng, items: usize) -> SupplierParams {
    let cor: Vec<f64> = (0..items).map(|_| r.gen_range(5.0..15.0)).collect();
    let cov = cor.iter().map(|c| c * r.gen_range(1.2..1.6)).collect();
    let hold: Vec<f64> = (0..items).map(|_| r.gen_range(0.5..2.0)).collect();
    let hold_interval = hold.iter().map(|h| h * r.gen_range(0.5..1.0)).collect();
    let safety: Vec<u32> = (0..items).map(|_| r.gen_range(0..=20)).collect();
    SupplierParams {
        prod_cost_ord: cor,
        prod_cost_ot: cov,
        cap_ord: vec![r.gen_range(200.0..400.0)],
        cap_ot: vec![r.gen_range(200.0..400.0)],
        proc_time: (0..items).map(|_| r.gen_range(3.0..5.5)).collect(),
        hold_cost: hold,
        hold_cost_interval: hold_interval,
        setup_cost: (0..items).map(|_| r.gen_range(50.0..200.0)).collect(),
        vehicle_cap: (0..items).map(|_| r.gen_range(20..=60)).collect(),
        store_cap: safety.iter().map(|&ss| r.gen_range(40..=120u32).max(ss)).collect(),
        safety_stock: safety,
        vehicle_count: r.gen_range(2..=5),
        vehicle_fixed_cost: r.gen_range(20.0..80.0),
        vehicle_var_cost: r.gen_range(0.5..3.0),
        delay_factor: r.gen_range(0.3..0.9),
        profit_rate: r.gen_range(0.05..0.2),
    }
}

/// A full-size random instance. Demand is uniform on `[300, 1000]` and
/// processing times on `[3, 5.5]`; the horizon is estimated and the due
/// window placed at one half and three quarters of it.
pub fn generate_instance(suppliers: usize, items: usize, seed: u64) -> InstanceFile {
    assert!(suppliers >= 1 && items >= 1, "need at least one supplier and one item");
    let mut r = rng(seed);
    let demand: Vec<u32> = (0..items).map(|_| r.gen_range(300..=1000)).collect();
    let sups: Vec<SupplierParams> = (0..suppliers).map(|_| supplier(&mut r, items)).collect();
    let n = suppliers as f64;
    let mut q_min = vec![vec![0; items]; suppliers];
    let mut q_max = vec![vec![0; items]; suppliers];
    for j in 0..items {
        for i in 0..suppliers {
            let d = f64::from(demand[j]);
            let hi = ((d * r.gen_range(1.2 / n..2.0 / n)).ceil() as u32).min(demand[j]);
            q_max[i][j] = hi;
            q_min[i][j] = (f64::from(hi) * r.gen_range(0.1..0.4)).floor() as u32;
        }
    }
    let ordering_cost = (0..suppliers)
        .map(|_| (0..items).map(|_| r.gen_range(10.0..50.0)).collect())
        .collect();
    let mean_gamma = sups.iter().map(|s| s.delay_factor).sum::<f64>() / n;
    let mut inst = ProcurementInstance {
        name: format!("random-{suppliers}x{items}-{seed}"),
        buyer: BuyerParams {
            demand,
            due_window: (0, 0),
            q_min,
            q_max,
            delay_factor: 2.0 * mean_gamma,
            ordering_cost,
            weights: DEFAULT_WEIGHTS,
        },
        suppliers: sups,
        horizon: 1,
    };
    inst.horizon = estimate_horizon(&inst).expect("generated capacities are positive");
    let t = inst.horizon;
    let lower = (t / 2).max(1);
    inst.buyer.due_window = (lower, lower.max((3 * t).div_ceil(4)));
    InstanceFile::from_instance(&inst, Some(seed))
}

/// One generated instance per `(suppliers, items)` size, seeded
/// `seed, seed + 1, …`.
pub fn generate_suite(sizes: &[(usize, usize)], seed: u64) -> Vec<InstanceFile> {
    sizes
        .iter()
        .enumerate()
        .map(|(k, &(n, m))| generate_instance(n, m, seed.wrapping_add(k as u64)))
        .collect()
}

/// A single supplier-item problem small enough for exhaustive enumeration:
/// at most 3 periods, at most 5 units of ordinary and 3 of overtime
/// production per period, at most 2 vehicles, orders of at most 8 units.
/// Overtime never costs less than ordinary time.
#[derive(Debug, Clone, PartialEq)]
pub struct MicroCase {
    pub params: SupplierParams,
    pub quantity: u32,
    pub horizon: u32,
    pub lt_lower: u32,
}

fn micro_supplier(r: &mut ChaCha8Rng) -> SupplierParams {
    let pt = if r.gen_bool(0.5) { 1.0 } else { 2.0 };
    let ord_units = r.gen_range(0..=5u32);
    let ot_units = r.gen_range(0..=3u32);
    // A fractional remainder exercises the floor in the capacity conversion.
    let orc = (f64::from(ord_units) + r.gen_range(0.0..0.9)) * pt;
    let ovc = (f64::from(ot_units) + r.gen_range(0.0..0.9)) * pt;
    let cor = r.gen_range(1.0..10.0);
    let ss = r.gen_range(0..=2u32);
    let vcap = r.gen_range(1..=5u32);
    SupplierParams {
        prod_cost_ord: vec![cor],
        prod_cost_ot: vec![cor * r.gen_range(1.0..1.6)],
        cap_ord: vec![orc],
        cap_ot: vec![ovc],
        proc_time: vec![pt],
        hold_cost: vec![r.gen_range(0.0..2.0)],
        hold_cost_interval: vec![r.gen_range(0.0..2.0)],
        setup_cost: vec![r.gen_range(0.0..10.0)],
        safety_stock: vec![ss],
        vehicle_cap: vec![vcap],
        store_cap: vec![r.gen_range(vcap.max(ss).max(1)..=vcap + ss + 4)],
        vehicle_count: r.gen_range(1..=2),
        vehicle_fixed_cost: r.gen_range(0.0..10.0),
        vehicle_var_cost: r.gen_range(0.0..3.0),
        delay_factor: r.gen_range(0.0..2.0),
        profit_rate: r.gen_range(0.0..0.2),
    }
}

pub fn micro_case(seed: u64) -> MicroCase {
    let mut r = rng(seed ^ 0x6d69_6372_6f00_0000);
    let params = micro_supplier(&mut r);
    let horizon = r.gen_range(1..=3u32);
    let production = params.ordinary_units(0, 1) + params.overtime_units(0, 1);
    let shipping = params.vehicle_count * params.per_vehicle_cap(0);
    let top = (horizon * production.min(shipping)).clamp(1, 8);
    MicroCase {
        quantity: r.gen_range(1..=top),
        lt_lower: r.gen_range(0..=horizon),
        horizon,
        params,
    }
}

/// Two suppliers, one item, a three-period horizon and allocation bounds that
/// admit at most ten demand-feasible splits.
pub fn tiny_bilevel(seed: u64) -> ProcurementInstance {
    let mut r = rng(seed ^ 0x7469_6e79_0000_0000);
    let demand = r.gen_range(4..=8u32);
    let mut q_min = vec![vec![0]; 2];
    let mut q_max = vec![vec![0]; 2];
    // Redraw the bands until some split meets demand exactly.
    loop {
        for i in 0..2 {
            let lo = r.gen_range(1..=3u32);
            let hi = r.gen_range(lo.max(demand.div_ceil(2))..=demand);
            q_min[i][0] = lo;
            q_max[i][0] = hi;
        }
        let single = (0..2).any(|i| (q_min[i][0]..=q_max[i][0]).contains(&demand));
        let both = (q_min[0][0] + q_min[1][0]..=q_max[0][0] + q_max[1][0]).contains(&demand);
        if single || both {
            break;
        }
    }
    let suppliers = (0..2)
        .map(|_| {
            let mut s = micro_supplier(&mut r);
            s.cap_ord = vec![f64::from(r.gen_range(3..=5u32)) * s.proc_time[0]];
            s.cap_ot = vec![f64::from(r.gen_range(1..=3u32)) * s.proc_time[0]];
            s.vehicle_count = 2;
            s.vehicle_cap[0] = s.vehicle_cap[0].max(2);
            s.store_cap[0] = s.store_cap[0].max(s.vehicle_cap[0]);
            s
        })
        .collect();
    ProcurementInstance {
        name: format!("tiny-{seed}"),
        buyer: BuyerParams {
            demand: vec![demand],
            due_window: (1, 2),
            q_min,
            q_max,
            delay_factor: r.gen_range(0.5..3.0),
            ordering_cost: vec![vec![r.gen_range(0.0..10.0)], vec![r.gen_range(0.0..10.0)]],
            weights: DEFAULT_WEIGHTS,
        },
        suppliers,
        horizon: 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_instance;
    use crate::oracle::feasible_splits;

    #[test]
    fn same_seed_same_file() {
        assert_eq!(generate_instance(3, 2, 7), generate_instance(3, 2, 7));
        assert_ne!(generate_instance(3, 2, 7), generate_instance(3, 2, 8));
    }

    #[test]
    fn generated_instances_validate_and_demand_is_in_range() {
        for seed in 0..1000 {
            let n = 1 + (seed % 5) as usize;
            let m = 1 + (seed % 3) as usize;
            let inst = generate_instance(n, m, seed).to_instance().unwrap();
            assert!(validate_instance(&inst).is_empty(), "seed {seed}");
            assert!(inst.buyer.demand.iter().all(|d| (300..=1000).contains(d)));
            assert!(inst.buyer.lt_lower() >= 1);
        }
    }

    #[test]
    fn micro_cases_stay_small() {
        for seed in 0..500 {
            let c = micro_case(seed);
            assert!(c.horizon <= 3 && c.quantity <= 8 && c.quantity >= 1);
            assert!(c.params.vehicle_count <= 2);
            assert!(c.params.ordinary_units(0, 1) <= 5);
            assert!(c.params.prod_cost_ot[0] >= c.params.prod_cost_ord[0]);
        }
    }

    #[test]
    fn tiny_instances_have_few_splits() {
        for seed in 0..200 {
            let inst = tiny_bilevel(seed);
            assert!(validate_instance(&inst).is_empty(), "seed {seed}");
            let bounds: Vec<_> = (0..2).map(|i| inst.buyer.bounds(i, 0)).collect();
            let n = feasible_splits(inst.buyer.demand[0], &bounds).len();
            assert!((1..=10).contains(&n), "seed {seed}: {n} splits");
        }
    }
}
