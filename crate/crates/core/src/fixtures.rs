//! Small hand-sized parameter sets shared by unit tests.

use crate::model::SupplierParams;

pub fn supplier(items: usize) -> SupplierParams {
    SupplierParams {
        prod_cost_ord: vec![10.0; items],
        prod_cost_ot: vec![14.0; items],
        cap_ord: vec![4.0],
        cap_ot: vec![2.0],
        proc_time: vec![1.0; items],
        hold_cost: vec![1.0; items],
        hold_cost_interval: vec![0.5; items],
        setup_cost: vec![3.0; items],
        safety_stock: vec![0; items],
        vehicle_cap: vec![5; items],
        store_cap: vec![10; items],
        vehicle_count: 2,
        vehicle_fixed_cost: 5.0,
        vehicle_var_cost: 1.0,
        delay_factor: 0.5,
        profit_rate: 0.1,
    }
}
