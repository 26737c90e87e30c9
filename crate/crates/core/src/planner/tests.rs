use proptest::prelude::*;

use super::*;
use crate::fixtures::supplier;
use crate::model::check_plan_feasible;

fn roomy() -> SupplierParams {
    let mut s = supplier(1);
    s.cap_ord = vec![2.0];
    s.cap_ot = vec![1.0];
    s.vehicle_cap = vec![10];
    s.store_cap = vec![20];
    s.vehicle_count = 2;
    s
}

#[test]
fn warehouse_order_needs_no_production() {
    let s = supplier(1);
    let sub = Subproblem::new(&s, 0, 5, 3, 1).with_opening_stock(10);
    assert!(sub.is_warehouse_order());
    let sol = solve_subproblem(&sub, &SearchConfig::default()).unwrap();
    assert!(sol.plan.is_warehouse_only());
    assert!(sol.plan.setup.iter().all(|&x| !x));
    assert_eq!(sol.plan.total_shipped(), 5);
    assert_eq!(sol.plan.closing_stock(), 5);
    assert!(check_plan_feasible(&sol.plan, &s, 5, 3).is_empty());
}

#[test]
fn production_branches_follow_capacity() {
    let s = roomy();
    let sub = Subproblem::new(&s, 0, 5, 4, 1);
    let kids = sub.successors(&sub.start(), 1);
    let volumes: Vec<_> = kids.iter().map(|(a, ..)| (a.ordinary, a.overtime)).collect();
    assert_eq!(volumes, vec![(0, 0), (1, 0), (2, 0), (2, 1)]);
}

#[test]
fn stride_keeps_the_largest_volume() {
    let mut s = roomy();
    s.cap_ord = vec![7.0];
    s.cap_ot = vec![0.0];
    let sub = Subproblem::new(&s, 0, 20, 4, 1);
    let kids = sub.successors(&sub.start(), 3);
    let volumes: Vec<_> = kids.iter().map(|(a, ..)| a.ordinary).collect();
    assert_eq!(volumes, vec![0, 3, 6, 7]);
}

#[test]
fn no_need_means_a_single_delivery_child() {
    let s = roomy();
    let sub = Subproblem::new(&s, 0, 3, 3, 1);
    let state = PlannerState {
        period: 1,
        inventory: 3,
        remaining: 3,
    };
    let kids = sub.successors(&state, 1);
    assert_eq!(kids.len(), 1);
    assert_eq!(kids[0].0.production(), 0);
    assert!(kids[0].0.shipment.total > 0);
}

#[test]
fn heuristic_is_zero_at_goal_and_infinite_past_the_horizon() {
    let s = roomy();
    let sub = Subproblem::new(&s, 0, 4, 3, 1);
    let goal = PlannerState {
        period: 2,
        inventory: 0,
        remaining: 0,
    };
    assert_eq!(heuristic_cost(&sub, &goal), 0.0);
    let late = PlannerState {
        period: 3,
        inventory: 0,
        remaining: 1,
    };
    assert!(heuristic_cost(&sub, &late).is_infinite());
    assert!(heuristic_cost(&sub, &sub.start()).is_finite());
}

#[test]
fn plan_covers_every_period() {
    let s = roomy();
    let sub = Subproblem::new(&s, 0, 6, 3, 1);
    let sol = solve_subproblem(&sub, &SearchConfig::exact()).unwrap();
    assert_eq!(sol.plan.horizon(), 3);
    assert_eq!(sol.plan.inventory.len(), 4);
    assert_eq!(sol.plan.total_produced(), 6);
    assert!((sol.cost - sol.plan.total_cost).abs() < 1e-9);
    assert!(check_plan_feasible(&sol.plan, &s, 6, 3).is_empty());
}

#[test]
fn early_completion_charges_the_idle_tail() {
    let mut s = roomy();
    s.safety_stock = vec![2];
    s.cap_ord = vec![10.0];
    let sub = Subproblem::new(&s, 0, 3, 4, 4);
    let sol = solve_subproblem(&sub, &SearchConfig::exact()).unwrap();
    assert_eq!(sol.plan.closing_stock(), 2);
    assert!((sol.cost - sol.plan.total_cost).abs() < 1e-9);
}

#[test]
fn zero_quantity_is_an_idle_plan() {
    let mut s = roomy();
    s.safety_stock = vec![1];
    let sub = Subproblem::new(&s, 0, 0, 2, 1);
    let sol = solve_subproblem(&sub, &SearchConfig::default()).unwrap();
    assert_eq!(sol.plan.total_shipped(), 0);
    assert!((sol.cost - sol.plan.total_cost).abs() < 1e-12);
}

#[test]
fn overlarge_order_is_infeasible() {
    let s = roomy();
    let sub = Subproblem::new(&s, 0, 10, 3, 1);
    let err = solve_subproblem(&sub, &SearchConfig::exact()).unwrap_err();
    assert!(matches!(err, SolveError::Infeasible(_)));
}

#[test]
fn expansion_limit_surfaces_as_budget_error() {
    let s = roomy();
    let sub = Subproblem::new(&s, 0, 8, 4, 1);
    let cfg = SearchConfig {
        expansion_limit: Some(1),
        ..SearchConfig::exact()
    };
    assert!(matches!(
        solve_subproblem(&sub, &cfg),
        Err(SolveError::BudgetExceeded { .. })
    ));
}

#[test]
fn expand_node_fills_costs() {
    let s = roomy();
    let sub = Subproblem::new(&s, 0, 5, 4, 1);
    let root = SearchNode {
        state: sub.start(),
        g: 0.0,
        h: heuristic_cost(&sub, &sub.start()),
        f: 0.0,
        action: None,
        parent: None,
        depth: 0,
    };
    let kids = expand_node(&sub, &root, 0, 1);
    assert_eq!(kids.len(), 4);
    for k in &kids {
        assert_eq!(k.f, k.g + k.h);
        assert_eq!(k.depth, 1);
        assert_eq!(k.parent, Some(0));
    }
}

fn small_supplier(
    caps: (u8, u8),
    vcap: u32,
    fleet: u32,
    ss: u32,
    costs: (f64, f64, f64, f64, f64),
) -> SupplierParams {
    let mut s = supplier(1);
    s.cap_ord = vec![f64::from(caps.0)];
    s.cap_ot = vec![f64::from(caps.1)];
    s.vehicle_cap = vec![vcap];
    s.store_cap = vec![vcap + ss + 2];
    s.vehicle_count = fleet;
    s.safety_stock = vec![ss];
    s.vehicle_fixed_cost = costs.0;
    s.vehicle_var_cost = costs.1;
    s.hold_cost = vec![costs.2];
    s.hold_cost_interval = vec![costs.3];
    s.delay_factor = costs.4;
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emitted_plans_are_feasible_and_beam_never_beats_exact(
        caps in (0u8..5, 0u8..4), vcap in 1u32..5, fleet in 1u32..3, ss in 0u32..3,
        costs in (0.0f64..10.0, 0.0f64..3.0, 0.0f64..2.0, 0.0f64..2.0, 0.0f64..2.0),
        q in 0u32..9, horizon in 1u32..4, lt in 0u32..3, beam in 1usize..6,
    ) {
        let s = small_supplier(caps, vcap, fleet, ss, costs);
        let sub = Subproblem::new(&s, 0, q, horizon, lt);
        let exact = solve_subproblem(&sub, &SearchConfig::exact());
        let narrow = solve_subproblem(&sub, &SearchConfig { beam: Beam::Bounded(beam), ..SearchConfig::default() });
        if let Ok(sol) = &exact {
            prop_assert!(check_plan_feasible(&sol.plan, &s, q, horizon).is_empty());
            prop_assert_eq!(sol.plan.closing_stock(), ss);
            prop_assert!((sol.cost - sol.plan.total_cost).abs() <= 1e-9 * sol.cost.abs().max(1.0));
        }
        if let Ok(sol) = &narrow {
            prop_assert!(check_plan_feasible(&sol.plan, &s, q, horizon).is_empty());
            let best = exact.as_ref().map(|e| e.cost);
            prop_assert!(best.is_ok(), "beam found a plan the exact search missed");
            prop_assert!(sol.cost >= best.unwrap() - 1e-9);
        }
    }

    #[test]
    fn solving_is_deterministic(q in 1u32..9, horizon in 1u32..4) {
        let s = roomy();
        let sub = Subproblem::new(&s, 0, q, horizon, 1);
        let a = solve_subproblem(&sub, &SearchConfig::default());
        let b = solve_subproblem(&sub, &SearchConfig::default());
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.plan, b.plan),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "outcomes differ"),
        }
    }
}
