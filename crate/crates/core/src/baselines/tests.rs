use proptest::prelude::*;

use super::*;
use crate::fixtures::supplier;
use crate::io::micro_case;
use crate::model::{check_plan_feasible, SupplierParams};
use crate::oracle::{brute_force_subproblem, EnumerationBudget};
use crate::planner::{solve_subproblem, SearchConfig, Subproblem};

fn long_horizon() -> SupplierParams {
    let mut s = supplier(1);
    s.cap_ord = vec![3.0];
    s.cap_ot = vec![2.0];
    s.hold_cost_interval = vec![0.2];
    s
}

#[test]
fn greedy_ships_the_order_and_never_beats_exact_search() {
    let s = long_horizon();
    let sub = Subproblem::new(&s, 0, 9, 5, 2);
    let greedy = greedy_solve_subproblem(&sub, 1).unwrap();
    let exact = solve_subproblem(&sub, &SearchConfig::exact()).unwrap();
    assert_eq!(greedy.plan.total_shipped(), 9);
    assert!(check_plan_feasible(&greedy.plan, &s, 9, 5).is_empty());
    assert!((greedy.cost - greedy.plan.total_cost).abs() < 1e-6);
    assert!(greedy.cost >= exact.cost - 1e-9);
}

#[test]
fn greedy_reports_a_dead_end() {
    let mut s = supplier(1);
    s.cap_ord = vec![1.0];
    s.cap_ot = vec![0.0];
    let sub = Subproblem::new(&s, 0, 9, 3, 1);
    assert!(matches!(
        greedy_solve_subproblem(&sub, 1),
        Err(crate::SolveError::Infeasible(_))
    ));
}

#[test]
fn warehouse_order_is_served_from_stock() {
    let s = supplier(1);
    let sub = Subproblem::new(&s, 0, 4, 3, 1).with_opening_stock(8);
    let g = greedy_solve_subproblem(&sub, 1).unwrap();
    assert!(g.plan.is_warehouse_only());
    let a = anneal_subproblem(&sub, 0, 1, &AnnealingConfig::default(), 3).unwrap();
    assert_eq!(a.solution.plan, g.plan);
    assert_eq!(a.stats.proposed, 0);
}

#[test]
fn annealing_is_reproducible_and_keeps_the_best() {
    let s = long_horizon();
    let sub = Subproblem::new(&s, 0, 9, 5, 2);
    let cfg = AnnealingConfig::default();
    let a = anneal_subproblem(&sub, 1, 1, &cfg, 42).unwrap();
    let b = anneal_subproblem(&sub, 1, 1, &cfg, 42).unwrap();
    assert_eq!(a.solution.plan, b.solution.plan);
    assert_eq!(a.stats, b.stats);
    assert!(a.solution.cost <= a.stats.start_cost + 1e-9);
    assert!((a.solution.cost - a.solution.plan.total_cost).abs() < 1e-6);
    assert!(check_plan_feasible(&a.solution.plan, &s, 9, 5).is_empty());
    assert_eq!(a.stats.proposed, cfg.moves);
    let expected = a.stats.initial_temperature * cfg.cooling.powi(((cfg.moves - 1) / 20) as i32);
    assert!((a.stats.final_temperature - expected).abs() < 1e-9);
}

#[test]
fn annealing_climbs_uphill_only_when_warm() {
    let s = long_horizon();
    let sub = Subproblem::new(&s, 0, 9, 5, 2);
    let warm = anneal_subproblem(&sub, 0, 1, &AnnealingConfig::default(), 5).unwrap();
    assert!(warm.stats.initial_temperature > 0.0);
    assert!(warm.stats.accepted_worse > 0);
    let cold = AnnealingConfig {
        initial_temperature: Some(0.0),
        ..AnnealingConfig::default()
    };
    let descent = anneal_subproblem(&sub, 0, 1, &cold, 5).unwrap();
    assert_eq!(descent.stats.accepted_worse, 0);
}

#[test]
fn deviation_is_relative_to_the_best() {
    assert_eq!(deviation(100.0, 100.0), Some(0.0));
    assert!((deviation(110.0, 100.0).unwrap() - 0.10).abs() < 1e-12);
    assert_eq!(deviation(5.0, 0.0), None);
    assert_eq!(deviation(5.0, -2.0), None);
}

#[test]
fn zero_moves_return_the_greedy_plan() {
    let s = long_horizon();
    let sub = Subproblem::new(&s, 0, 9, 5, 2);
    let cfg = AnnealingConfig {
        moves: 0,
        ..AnnealingConfig::default()
    };
    let a = anneal_subproblem(&sub, 0, 1, &cfg, 1).unwrap();
    assert_eq!(a.solution.plan, greedy_solve_subproblem(&sub, 1).unwrap().plan);
}

#[test]
fn a_single_run_is_its_own_best() {
    let inst = crate::io::tiny_bilevel(2);
    let swarm = crate::pso::SwarmConfig {
        particles: 4,
        iterations: 3,
        ..Default::default()
    };
    let rows = compare_suite(&[inst], &[crate::pso::LowerSolver::astar()], 1, &swarm, 9).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].algorithms[0].mean_deviation, Some(0.0));
    assert_eq!(suite_means(&rows, &["astar"]), vec![Some(0.0)]);
}

#[test]
fn deviations_are_measured_against_the_joint_best() {
    use crate::pso::LowerSolver;
    let problems: Vec<_> = (0..2).map(crate::io::tiny_bilevel).collect();
    let swarm = crate::pso::SwarmConfig {
        particles: 5,
        iterations: 4,
        ..Default::default()
    };
    let algs = [LowerSolver::astar(), LowerSolver::greedy(), LowerSolver::annealing()];
    let rows = compare_suite(&problems, &algs, 2, &swarm, 1).unwrap();
    for row in &rows {
        assert!(row.algorithms.iter().any(|a| a.best_objective == row.best_found));
        for a in &row.algorithms {
            assert!(a.mean_deviation.unwrap() >= 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deviation_ignores_scale(v in 1.0..1e6f64, b in 1.0..1e6f64, k in 0.01..100.0f64) {
        let d = deviation(v, b).unwrap();
        prop_assert!((deviation(k * v, k * b).unwrap() - d).abs() <= 1e-9 * d.abs().max(1.0));
    }

    #[test]
    fn baselines_are_feasible_and_bounded_by_the_optimum(seed in 0u64..100_000) {
        let c = micro_case(seed);
        let mut budget = EnumerationBudget::default();
        let Ok(opt) = brute_force_subproblem(&c.params, 0, c.quantity, c.horizon, c.lt_lower, &mut budget) else {
            return Ok(());
        };
        let sub = Subproblem::new(&c.params, 0, c.quantity, c.horizon, c.lt_lower);
        if let Ok(g) = greedy_solve_subproblem(&sub, 1) {
            prop_assert!(check_plan_feasible(&g.plan, &c.params, c.quantity, c.horizon).is_empty());
            prop_assert!(g.cost >= opt.cost - 1e-6);
            let a = anneal_subproblem(&sub, 0, 1, &AnnealingConfig::default(), seed).unwrap();
            prop_assert!(check_plan_feasible(&a.solution.plan, &c.params, c.quantity, c.horizon).is_empty());
            prop_assert!(a.solution.cost <= g.cost + 1e-9);
            prop_assert!(a.solution.cost >= opt.cost - 1e-6);
        }
    }
}
