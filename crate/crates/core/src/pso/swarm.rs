use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{
    dispatch_position, inertia, random_allocation, repair_allocation, shadow_position,
    update_position, update_velocity, velocity_limits, LowerSolver, Matrix, Particle,
    SwarmConfig,
};
use crate::error::SolveError;
use crate::model::{
    buyer_objective, AllocationMatrix, ItemPlan, ObjectiveValue, ProcurementInstance,
    SupplierPlan,
};
use crate::planner::Subproblem;
use crate::rng::substream;

type Key = (usize, usize, u32);

/// Prices allocations, remembering every `(supplier, item, q)` it has
/// planned. Solver results are pure functions of the key, so the cache never
/// changes an answer.
pub struct Evaluator<'a> {
    inst: &'a ProcurementInstance,
    solver: LowerSolver,
    seed: u64,
    cache: HashMap<Key, Option<ItemPlan>>,
    pub solves: u64,
    pub lookups: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(inst: &'a ProcurementInstance, solver: LowerSolver, seed: u64) -> Self {
        Self {
            inst,
            solver,
            seed,
            cache: HashMap::new(),
            solves: 0,
            lookups: 0,
        }
    }

    fn solve_key(inst: &ProcurementInstance, solver: &LowerSolver, seed: u64, key: Key) -> Result<Option<ItemPlan>, SolveError> {
        let (i, j, q) = key;
        let sub = Subproblem::new(&inst.suppliers[i], j, q, inst.horizon, inst.buyer.lt_lower());
        match solver.solve(i, &sub, seed) {
            Ok(plan) => Ok(Some(plan)),
            Err(SolveError::Infeasible(_) | SolveError::BudgetExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Plans every request of `allocs` that is not cached yet, in parallel
    /// when the `parallel` feature is on.
    pub fn prepare(&mut self, allocs: &[&AllocationMatrix]) -> Result<(), SolveError> {
        let mut missing = BTreeSet::new();
        for alloc in allocs {
            for (i, row) in alloc.rows().iter().enumerate() {
                for (j, &q) in row.iter().enumerate() {
                    if q > 0 && !self.cache.contains_key(&(i, j, q)) {
                        missing.insert((i, j, q));
                    }
                }
            }
        }
        let keys: Vec<Key> = missing.into_iter().collect();
        let (inst, solver, seed) = (self.inst, self.solver, self.seed);
        #[cfg(feature = "parallel")]
        let solved: Vec<Result<Option<ItemPlan>, SolveError>> = {
            use rayon::prelude::*;
            keys.par_iter()
                .map(|&k| Self::solve_key(inst, &solver, seed, k))
                .collect()
        };
        #[cfg(not(feature = "parallel"))]
        let solved: Vec<Result<Option<ItemPlan>, SolveError>> = keys
            .iter()
            .map(|&k| Self::solve_key(inst, &solver, seed, k))
            .collect();
        self.solves += keys.len() as u64;
        for (k, r) in keys.into_iter().zip(solved) {
            self.cache.insert(k, r?);
        }
        Ok(())
    }

    /// Buyer objective of a demand-feasible allocation; infinite when any
    /// request has no plan.
    pub fn evaluate(&mut self, alloc: &AllocationMatrix) -> Result<(ObjectiveValue, Vec<SupplierPlan>), SolveError> {
        self.prepare(&[alloc])?;
        let mut plans = vec![SupplierPlan::default(); alloc.supplier_count()];
        for (i, row) in alloc.rows().iter().enumerate() {
            for (j, &q) in row.iter().enumerate() {
                if q == 0 {
                    continue;
                }
                self.lookups += 1;
                match &self.cache[&(i, j, q)] {
                    Some(plan) => plans[i].insert(plan.clone()),
                    None => return Ok((ObjectiveValue::infeasible(), Vec::new())),
                }
            }
        }
        let value = buyer_objective(alloc, &plans, &self.inst.buyer)?;
        Ok((value, plans))
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }
}

/// Outcome of one swarm run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance: String,
    pub solver: String,
    pub seed: u64,
    pub config: SwarmConfig,
    pub allocation: AllocationMatrix,
    pub objective: ObjectiveValue,
    pub plans: Vec<SupplierPlan>,
    /// Best objective after initialization and after every iteration.
    pub trace: Vec<f64>,
    pub subproblem_solves: u64,
    /// Largest `|v| − v_max` over every velocity update; never positive
    /// while the clamp holds.
    pub velocity_overshoot: f64,
    pub wall_seconds: f64,
}

impl SolveReport {
    pub fn is_feasible(&self) -> bool {
        self.objective.is_feasible()
    }
}

#[cfg(not(target_arch = "wasm32"))]
fn clock() -> impl FnOnce() -> f64 {
    let start = std::time::Instant::now();
    move || start.elapsed().as_secs_f64()
}

#[cfg(target_arch = "wasm32")]
fn clock() -> impl FnOnce() -> f64 {
    || 0.0
}

struct Best {
    position: Matrix,
    allocation: AllocationMatrix,
    value: ObjectiveValue,
    plans: Vec<SupplierPlan>,
}

/// Prices every particle and applies the strict-improvement updates of the
/// personal and swarm bests.
fn score(swarm: &mut [Particle], eval: &mut Evaluator<'_>, best: &mut Best) -> Result<(), SolveError> {
    let allocs: Vec<&AllocationMatrix> = swarm.iter().map(|p| &p.allocation).collect();
    eval.prepare(&allocs)?;
    for p in swarm.iter_mut() {
        let (value, plans) = eval.evaluate(&p.allocation)?;
        if value.total < p.best_value {
            p.best_value = value.total;
            p.best_position = p.position.clone();
        }
        if value.total < best.value.total {
            best.value = value;
            best.position = p.position.clone();
            best.allocation = p.allocation.clone();
            best.plans = plans;
        }
    }
    Ok(())
}

/// Runs the swarm to its iteration cap and returns the best allocation seen.
///
/// Every random draw of particle `k` in iteration `t` comes from the
/// substream `(seed, t, k)`, so results do not depend on evaluation order.
pub fn run(inst: &ProcurementInstance, cfg: &SwarmConfig, solver: LowerSolver) -> Result<SolveReport, SolveError> {
    cfg.validate()?;
    let elapsed = clock();
    let buyer = &inst.buyer;
    let limits = velocity_limits(buyer, cfg);
    let mut eval = Evaluator::new(inst, solver, cfg.seed);

    let mut swarm: Vec<Particle> = Vec::with_capacity(cfg.particles);
    for k in 0..cfg.particles {
        let mut rng = substream(cfg.seed, &[0, k as u64]);
        let allocation = random_allocation(buyer, &mut rng)?;
        let position = shadow_position(&allocation, None, buyer, cfg.epsilon);
        let zeros = position.iter().map(|r| vec![0.0; r.len()]).collect();
        swarm.push(Particle {
            best_position: position.clone(),
            position,
            velocity: zeros,
            best_value: f64::INFINITY,
            allocation,
        });
    }

    let mut best = Best {
        position: swarm[0].position.clone(),
        allocation: swarm[0].allocation.clone(),
        value: ObjectiveValue::infeasible(),
        plans: Vec::new(),
    };
    let mut trace = Vec::with_capacity(cfg.iterations + 1);
    score(&mut swarm, &mut eval, &mut best)?;
    trace.push(best.value.total);

    let mut overshoot = f64::NEG_INFINITY;
    for iter in 1..=cfg.iterations {
        let w = inertia(iter, cfg);
        for (k, p) in swarm.iter_mut().enumerate() {
            let mut rng = substream(cfg.seed, &[iter as u64, k as u64]);
            p.velocity = update_velocity(p, &best.position, w, &limits, cfg, &mut rng);
            for (vr, lr) in p.velocity.iter().zip(&limits) {
                for (v, l) in vr.iter().zip(lr) {
                    overshoot = overshoot.max(v.abs() - l);
                }
            }
            let moved = update_position(&p.position, &p.velocity);
            let floored = dispatch_position(&moved, buyer);
            let allocation = match repair_allocation(floored, buyer, &mut rng) {
                Some(a) => a,
                None => {
                    let a = random_allocation(buyer, &mut rng)?;
                    p.velocity.iter_mut().flatten().for_each(|v| *v = 0.0);
                    p.position = shadow_position(&a, None, buyer, cfg.epsilon);
                    p.allocation = a;
                    continue;
                }
            };
            p.position = shadow_position(&allocation, Some(&moved), buyer, cfg.epsilon);
            p.allocation = allocation;
        }
        score(&mut swarm, &mut eval, &mut best)?;
        trace.push(best.value.total);
    }

    Ok(SolveReport {
        instance: inst.name.clone(),
        solver: solver.name().to_string(),
        seed: cfg.seed,
        config: *cfg,
        allocation: best.allocation,
        objective: best.value,
        plans: best.plans,
        trace,
        subproblem_solves: eval.solves,
        velocity_overshoot: overshoot,
        wall_seconds: elapsed(),
    })
}
