//! Browser bindings for the procurement optimizer. Every function takes and
//! returns JSON strings so the page needs no generated types.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use procurement::io::{generate_instance, parse_grid, sweep as run_sweep, InstanceFile};
use procurement::model::{ItemPlan, ProcurementInstance};
use procurement::planner::{Beam, SearchConfig, Subproblem};
use procurement::pso::{run, LowerSolver, SwarmConfig};

fn solver(name: &str, stride: u32) -> Result<LowerSolver, JsError> {
    let stride = stride.max(1);
    Ok(match name {
        "astar" => LowerSolver::AStar(SearchConfig {
            beam: Beam::Bounded(20),
            stride,
            expansion_limit: None,
        }),
        "greedy" => LowerSolver::greedy().with_stride(stride),
        "sa" => LowerSolver::annealing().with_stride(stride),
        other => return Err(JsError::new(&format!("unknown solver `{other}`"))),
    })
}

fn instance(json: &str) -> Result<ProcurementInstance, JsError> {
    let file = InstanceFile::from_json(json).map_err(|e| JsError::new(&e.to_string()))?;
    file.to_instance().map_err(|e| JsError::new(&e.to_string()))
}

fn swarm(particles: u32, iterations: u32, seed: u64) -> SwarmConfig {
    SwarmConfig {
        particles: particles.max(1) as usize,
        iterations: iterations.max(1) as usize,
        seed,
        ..SwarmConfig::default()
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

/// A random instance file.
#[wasm_bindgen]
pub fn generate(suppliers: u32, items: u32, seed: u64) -> Result<String, JsError> {
    if suppliers == 0 || items == 0 {
        return Err(JsError::new("need at least one supplier and one item"));
    }
    Ok(generate_instance(suppliers as usize, items as usize, seed).to_json())
}

#[derive(Serialize)]
struct SolveView {
    objective: Option<f64>,
    procurement: Option<f64>,
    shortage: Option<f64>,
    trace: Vec<Option<f64>>,
    allocation: Vec<Vec<u32>>,
    prices: Vec<Vec<Option<f64>>>,
    subproblem_solves: u64,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Runs the swarm and returns its trace, allocation and bid prices.
#[wasm_bindgen]
pub fn solve(instance_json: &str, solver_name: &str, stride: u32, particles: u32, iterations: u32, seed: u64) -> Result<String, JsError> {
    let inst = instance(instance_json)?;
    let report = run(&inst, &swarm(particles, iterations, seed), solver(solver_name, stride)?)
        .map_err(|e| JsError::new(&e.to_string()))?;
    let allocation = report.allocation.rows().to_vec();
    let prices = allocation
        .iter()
        .enumerate()
        .map(|(i, row)| {
            (0..row.len())
                .map(|j| report.plans.get(i).and_then(|p| p.get(j)).map(|p| p.price))
                .collect()
        })
        .collect();
    to_json(&SolveView {
        objective: finite(report.objective.total),
        procurement: finite(report.objective.procurement),
        shortage: finite(report.objective.shortage),
        trace: report.trace.iter().copied().map(finite).collect(),
        allocation,
        prices,
        subproblem_solves: report.subproblem_solves,
    })
}

/// The plan one supplier answers a single request with.
#[wasm_bindgen]
pub fn plan_request(instance_json: &str, supplier: u32, item: u32, quantity: u32, solver_name: &str, stride: u32) -> Result<String, JsError> {
    let inst = instance(instance_json)?;
    let (i, j) = (supplier as usize, item as usize);
    if i >= inst.supplier_count() || j >= inst.item_count() || quantity == 0 {
        return Err(JsError::new("no such request"));
    }
    let sub = Subproblem::new(&inst.suppliers[i], j, quantity, inst.horizon, inst.buyer.lt_lower());
    let plan: ItemPlan = solver(solver_name, stride)?
        .solve(i, &sub, 0)
        .map_err(|e| JsError::new(&e.to_string()))?;
    to_json(&plan)
}

/// Best objective at every `(w1, γ)` point of two `start:end:step` axes.
#[wasm_bindgen]
pub fn sweep(instance_json: &str, w1_axis: &str, gamma_axis: &str, particles: u32, iterations: u32, seed: u64) -> Result<String, JsError> {
    let inst = instance(instance_json)?;
    let w1s = parse_grid(w1_axis).map_err(|e| JsError::new(&e))?;
    let gammas = parse_grid(gamma_axis).map_err(|e| JsError::new(&e))?;
    if w1s.len() * gammas.len() > 400 {
        return Err(JsError::new("grid too large for the browser; use at most 400 points"));
    }
    let points = run_sweep(&inst, &w1s, &gammas, &swarm(particles, iterations, seed), solver("astar", 4)?)
        .map_err(|e| JsError::new(&e.to_string()))?;
    to_json(&points)
}
