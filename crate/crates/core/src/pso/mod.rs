//! The buyer's particle swarm.
//!
//! A particle is a real-valued shadow of the allocation matrix. Each
//! iteration moves it with inertia and pulls towards its personal best and
//! the swarm best, floors it, repairs the column sums back to demand, and
//! prices the result by dispatching every positive `q_ij` to the supplier
//! planner.

mod lower;
mod swarm;


pub use lower::LowerSolver;
pub use swarm::{run, Evaluator, SolveReport};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::model::{AllocationMatrix, BuyerParams};

/// Swarm settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwarmConfig {
    pub particles: usize,
    pub iterations: usize,
    pub c1: f64,
    pub c2: f64,
    pub w_min: f64,
    pub w_max: f64,
    /// Velocity bound as a fraction of `Q_max − Q_min`.
    pub velocity_coeff: f64,
    /// Offset below `Q_min` that stands in for an inactive element.
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        Self {
            particles: 30,
            iterations: 100,
            c1: 2.0,
            c2: 2.0,
            w_min: 0.2,
            w_max: 0.9,
            velocity_coeff: 0.2,
            epsilon: 1.0,
            seed: 0,
        }
    }
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        let mut bad = Vec::new();
        if self.particles == 0 {
            bad.push("particles must be positive");
        }
        if self.iterations == 0 {
            bad.push("iterations must be positive");
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            bad.push("learning factors must be positive");
        }
        if !(self.w_min > 0.0 && self.w_min <= self.w_max) {
            bad.push("inertia needs 0 < w_min <= w_max");
        }
        if !(self.velocity_coeff > 0.0) {
            bad.push("velocity coefficient must be positive");
        }
        if !(self.epsilon > 0.0) {
            bad.push("epsilon must be positive");
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(SolveError::Rejected(bad.join("; ")))
        }
    }
}

/// Inertia weight at iteration `iter`, falling linearly from `w_max` at 0 to
/// `w_min` at `cfg.iterations`.
pub fn inertia(iter: usize, cfg: &SwarmConfig) -> f64 {
    if iter >= cfg.iterations {
        return cfg.w_min;
    }
    cfg.w_max - (cfg.w_max - cfg.w_min) * iter as f64 / cfg.iterations as f64
}

/// A row-major `[supplier][item]` matrix of reals.
pub type Matrix = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Matrix,
    pub velocity: Matrix,
    pub best_position: Matrix,
    pub best_value: f64,
    /// The repaired allocation behind `position`.
    pub allocation: AllocationMatrix,
}

/// Per-element velocity bound `v_max`; `v_min = −v_max`.
pub fn velocity_limits(buyer: &BuyerParams, cfg: &SwarmConfig) -> Matrix {
    buyer
        .q_min
        .iter()
        .zip(&buyer.q_max)
        .map(|(lo, hi)| {
            lo.iter()
                .zip(hi)
                .map(|(&l, &h)| cfg.velocity_coeff * f64::from(h.saturating_sub(l)))
                .collect()
        })
        .collect()
}

/// Random allocation: for each item, suppliers are drawn in random order and
/// given a uniform quantity in `[Q_min, min(Q_max, remaining)]` until demand
/// is met; a final repair closes any gap the draws left.
pub fn random_allocation(buyer: &BuyerParams, rng: &mut impl Rng) -> Result<AllocationMatrix, SolveError> {
    const ATTEMPTS: usize = 100;
    let n = buyer.q_min.len();
    let m = buyer.demand.len();
    for _ in 0..ATTEMPTS {
        let mut alloc = AllocationMatrix::zeros(n, m);
        for (j, &d) in buyer.demand.iter().enumerate() {
            let mut order: Vec<usize> = (0..n).collect();
            let mut left = d;
            while left > 0 && !order.is_empty() {
                let i = order.swap_remove(rng.gen_range(0..order.len()));
                let (lo, hi) = buyer.bounds(i, j);
                let top = hi.min(left);
                if lo.max(1) <= top {
                    let q = rng.gen_range(lo.max(1)..=top);
                    alloc.set(i, j, q);
                    left -= q;
                }
            }
        }
        if let Some(fixed) = repair_allocation(alloc, buyer, rng) {
            return Ok(fixed);
        }
    }
    Err(SolveError::Rejected(format!(
        "no demand-feasible allocation found in {ATTEMPTS} random attempts"
    )))
}

/// Floors a shadow position into an allocation: values below `Q_min` become
/// zero and values above `Q_max` are capped.
pub fn dispatch_position(position: &Matrix, buyer: &BuyerParams) -> AllocationMatrix {
    let rows = position
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| {
                    let (lo, hi) = buyer.bounds(i, j);
                    let f = x.floor();
                    if f < f64::from(lo.max(1)) {
                        0
                    } else if f >= f64::from(hi) {
                        hi
                    } else {
                        f as u32
                    }
                })
                .collect()
        })
        .collect();
    AllocationMatrix::from_rows(rows)
}

/// Adds or removes single units at random suppliers until every column sums
/// to its demand. Incrementing a zero jumps to `Q_min`; decrementing `Q_min`
/// drops to zero. Entries outside their band are first snapped as in
/// [`dispatch_position`]. `None` when no move is available or the step
/// budget runs out.
pub fn repair_allocation(
    mut alloc: AllocationMatrix,
    buyer: &BuyerParams,
    rng: &mut impl Rng,
) -> Option<AllocationMatrix> {
    let n = alloc.supplier_count();
    for i in 0..n {
        for j in 0..buyer.demand.len() {
            let (lo, hi) = buyer.bounds(i, j);
            let q = alloc.get(i, j);
            if q > 0 && q < lo.max(1) {
                alloc.set(i, j, 0);
            } else if q > hi {
                alloc.set(i, j, hi);
            }
        }
    }
    for (j, &d) in buyer.demand.iter().enumerate() {
        let d = i64::from(d);
        let budget = 4 * d + 64 * n as i64;
        let mut steps = 0;
        loop {
            let gap = d - alloc.column_sum(j) as i64;
            if gap == 0 {
                break;
            }
            steps += 1;
            if steps > budget {
                return None;
            }
            let moves: Vec<(usize, u32)> = (0..n)
                .filter_map(|i| {
                    let (lo, hi) = buyer.bounds(i, j);
                    let lo = lo.max(1);
                    let q = alloc.get(i, j);
                    let next = if gap > 0 {
                        match q {
                            0 if lo <= hi => lo,
                            q if q > 0 && q < hi => q + 1,
                            _ => return None,
                        }
                    } else {
                        match q {
                            0 => return None,
                            q if q == lo => 0,
                            q => q - 1,
                        }
                    };
                    Some((i, next))
                })
                .collect();
            if moves.is_empty() {
                return None;
            }
            // Prefer moves that do not overshoot the gap.
            let fitting: Vec<(usize, u32)> = moves
                .iter()
                .copied()
                .filter(|&(i, next)| {
                    let delta = i64::from(next) - i64::from(alloc.get(i, j));
                    delta.abs() <= gap.abs()
                })
                .collect();
            let pool = if fitting.is_empty() { &moves } else { &fitting };
            let (i, next) = pool[rng.gen_range(0..pool.len())];
            alloc.set(i, j, next);
        }
    }
    alloc.is_demand_feasible(buyer).then_some(alloc)
}

/// Shadow position of a repaired allocation: active elements carry the
/// fractional part of `previous`, inactive ones sit at `Q_min − ε`.
pub fn shadow_position(alloc: &AllocationMatrix, previous: Option<&Matrix>, buyer: &BuyerParams, epsilon: f64) -> Matrix {
    (0..alloc.supplier_count())
        .map(|i| {
            (0..alloc.item_count())
                .map(|j| {
                    let q = alloc.get(i, j);
                    if q == 0 {
                        f64::from(buyer.q_min[i][j]) - epsilon
                    } else {
                        let frac = previous.map_or(0.0, |p| p[i][j] - p[i][j].floor());
                        f64::from(q) + frac
                    }
                })
                .collect()
        })
        .collect()
}

/// `v ← w·v + c1·r1·(pbest − x) + c2·r2·(gbest − x)`, clamped to
/// `[−v_max, v_max]` per element. `r1` and `r2` are drawn per element.
pub fn update_velocity(
    particle: &Particle,
    global_best: &Matrix,
    w: f64,
    limits: &Matrix,
    cfg: &SwarmConfig,
    rng: &mut impl Rng,
) -> Matrix {
    particle
        .velocity
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let x = particle.position[i][j];
                    let r1: f64 = rng.gen();
                    let r2: f64 = rng.gen();
                    let raw = w * v
                        + cfg.c1 * r1 * (particle.best_position[i][j] - x)
                        + cfg.c2 * r2 * (global_best[i][j] - x);
                    raw.clamp(-limits[i][j], limits[i][j])
                })
                .collect()
        })
        .collect()
}

/// `x ← x + v`.
pub fn update_position(position: &Matrix, velocity: &Matrix) -> Matrix {
    position
        .iter()
        .zip(velocity)
        .map(|(x, v)| x.iter().zip(v).map(|(a, b)| a + b).collect())
        .collect()
}
