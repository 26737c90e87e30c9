use serde::{Deserialize, Serialize};

use crate::baselines::{anneal_subproblem, greedy_solve_subproblem, AnnealingConfig};
use crate::error::SolveError;
use crate::model::ItemPlan;
use crate::planner::{solve_subproblem, SearchConfig, Subproblem};

/// The supplier-side planner the swarm dispatches requests to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LowerSolver {
    AStar(SearchConfig),
    Greedy { stride: u32 },
    Annealing { config: AnnealingConfig, stride: u32 },
}

impl LowerSolver {
    pub fn astar() -> Self {
        Self::AStar(SearchConfig::default())
    }

    pub fn greedy() -> Self {
        Self::Greedy { stride: 1 }
    }

    pub fn annealing() -> Self {
        Self::Annealing {
            config: AnnealingConfig::default(),
            stride: 1,
        }
    }

    /// Same solver with production volumes enumerated in steps of `stride`.
    pub fn with_stride(self, stride: u32) -> Self {
        let stride = stride.max(1);
        match self {
            Self::AStar(cfg) => Self::AStar(SearchConfig { stride, ..cfg }),
            Self::Greedy { .. } => Self::Greedy { stride },
            Self::Annealing { config, .. } => Self::Annealing { config, stride },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::AStar(_) => "astar",
            Self::Greedy { .. } => "greedy",
            Self::Annealing { .. } => "sa",
        }
    }

    /// Plans one request. `seed` only matters for annealing, whose stream is
    /// further keyed by supplier, item and quantity.
    pub fn solve(&self, supplier: usize, sub: &Subproblem<'_>, seed: u64) -> Result<ItemPlan, SolveError> {
        match self {
            Self::AStar(cfg) => solve_subproblem(sub, cfg).map(|s| s.plan),
            Self::Greedy { stride } => greedy_solve_subproblem(sub, *stride).map(|s| s.plan),
            Self::Annealing { config, stride } => {
                anneal_subproblem(sub, supplier, *stride, config, seed).map(|s| s.solution.plan)
            }
        }
    }
}
