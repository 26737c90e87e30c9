//! Bi-level procurement optimization.
//!
//! A buyer splits item demand across suppliers with a particle swarm; every
//! supplier answers each request with a production and delivery plan found by
//! A* search, and prices it. Greedy and simulated-annealing planners share the
//! same outer loop, and brute-force enumerators certify the planners on small
//! instances.

pub mod audit;
pub mod baselines;
pub mod cli;
pub mod delivery;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod planner;
pub mod pso;
pub mod rng;

#[cfg(test)]
mod fixtures;

pub use error::{ModelError, SolveError};
