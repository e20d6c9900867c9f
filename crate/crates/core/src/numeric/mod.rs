//! Complex polynomial system solving: total-degree homotopy continuation,
//! Newton refinement and squaring-up of overdetermined systems.

mod chart;
pub mod linalg;
mod poly;
mod scalar;
mod solve;
mod tracker;

pub use chart::Chart;
pub use poly::{ComplexPoly, PolySystem};
pub use scalar::{cabs, cx, to_c64, Dd, Real};
pub use solve::{
    refine, square_up, total_degree_solve, PathStats, Solution, SolutionSet, SquaredSystem, TrackerConfig,
};
pub use tracker::Refined;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("system is not square: {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("system contains a constant equation")]
    ConstantEquation,
    #[error("path failures exceeded budget: {failed} failed, {diverged} diverged of {tracked} tracked")]
    PathFailures { failed: usize, diverged: usize, tracked: usize },
    #[error("invalid tracker configuration: {0}")]
    InvalidConfig(String),
}
