//! Exact weighted soft-thresholding under a sum-to-one constraint.
//!
//! The core operation solves
//!
//! `minimize (1/2)·||x - y||^2 + Σ_i d_i·|x_i|  subject to  Σ_i x_i = 1`
//!
//! exactly in `O(n log n)` by locating the constraint's Lagrange multiplier
//! with a single sweep over the sorted values `y_i ± d_i`. On top of it sit
//! two independent slower solvers plus a KKT checker for cross-validation
//! ([`oracle`]), and an accelerated proximal-gradient solver for local
//! coordinate coding that uses the projection as its proximal step
//! ([`lcc`]).
//!
//! ```
//! use sumprox::{solve_projection, ProjectionProblem, SolverConfig};
//!
//! let problem = ProjectionProblem::new(
//!     vec![0.9, 0.6, 0.1],
//!     vec![0.1, 0.1, 0.1],
//! )?;
//! let solution = solve_projection(&problem, &SolverConfig::default())?;
//! assert!((solution.multiplier - 0.15).abs() < 1e-12);
//! assert!((solution.x[0] - 0.65).abs() < 1e-12);
//! # Ok::<(), sumprox::Error>(())
//! ```
//!
//! The `examples/` directory exercises each capability end to end:
//!
//! - `project_vector`: one projection solve with its optimality certificate.
//! - `oracle_cross_check`: the fast solver against both oracles on random
//!   instances.
//! - `lcc_encoding`: coding a sample against landmarks, with the locality
//!   trade-off swept over several values.
//! - `scaling_benchmark`: timing table across instance sizes.
//!
//! The `sumprox` binary wraps the same functionality as subcommands
//! (`project`, `lcc`, `verify`, `bench`) over CSV/JSON files.

pub mod cli;
mod error;
pub mod io;
pub mod lcc;
pub mod matrix;
pub mod oracle;
pub mod projection;
mod util;

pub use error::{Error, Result};
pub use lcc::{
    lcc_objective, locality_weights, solve_lcc, FistaConfig, LccProblem, LccSolution,
};
pub use matrix::Matrix;
pub use oracle::{
    bisection_solve, compare_solvers, enumeration_solve, kkt_residual, random_problem,
    KktReport, OracleComparison,
};
pub use projection::{
    recover_primal, shifted_bounds, solve_projection, sum_residual, BreakpointBounds,
    ProjectionProblem, ProjectionSolution, SolverConfig,
};
