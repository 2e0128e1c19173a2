//! Newton-type iteration for under-determined systems `G(x) = 0`, `G: R^m -> R^n`
//! with `n <= m`.
//!
//! Each step projects the current iterate onto the zero set of the local
//! linearization, `x+ = x - H⁺ G(x)`, where `H` is a Newton-differential
//! selection at `x` and `H⁺ = Hᵀ(HHᵀ)⁻¹` is the pseudo-inverse of a full
//! row-rank matrix. The crate is organized as:
//!
//! * [`linalg`] -- dense matrices, Gram-Cholesky pseudo-inverse, affine projection.
//! * [`model`] -- the [`Problem`](model::Problem) abstraction and differential builders.
//! * [`problems`] -- seeded benchmark corpus (sigmoid system, polynomial systems, complementarity toy).
//! * [`solver`] -- the iteration itself and its trace.
//! * [`diagnostics`] -- Newton-differentiability scans and convergence-order fits.

pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod problems;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::{Matrix, RankReport, Vector};
pub use model::{BranchRule, Problem};
pub use problems::{BenchmarkId, Dims, Instance, Rng64};
pub use solver::{SolveConfig, SolveStatus, SolveTrace, StepRule};
