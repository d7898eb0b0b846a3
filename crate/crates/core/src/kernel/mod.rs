//! Exact LP, convex-hull membership, and Frank–Wolfe quadratic subproblems.

pub mod fw;
pub mod hull;
pub mod lp;
pub mod scalar;

pub use fw::{project_euclidean, solve_qp_fw, LinearOracle, QpResult, QuadraticSubproblem};
pub use hull::hull_membership;
pub use lp::{solve_lp, Direction, LinearProgram, LpSolution, LpStatus, Sense};
pub use scalar::{rat, ratio, Scalar};
