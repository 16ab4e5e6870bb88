//! Solving `y' = Ay` over the p-adic numbers by the operator exponential series
//! `y(z) = Σ A^k y₀ z^k / k!`, with exact norm bookkeeping.
//!
//! All magnitudes (norms, radii, types) are carried as [`LogNorm`] values, exact
//! rational powers of `p`, so relations such as `σ(y₀; A) · r(y) = p^{-1/(p-1)}`
//! become identities between rationals.

pub mod analytic_space;
pub mod cauchy_solver;
pub mod error;
pub mod exp_type;
pub mod operators;
pub mod oracle;
pub mod padic_arith;
pub mod pde_ck;
pub mod spaces;

pub use error::{Error, Result};
pub use analytic_space::{AnalyticFunction, AnalyticSpace, MultiIndex};
pub use cauchy_solver::{build_solution, wellposedness_check, SeriesSolution, TailBound};
pub use exp_type::{estimate_type, norm_sequence, NormSequence, TypeEstimate, TypeMethod};
pub use operators::{DifferentialOperator, LinearOperator, MatrixOperator, OperatorSpec, SpaceElement};
pub use padic_arith::{LogNorm, PadicNumber, Prime, Valuation};
pub use pde_ck::{solve_pde, PdeProblem, PdeSolution};
pub use spaces::{BanachElement, Disk, Vector};
