//! Numerical laboratory for the steady 1D convection-diffusion equation
//! `T_xx = Pe * T_x` with `T(a) = 0`, `T(b) = 1`.
//!
//! Seven weighted-residual finite element variants (SG, C, LS, GLS, CG,
//! CLS, CGLS) share one linear-element discretization and differ only in
//! their weight functions. Each is verified against the closed-form
//! solution; the sweep machinery reproduces the comparative
//! stability/accuracy study as CSV/JSON tables and SVG figures.
//!
//! Pipeline: [`mesh`] + [`quadrature`] feed [`assembly`], [`solver`]
//! factors the constrained system, [`analysis`] scores each case against
//! [`exact`], and [`output`]/[`plot`] emit the artifacts driven by [`cli`].

// `!(b > a)` style checks also reject NaN; `b <= a` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// indexed loops mirror the matrix algebra they implement
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod assembly;
pub mod cli;
pub mod error;
pub mod exact;
pub mod matrix;
pub mod mesh;
pub mod output;
pub mod plot;
pub mod quadrature;
pub mod solver;

pub use analysis::{
    absolute_relative_error, run_case, run_sweep, total_variation, CaseRecord, ErrorReport,
    SweepConfig, SweepResult, EXACT_FLOOR,
};
pub use assembly::{
    apply_dirichlet, assemble, collocation_row, element_matrix_galerkin,
    element_matrix_least_squares, stabilization_tau, CollocationRow, LinearSystem, MethodKind,
};
pub use error::FemvarError;
pub use exact::{ExactSolution, OdeResidual};
pub use matrix::DenseMatrix;
pub use mesh::{shape_grad_physical, shape_ref_grad, shape_value, LocalNode, Mesh1D};
pub use quadrature::QuadratureRule;
pub use solver::{lu_solve, rcond_estimate, SolveReport, RCOND_FLOOR};
