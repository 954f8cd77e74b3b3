//! Finite element solver for four-field linear thermo-poroelasticity.
//!
//! Unknowns are the displacement `u`, the pseudo-total pressure
//! `xi = -lambda div u + alpha p + beta T`, the fluid pressure `p` and the
//! temperature `T`, discretized with Taylor-Hood `(P_k, P_{k-1})` for
//! `(u, xi)` and `P_l` for `p` and `T`. Time stepping is backward Euler,
//! either monolithic or split into an elasticity and a reaction-diffusion
//! subproblem.

// Negated comparisons double as NaN guards; dense kernels index by position.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod assembly;
pub mod checks;
pub mod discretization;
pub mod error;
pub mod linalg;
pub mod mesh;
pub mod model;
pub mod scalar;
pub mod steppers;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Mesh = mesh::TriMesh<f64>;
pub type Params = model::ModelParams<f64>;
pub type Disc = assembly::Discretization<f64>;
pub type Forms = assembly::FormSet<f64>;
pub type StateF64 = steppers::State<f64>;
pub type Config = steppers::StepConfig<f64>;
pub type Errors = analysis::ErrorReport<f64>;
