//! Physical coefficients, closed-form solutions with their sources, and the
//! problem definitions driven by the steppers.

mod exact;
mod params;
mod problem;

pub use exact::{Example1, ExactSolution, Poly2, PolynomialSolution, ZeroSolution};
pub use params::{derive_lame, AssumptionMode, ModelParams, Spd2};
pub use problem::{
    exact_traction, initial_state, manufactured_sources, rd_coefficient_matrix, DomainSpec, Example2,
    ManufacturedProblem, Problem, SourceFreeProblem, SourceValues,
};
