//! Series solutions of linear fractional differential equations in two
//! fractional indices.

mod ansatz;
mod classify;
mod closed_form;
mod problem;

pub use ansatz::{solve_by_ansatz, AnsatzSolution};
pub use classify::{classify, Differentiability, DifferentiabilityReport};
pub use closed_form::{example_rhs, linear_fde_warnings, solve_example_equation, solve_linear_fde};
pub use problem::{assemble_residual, FdeProblem, OperatorTerm};
