//! Analytic building blocks: branch-fixed scalar flows, falling factorials, the basis
//! functions `g_j(z) lambda^{z-j}` and their generalized Vandermonde system.

mod functions;
mod vandermonde;

pub(crate) use functions::shifted_flow;
pub use functions::{
    branch_log, build_basis, eval_basis, g, scalar_flow, BasisDescriptor, BasisTerm,
};
pub use vandermonde::{invert_vandermonde, vandermonde_matrix, CoefficientTable};
