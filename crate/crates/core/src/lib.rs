//! Complex flows `A^z` of invertible matrices, written as `A^z = sum_i mu_i(z) A^{-i}`
//! with analytic coefficient functions `mu_i` that depend only on a relation
//! `A^p = c_{p-1} A^{p-1} + ... + c_0 I`.
//!
//! Two routes compute the `mu_i`:
//!
//! * the direct route inverts the generalized Vandermonde matrix `(f_j(-i))` built from the
//!   functions `f(z) = g_j(z) lambda^{z-j}`, one per root `lambda` and `j` below its
//!   multiplicity ([`build_flow`]);
//! * the companion route evaluates `C_Q^z c` for the companion matrix `C_Q` of the relation
//!   ([`CompanionFlow`]).
//!
//! A third, independent construction via Jordan blocks ([`jordan_oracle`]) serves as ground
//! truth for matrices with known structure.
//!
//! Every routine is generic over the real base type (`f32` or `f64`) of its complex entries.
//! Default tolerances are tuned for `f64`.

// `!(x <= tol)` is deliberate: a NaN residual must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annihilator;
pub mod basis;
pub mod engine;
mod error;
pub mod numeric;
#[cfg(feature = "synth")]
pub mod synth;

pub use annihilator::{
    characteristic_polynomial, cluster_roots, find_roots, minimal_polynomial, validate_relation,
    AnnihilatorPolynomial, Cluster, RootSet, Spectrum,
};
pub use basis::{
    branch_log, build_basis, eval_basis, g, invert_vandermonde, scalar_flow, vandermonde_matrix,
    BasisDescriptor, BasisTerm, CoefficientTable,
};
pub use engine::{
    build_flow, build_flow_with, check_flow_axioms, companion_action_check, companion_flow_mu,
    companion_matrix, evaluate_companion_flow, evaluate_flow, extend_matrix, jordan_block_flow,
    jordan_blocks, jordan_oracle, mu_functions, negative_powers, spectrum_of, CompanionFlow,
    CompanionMatrix, CompanionMu, FlowAxiomReport, FlowOptions, FlowRepresentation, JordanBlock,
    MatrixFlow, MuFunctions,
};
pub use error::{FlowError, Result};
pub use num_complex::Complex;
pub use numeric::{
    lu_factor, max_norm, multiply, power_int, solve, LuFactorization, Matrix, Real, ToleranceConfig,
};

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type Relation64 = AnnihilatorPolynomial<f64>;
pub type Flow64 = FlowRepresentation<f64>;
pub type Tolerances64 = ToleranceConfig<f64>;
