//! Assembling and checking complete flows `z -> A^z`.

mod axioms;
mod companion;
mod flow;
mod jordan;

pub use axioms::{check_flow_axioms, FlowAxiomReport, MatrixFlow};
pub use companion::{
    companion_action_check, companion_flow_mu, companion_matrix, evaluate_companion_flow,
    CompanionFlow, CompanionMatrix, CompanionMu,
};
pub use flow::{
    build_flow, build_flow_with, evaluate_flow, mu_functions, negative_powers, spectrum_of,
    FlowOptions, FlowRepresentation, MuFunctions,
};
pub use jordan::{extend_matrix, jordan_block_flow, jordan_blocks, jordan_oracle, JordanBlock};
