//! Command-line front end for `cflow`: `pow`, `analyze`, `verify` and `formula`.
//!
//! Exit codes: 0 success, 1 verification failed, 2 bad input, 3 singular matrix or zero
//! eigenvalue, 4 root finding did not converge (or a value overflowed), 5 the relation does
//! not annihilate the matrix.

// `!(x <= tol)` is deliberate: a NaN residual must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
mod commands;
pub mod error;
pub mod io;
pub mod report;

pub use args::Cli;
pub use commands::{execute, run, VERIFY_THRESHOLD};
pub use error::CliError;
