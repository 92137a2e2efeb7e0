//! Dense complex matrices, LU factorization and tolerance policy.

mod compensated;
mod lu;
mod matrix;
mod scalar;
mod tolerance;

pub(crate) use compensated::{residual, residual_transposed_vec};
pub use lu::{lu_factor, solve, LuFactorization};
pub use matrix::{max_norm, multiply, power_int, Matrix};
pub use scalar::Real;
pub(crate) use scalar::{is_finite, real, to_f64};
pub use tolerance::ToleranceConfig;
