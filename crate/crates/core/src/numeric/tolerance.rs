use crate::error::{FlowError, Result};
use crate::numeric::Real;

/// Thresholds used by rank decisions, root finding, clustering and residual checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig<T> {
    /// Relative threshold for pivot and linear-dependence decisions.
    pub rank_tol: T,
    /// Step size at which the simultaneous root iteration stops.
    pub root_tol: T,
    /// Radius within which roots count as one eigenvalue.
    pub cluster_tol: T,
    /// Acceptable relative residual of matrix equations.
    pub residual_tol: T,
    /// Condition estimate above which results are flagged.
    pub cond_warn: T,
}

impl<T: Real> Default for ToleranceConfig<T> {
    fn default() -> Self {
        Self {
            rank_tol: T::lit(1e-10),
            root_tol: T::lit(1e-12),
            cluster_tol: T::lit(1e-7),
            residual_tol: T::lit(1e-9),
            cond_warn: T::lit(1e12),
        }
    }
}

impl<T: Real> ToleranceConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rank_tol", self.rank_tol),
            ("root_tol", self.root_tol),
            ("cluster_tol", self.cluster_tol),
            ("residual_tol", self.residual_tol),
            ("cond_warn", self.cond_warn),
        ];
        for (name, value) in fields {
            if !(value > T::zero() && value.is_finite()) {
                return Err(FlowError::InvalidTolerance(name));
            }
        }
        Ok(())
    }
}
