use num_complex::Complex;

use crate::error::Result;
use crate::numeric::{Matrix, Real};

/// Anything that can produce `A^z` for complex `z`.
pub trait MatrixFlow<T: Real> {
    fn dim(&self) -> usize;
    fn evaluate(&self, z: Complex<T>) -> Result<Matrix<T>>;
}

/// Largest normalized residual of each flow axiom over a sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowAxiomReport<T> {
    /// `‖F(0) - I‖_max`
    pub identity: T,
    /// `‖F(1) - A‖_max / max(1, ‖A‖_max)`
    pub generator: T,
    /// `max ‖F(z) F(w) - F(z + w)‖_max / max(1, ‖F(z)‖_max ‖F(w)‖_max)`
    pub group_law: T,
    pub samples: usize,
}

impl<T: Real> FlowAxiomReport<T> {
    pub fn max_residual(&self) -> T {
        self.identity.max(self.generator).max(self.group_law)
    }
}

pub fn check_flow_axioms<T: Real, F: MatrixFlow<T> + ?Sized>(
    flow: &F,
    a: &Matrix<T>,
    samples: &[(Complex<T>, Complex<T>)],
) -> Result<FlowAxiomReport<T>> {
    let n = flow.dim();
    let identity =
        (&flow.evaluate(Complex::new(T::zero(), T::zero()))? - &Matrix::identity(n)).max_norm();
    let generator = (&flow.evaluate(Complex::new(T::one(), T::zero()))? - a).max_norm()
        / T::one().max(a.max_norm());
    let mut group_law = T::zero();
    for &(z, w) in samples {
        let fz = flow.evaluate(z)?;
        let fw = flow.evaluate(w)?;
        let fzw = flow.evaluate(z + w)?;
        let scale = T::one().max(fz.max_norm() * fw.max_norm());
        group_law = group_law.max((&(&fz * &fw) - &fzw).max_norm() / scale);
    }
    Ok(FlowAxiomReport {
        identity,
        generator,
        group_law,
        samples: samples.len(),
    })
}
