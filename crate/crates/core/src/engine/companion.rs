//! The companion-matrix route: `mu(z) = C_Q^z c` and `A^z = sum_i mu_i(z) A^{-i}`.

use std::ops::Deref;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::annihilator::AnnihilatorPolynomial;
use crate::engine::flow::{check_relation, combine};
use crate::engine::{
    build_flow_with, negative_powers, FlowOptions, FlowRepresentation, MatrixFlow,
};
use crate::error::{FlowError, Result};
use crate::numeric::{Matrix, Real, ToleranceConfig};

/// Companion matrix of `Q`: first column `(c_{p-1}, ..., c_0)`, ones on the superdiagonal.
///
/// This is the matrix of multiplication by `A` on the basis `A^{-1}, ..., A^{-p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionMatrix<T>(Matrix<T>);

impl<T> CompanionMatrix<T> {
    pub fn into_inner(self) -> Matrix<T> {
        self.0
    }
}

impl<T> Deref for CompanionMatrix<T> {
    type Target = Matrix<T>;

    fn deref(&self) -> &Matrix<T> {
        &self.0
    }
}

pub fn companion_matrix<T: Real>(q: &AnnihilatorPolynomial<T>) -> CompanionMatrix<T> {
    let c = q.relation_vector();
    CompanionMatrix(Matrix::from_fn(q.degree(), |i, j| {
        if j == 0 {
            c[i]
        } else if j == i + 1 {
            Complex::one()
        } else {
            Complex::zero()
        }
    }))
}

/// `C_Q^z c` evaluator, with `C_Q^z` obtained from the Vandermonde route applied to `C_Q`.
///
/// `Q` is both the characteristic and the minimal polynomial of `C_Q`, so it is a valid
/// relation for it.
#[derive(Debug, Clone)]
pub struct CompanionMu<T> {
    companion_flow: FlowRepresentation<T>,
    c: Vec<Complex<T>>,
}

impl<T: Real> CompanionMu<T> {
    pub fn new(q: &AnnihilatorPolynomial<T>, opts: &FlowOptions<T>) -> Result<Self> {
        if q.coeffs()[0].is_zero() {
            return Err(FlowError::ZeroEigenvalue { magnitude: 0.0 });
        }
        let companion = companion_matrix(q);
        let companion_flow = build_flow_with(&companion, Some(q), opts)?;
        Ok(Self {
            companion_flow,
            c: q.relation_vector(),
        })
    }

    /// `C_Q^z c`. Applied to `c` directly: forming `C_Q^z` first loses digits to cancellation.
    pub fn eval(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        self.companion_flow.apply(z, &self.c)
    }

    /// The full matrix `C_Q^z`.
    pub fn companion_power(&self, z: Complex<T>) -> Result<Matrix<T>> {
        self.companion_flow.evaluate(z)
    }
}

/// The flow of `A` assembled from companion-matrix coefficients.
#[derive(Debug, Clone)]
pub struct CompanionFlow<T> {
    mu: CompanionMu<T>,
    neg_powers: Vec<Matrix<T>>,
}

impl<T: Real> CompanionFlow<T> {
    pub fn new(a: &Matrix<T>, q: &AnnihilatorPolynomial<T>, opts: &FlowOptions<T>) -> Result<Self> {
        opts.tol.validate()?;
        check_relation(a, q, &opts.tol)?;
        let mu = CompanionMu::new(q, opts)?;
        let neg_powers = negative_powers(a, q.degree(), &opts.tol)?;
        Ok(Self { mu, neg_powers })
    }

    pub fn mu(&self, z: Complex<T>) -> Result<Vec<Complex<T>>> {
        self.mu.eval(z)
    }

    pub fn evaluate(&self, z: Complex<T>) -> Result<Matrix<T>> {
        combine(&self.mu(z)?, &self.neg_powers)
    }
}

impl<T: Real> MatrixFlow<T> for CompanionFlow<T> {
    fn dim(&self) -> usize {
        self.neg_powers[0].dim()
    }

    fn evaluate(&self, z: Complex<T>) -> Result<Matrix<T>> {
        CompanionFlow::evaluate(self, z)
    }
}

pub fn companion_flow_mu<T: Real>(
    q: &AnnihilatorPolynomial<T>,
    z: Complex<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Vec<Complex<T>>> {
    CompanionMu::new(q, &FlowOptions::with_tolerances(*tol))?.eval(z)
}

pub fn evaluate_companion_flow<T: Real>(
    a: &Matrix<T>,
    q: &AnnihilatorPolynomial<T>,
    z: Complex<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Matrix<T>> {
    CompanionFlow::new(a, q, &FlowOptions::with_tolerances(*tol))?.evaluate(z)
}

/// `‖A <v, Ā> - <C v, Ā>‖_max` where `<v, Ā> = sum_i v_i A^{-i}`.
pub fn companion_action_check<T: Real>(
    a: &Matrix<T>,
    q: &AnnihilatorPolynomial<T>,
    coeff_vec: &[Complex<T>],
    tol: &ToleranceConfig<T>,
) -> Result<T> {
    let p = q.degree();
    if coeff_vec.len() != p {
        return Err(FlowError::DimensionMismatch {
            expected: p,
            found: coeff_vec.len(),
        });
    }
    let neg = negative_powers(a, p, tol)?;
    let lhs = a * &combine(coeff_vec, &neg)?;
    let rhs = combine(&companion_matrix(q).mul_vec(coeff_vec), &neg)?;
    Ok((&lhs - &rhs).max_norm())
}
