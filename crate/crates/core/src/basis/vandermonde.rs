use num_complex::Complex;
use num_traits::One;

use crate::basis::BasisDescriptor;
use crate::error::{FlowError, Result};
use crate::numeric::{
    lu_factor, residual, residual_transposed_vec, LuFactorization, Matrix, Real, ToleranceConfig,
};

const REFINE_STEPS: usize = 2;

/// Inverse of the generalized Vandermonde matrix of a basis.
///
/// `inverse = B^{-1}` where `B[i][j] = f_j(-(i+1))`. Since the coefficient functions must
/// satisfy `mu_i(-k) = delta_ik`, the coefficient of `f_j` in `mu_i` is `inverse[j][i]`;
/// [`CoefficientTable::e`] returns it with that index order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    inverse: Matrix<T>,
    condition_estimate: T,
    ill_conditioned: bool,
    b: Matrix<T>,
    col_scale: Vec<T>,
    /// Factorization of `B diag(col_scale)`.
    lu: LuFactorization<T>,
}

impl<T: Real> CoefficientTable<T> {
    /// `B^{-1}` as computed.
    pub fn inverse(&self) -> &Matrix<T> {
        &self.inverse
    }

    /// `e_ij`: coefficient of `f_j` in `mu_i` (0-based indices).
    pub fn e(&self, i: usize, j: usize) -> Complex<T> {
        self.inverse[(j, i)]
    }

    /// The table `(e_ij)` with rows indexed by `mu_i`.
    pub fn table(&self) -> Matrix<T> {
        self.inverse.transpose()
    }

    /// `mu_i = sum_j e_ij f_j` given the basis values `f`.
    ///
    /// Computed as the refined solution of `B^T mu = f` rather than by multiplying with the
    /// table: the matrix flow amplifies any residual in that system.
    pub fn mu(&self, f: &[Complex<T>]) -> Vec<Complex<T>> {
        let scaled_solve = |rhs: &[Complex<T>]| {
            let d: Vec<Complex<T>> = rhs
                .iter()
                .zip(&self.col_scale)
                .map(|(&x, &s)| x * s)
                .collect();
            self.lu.solve_transposed_vec(&d)
        };
        let mut mu = scaled_solve(f);
        for _ in 0..REFINE_STEPS {
            let correction = scaled_solve(&residual_transposed_vec(&self.b, &mu, f));
            for (m, c) in mu.iter_mut().zip(correction) {
                *m += c;
            }
        }
        mu
    }

    /// `‖B‖_max ‖B^{-1}‖_max p`
    pub fn condition_estimate(&self) -> T {
        self.condition_estimate
    }

    /// True when the condition estimate exceeds `cond_warn`.
    pub fn ill_conditioned(&self) -> bool {
        self.ill_conditioned
    }

    pub fn max_norm(&self) -> T {
        self.inverse.max_norm()
    }
}

/// `B[i][j] = f_j(-(i+1))` for `i, j = 0..p`.
pub fn vandermonde_matrix<T: Real>(basis: &BasisDescriptor<T>) -> Matrix<T> {
    Matrix::from_fn(basis.len(), |i, j| {
        basis.eval_term(j, Complex::new(-T::from_count(i + 1), T::zero()))
    })
}

/// Inverts `b` by LU with column equilibration and checks `‖B E - I‖_max`.
///
/// A singular pivot here means two clusters describe the same eigenvalue, so it is reported
/// as [`FlowError::VandermondeSingular`].
pub fn invert_vandermonde<T: Real>(
    b: &Matrix<T>,
    tol: &ToleranceConfig<T>,
) -> Result<CoefficientTable<T>> {
    let p = b.dim();
    // Columns of B span many orders of magnitude (lambda^{-i-j} g_j(-i)); scale each to unit size.
    let col_scale: Vec<T> = (0..p)
        .map(|j| {
            let m = (0..p).map(|i| b[(i, j)].norm()).fold(T::zero(), T::max);
            if m.is_zero() {
                T::one()
            } else {
                T::one() / m
            }
        })
        .collect();
    let scaled = Matrix::from_fn(p, |i, j| b[(i, j)] * col_scale[j]);
    let lu = lu_factor(&scaled, tol).map_err(|e| match e {
        FlowError::SingularMatrix { pivot, threshold } => {
            FlowError::VandermondeSingular { pivot, threshold }
        }
        other => other,
    })?;
    let unscale = |m: Matrix<T>| Matrix::from_fn(p, |i, j| m[(i, j)] * col_scale[i]);
    let mut inverse = unscale(lu.inverse()).check_finite("Vandermonde inverse")?;
    for _ in 0..REFINE_STEPS {
        let r = residual(b, &inverse, &Matrix::identity(p));
        inverse.add_scaled(Complex::one(), &unscale(lu.solve(&r)?));
    }
    let inverse = inverse.check_finite("Vandermonde inverse")?;

    let condition_estimate = b.max_norm() * inverse.max_norm() * T::from_count(p);
    let residual = (&(b * &inverse) - &Matrix::identity(p)).max_norm();
    if !(residual <= tol.residual_tol * condition_estimate.max(T::one())) {
        return Err(FlowError::VandermondeSingular {
            pivot: crate::numeric::to_f64(lu.min_pivot()),
            threshold: crate::numeric::to_f64(tol.rank_tol),
        });
    }
    Ok(CoefficientTable {
        inverse,
        condition_estimate,
        ill_conditioned: condition_estimate > tol.cond_warn,
        b: b.clone(),
        col_scale,
        lu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annihilator::Spectrum;
    use crate::basis::build_basis;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn basis(pairs: &[(C, usize)]) -> BasisDescriptor<f64> {
        build_basis(&Spectrum::from_clusters(pairs, &ToleranceConfig::default()).unwrap())
    }

    #[test]
    fn one_by_one() {
        let b = vandermonde_matrix(&basis(&[(c(5.0, 0.0), 1)]));
        assert!((b[(0, 0)] - c(0.2, 0.0)).norm() < 1e-16);
        let e = invert_vandermonde(&b, &ToleranceConfig::default()).unwrap();
        assert!((e.inverse()[(0, 0)] - c(5.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn plus_minus_one() {
        let b = vandermonde_matrix(&basis(&[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 1)]));
        let expected = [[c(1.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(1.0, 0.0)]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (b[(i, j)] - expected[i][j]).norm() < 1e-15,
                    "B[{i}][{j}] = {}",
                    b[(i, j)]
                );
            }
        }
        // 2x2 inverse formula: [[a, b], [c, d]]^{-1} = [[d, -b], [-c, a]] / (ad - bc)
        let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
        let oracle = [
            [b[(1, 1)] / det, -b[(0, 1)] / det],
            [-b[(1, 0)] / det, b[(0, 0)] / det],
        ];
        let e = invert_vandermonde(&b, &ToleranceConfig::default()).unwrap();
        for (i, row) in oracle.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                assert!((e.inverse()[(i, j)] - want).norm() < 1e-15);
            }
        }
        assert!((e.inverse()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((e.inverse()[(1, 0)] - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn distinct_roots_give_classical_vandermonde() {
        let lambdas = [c(3.0, 0.0), c(0.0, 2.0), c(-1.0, -1.0)];
        let bs = basis(&lambdas.iter().map(|&l| (l, 1)).collect::<Vec<_>>());
        let b = vandermonde_matrix(&bs);
        for (j, cl) in bs.spectrum().clusters().iter().enumerate() {
            for i in 0..3 {
                let want = cl.lambda.inv().powi(i as i32 + 1);
                assert!((b[(i, j)] - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn round_trip_residual() {
        let bs = basis(&[(c(2.0, 0.5), 3), (c(-0.7, 0.1), 2), (c(0.5, -0.2), 1)]);
        let b = vandermonde_matrix(&bs);
        let e = invert_vandermonde(&b, &ToleranceConfig::default()).unwrap();
        let r = (&(&b * e.inverse()) - &Matrix::identity(6)).max_norm();
        assert!(r <= 1e-9, "residual {r:e}");
        assert!(!e.ill_conditioned());
    }

    #[test]
    fn duplicated_cluster_is_reported_upstream() {
        // Two identical columns: what a clustering failure would produce.
        let b = Matrix::from_fn(2, |i, _| c(0.5f64.powi(i as i32 + 1), 0.0));
        let err = invert_vandermonde(&b, &ToleranceConfig::default()).unwrap_err();
        assert!(matches!(err, FlowError::VandermondeSingular { .. }));
        assert!(err.to_string().contains("root-clustering failure upstream"));
    }
}
