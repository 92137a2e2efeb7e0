use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{FlowError, Result};
use crate::numeric::compensated::{residual, residual_vec};
use crate::numeric::{to_f64, Matrix, Real, ToleranceConfig};

/// Row-permuted LU factorization `P A = L U` with partial pivoting.
///
/// `L` (unit lower) and `U` share one packed matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactorization<T> {
    packed: Matrix<T>,
    /// `perm[i]` is the source row of row `i` of `P A`.
    perm: Vec<usize>,
    min_pivot: T,
}

impl<T: Real> LuFactorization<T> {
    pub fn dim(&self) -> usize {
        self.packed.dim()
    }

    /// Magnitudes of the diagonal of `U`.
    pub fn pivots(&self) -> Vec<T> {
        (0..self.dim())
            .map(|i| self.packed[(i, i)].norm())
            .collect()
    }

    pub fn min_pivot(&self) -> T {
        self.min_pivot
    }

    /// Solves `A x = b` for a single column.
    pub fn solve_vec(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let lu = &self.packed;
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= lu[(i, j)] * x[j];
            }
            x[i] = s / lu[(i, i)];
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transposed_vec(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let lu = &self.packed;
        // A^T = U^T L^T P
        let mut w = b.to_vec();
        for i in 0..n {
            let mut s = w[i];
            for j in 0..i {
                s -= lu[(j, i)] * w[j];
            }
            w[i] = s / lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = w[i];
            for j in i + 1..n {
                s -= lu[(j, i)] * w[j];
            }
            w[i] = s;
        }
        let mut x = vec![Complex::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[i];
        }
        x
    }

    /// `solve_vec` followed by `steps` rounds of refinement against `a` with compensated residuals.
    ///
    /// `a` must be the matrix this factorization came from.
    pub fn solve_refined_vec(
        &self,
        a: &Matrix<T>,
        b: &[Complex<T>],
        steps: usize,
    ) -> Vec<Complex<T>> {
        let mut x = self.solve_vec(b);
        for _ in 0..steps {
            let d = self.solve_vec(&residual_vec(a, &x, b));
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += di;
            }
        }
        x
    }

    /// Matrix right-hand side version of [`Self::solve_refined_vec`].
    pub fn solve_refined(&self, a: &Matrix<T>, rhs: &Matrix<T>, steps: usize) -> Result<Matrix<T>> {
        let mut x = self.solve(rhs)?;
        for _ in 0..steps {
            let d = self.solve(&residual(a, &x, rhs))?;
            x.add_scaled(Complex::one(), &d);
        }
        x.check_finite("linear solve")
    }

    pub fn solve(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.dim();
        if rhs.dim() != n {
            return Err(FlowError::DimensionMismatch {
                expected: n,
                found: rhs.dim(),
            });
        }
        let mut out = Matrix::zeros(n);
        let mut col = vec![Complex::zero(); n];
        for j in 0..n {
            for (i, c) in col.iter_mut().enumerate() {
                *c = rhs[(i, j)];
            }
            for (i, x) in self.solve_vec(&col).into_iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        out.check_finite("linear solve")
    }

    pub fn inverse(&self) -> Matrix<T> {
        // Pivots are bounded away from zero, so the solve stays finite.
        self.solve(&Matrix::identity(self.dim()))
            .expect("inverse of a validated factorization")
    }
}

/// Factors `a`, failing when a pivot magnitude is at most `rank_tol * max_norm(a)`.
pub fn lu_factor<T: Real>(a: &Matrix<T>, tol: &ToleranceConfig<T>) -> Result<LuFactorization<T>> {
    let n = a.dim();
    let threshold = tol.rank_tol * a.max_norm();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut min_pivot = T::infinity();

    for k in 0..n {
        let (p, pivot_mag) =
            (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold(
                    (k, -T::one()),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_mag <= threshold {
            return Err(FlowError::SingularMatrix {
                pivot: to_f64(pivot_mag),
                threshold: to_f64(threshold),
            });
        }
        min_pivot = min_pivot.min(pivot_mag);
        if p != k {
            perm.swap(p, k);
            for j in 0..n {
                let tmp = lu[(p, j)];
                lu[(p, j)] = lu[(k, j)];
                lu[(k, j)] = tmp;
            }
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= factor * u;
            }
        }
    }

    Ok(LuFactorization {
        packed: lu,
        perm,
        min_pivot,
    })
}

pub fn solve<T: Real>(f: &LuFactorization<T>, rhs: &Matrix<T>) -> Result<Matrix<T>> {
    f.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn identity_has_unit_pivots() {
        let f = lu_factor(&Matrix::<f64>::identity(3), &ToleranceConfig::default()).unwrap();
        assert_eq!(f.pivots(), vec![1.0; 3]);
        assert_eq!(f.min_pivot(), 1.0);
    }

    #[test]
    fn diagonal_pivots() {
        let a = Matrix::diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let f = lu_factor(&a, &ToleranceConfig::default()).unwrap();
        let mut p = f.pivots();
        p.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(p, vec![2.0, 3.0]);
    }

    #[test]
    fn rank_one_is_singular() {
        let a = Matrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(matches!(
            lu_factor(&a, &ToleranceConfig::default()),
            Err(FlowError::SingularMatrix { .. })
        ));
        assert!(lu_factor(&Matrix::<f64>::zeros(2), &ToleranceConfig::default()).is_err());
    }

    #[test]
    fn solve_examples() {
        let tol = ToleranceConfig::default();
        let b = Matrix::from_rows(vec![
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, -3.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let fi = lu_factor(&Matrix::identity(2), &tol).unwrap();
        assert_eq!(solve(&fi, &b).unwrap(), b);

        let f2 = lu_factor(&Matrix::diagonal(&[c(2.0, 0.0)]), &tol).unwrap();
        let x = solve(&f2, &Matrix::diagonal(&[c(1.0, 0.0)])).unwrap();
        assert_eq!(x[(0, 0)], c(0.5, 0.0));

        // 2x2 inverse by the adjugate formula.
        let a = Matrix::from_rows(vec![
            vec![c(1.0, 2.0), c(3.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.0, 1.0)],
        ])
        .unwrap();
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        let expected = Matrix::from_rows(vec![
            vec![a[(1, 1)] / det, -a[(0, 1)] / det],
            vec![-a[(1, 0)] / det, a[(0, 0)] / det],
        ])
        .unwrap();
        let inv = solve(&lu_factor(&a, &tol).unwrap(), &Matrix::identity(2)).unwrap();
        assert!((&inv - &expected).max_norm() < 1e-15);
    }

    #[test]
    fn transposed_and_refined_solves() {
        let tol = ToleranceConfig::default();
        let a = Matrix::from_rows(vec![
            vec![c(0.1, 0.0), c(3.0, 1.0), c(0.0, 0.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0), c(1.0, -1.0)],
            vec![c(0.0, 1.0), c(1.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let f = lu_factor(&a, &tol).unwrap();
        let b = vec![c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0)];
        let x = f.solve_transposed_vec(&b);
        assert!(a
            .transpose()
            .mul_vec(&x)
            .iter()
            .zip(&b)
            .all(|(u, v)| (u - v).norm() < 1e-14));
        let y = f.solve_refined_vec(&a, &b, 2);
        assert!(a
            .mul_vec(&y)
            .iter()
            .zip(&b)
            .all(|(u, v)| (u - v).norm() < 1e-14));
        let inv = f.solve_refined(&a, &Matrix::identity(3), 1).unwrap();
        assert!((&(&a * &inv) - &Matrix::identity(3)).max_norm() < 1e-15);
    }

    #[test]
    fn solve_rejects_wrong_size() {
        let f = lu_factor(&Matrix::<f64>::identity(2), &ToleranceConfig::default()).unwrap();
        assert!(f.solve(&Matrix::identity(3)).is_err());
    }

    fn random_matrix(n: usize) -> impl Strategy<Value = Matrix<f64>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            let data = v.into_iter().map(|(re, im)| c(re, im)).collect();
            let m = Matrix::new(n, data).unwrap();
            // Diagonal shift keeps the sample well conditioned.
            &m + &Matrix::identity(n).scale(c(n as f64, 0.0))
        })
    }

    proptest! {
        #[test]
        fn inverse_residual_is_small(a in (1usize..=8).prop_flat_map(random_matrix)) {
            let f = lu_factor(&a, &ToleranceConfig::default()).unwrap();
            let r = &(&a * &f.inverse()) - &Matrix::identity(a.dim());
            prop_assert!(r.max_norm() <= 1e-10);
            prop_assert!(f.min_pivot() > 1e-10 * a.max_norm());
        }
    }
}
