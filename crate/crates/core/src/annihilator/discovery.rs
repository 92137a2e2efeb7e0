//! Finding some relation `Q(A) = 0`: the minimal polynomial by a Krylov sweep over
//! `I, A, A^2, ...`, or the characteristic polynomial by trace recursion.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::annihilator::AnnihilatorPolynomial;
use crate::error::{FlowError, Result};
use crate::numeric::{real, to_f64, Matrix, Real, ToleranceConfig};

fn inner<T: Real>(u: &Matrix<T>, v: &Matrix<T>) -> Complex<T> {
    u.as_slice()
        .iter()
        .zip(v.as_slice())
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y)
}

fn axpy_poly<T: Real>(acc: &mut Vec<Complex<T>>, c: Complex<T>, p: &[Complex<T>]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Complex::zero());
    }
    for (a, &b) in acc.iter_mut().zip(p) {
        *a += c * b;
    }
}

/// Undoes the scaling `A -> A / s`: coefficient `k` of a degree-`q` polynomial gains `s^{q-k}`.
fn unscale<T: Real>(ascending: &mut [Complex<T>], s: T) {
    let q = ascending.len() - 1;
    for (k, a) in ascending.iter_mut().enumerate() {
        *a *= s.powi((q - k) as i32);
    }
}

/// Monic polynomial of least degree annihilating `a`.
///
/// Runs an Arnoldi process on the matrices `I, A, A^2, ...` (as vectors of length `n^2`),
/// carrying along the polynomial that produces each orthonormal basis matrix. The first
/// step whose new direction has relative size at most `rank_tol` closes the sweep.
pub fn minimal_polynomial<T: Real>(
    a: &Matrix<T>,
    tol: &ToleranceConfig<T>,
) -> Result<AnnihilatorPolynomial<T>> {
    tol.validate()?;
    let n = a.dim();
    let s = a.max_norm();
    if s.is_zero() {
        return AnnihilatorPolynomial::new(vec![Complex::zero()]);
    }
    let scaled = a.scale(real(T::one() / s));
    let ambiguous_low = tol.rank_tol / T::lit(10.0);
    let ambiguous_high = tol.rank_tol * T::lit(10.0);

    let root_n = T::from_count(n).sqrt();
    let mut basis = vec![Matrix::identity(n).scale(real(T::one() / root_n))];
    let mut polys: Vec<Vec<Complex<T>>> = vec![vec![real(T::one() / root_n)]];

    for k in 0..n {
        let mut w = &scaled * &basis[k];
        let mut pw: Vec<Complex<T>> = std::iter::once(Complex::zero())
            .chain(polys[k].iter().copied())
            .collect();
        let before = w.frobenius_norm();
        // Two Gram-Schmidt passes keep the basis orthonormal to working precision.
        for _ in 0..2 {
            for (v, pv) in basis.iter().zip(&polys) {
                let h = inner(v, &w);
                w.add_scaled(-h, v);
                axpy_poly(&mut pw, -h, pv);
            }
        }
        let beta = w.frobenius_norm();
        let measure = if before.is_zero() {
            T::zero()
        } else {
            beta / before
        };
        let degree = k + 1;

        if measure > ambiguous_low && measure < ambiguous_high {
            return Err(FlowError::AmbiguousDegree {
                degree,
                measure: to_f64(measure),
                rank_tol: to_f64(tol.rank_tol),
            });
        }
        if measure <= tol.rank_tol {
            let lead = pw[degree];
            let mut monic: Vec<Complex<T>> = pw.iter().map(|&x| x / lead).collect();
            monic[degree] = Complex::one();
            unscale(&mut monic, s);
            let q = AnnihilatorPolynomial::from_monic(&monic)?;
            let residual = validate_relation(a, &q);
            if !(residual <= tol.residual_tol) {
                return Err(FlowError::RelationInvalid {
                    residual: to_f64(residual),
                    tolerance: to_f64(tol.residual_tol),
                });
            }
            return Ok(q);
        }
        let inv = real(T::one() / beta);
        basis.push(w.scale(inv));
        polys.push(pw.iter().map(|&x| x * inv).collect());
    }

    // The characteristic polynomial has degree n, so a dependence must appear by then.
    Err(FlowError::AmbiguousDegree {
        degree: n + 1,
        measure: f64::NAN,
        rank_tol: to_f64(tol.rank_tol),
    })
}

/// Characteristic polynomial by the Faddeev-LeVerrier trace recursion on `A / ‖A‖_max`.
pub fn characteristic_polynomial<T: Real>(a: &Matrix<T>) -> AnnihilatorPolynomial<T> {
    let n = a.dim();
    let mut s = a.max_norm();
    if s.is_zero() {
        s = T::one();
    }
    let scaled = a.scale(real(T::one() / s));
    let mut b = vec![Complex::zero(); n + 1];
    b[n] = Complex::one();
    let mut m = Matrix::zeros(n);
    for k in 1..=n {
        let mut next = &scaled * &m;
        for i in 0..n {
            next[(i, i)] += b[n + 1 - k];
        }
        m = next;
        b[n - k] = -(&scaled * &m).trace() / real(T::from_count(k));
    }
    unscale(&mut b, s);
    AnnihilatorPolynomial::from_monic(&b).expect("degree n >= 1")
}

/// Relative residual `‖Q(A)‖_max / max(1, ‖A‖_max^p)`.
pub fn validate_relation<T: Real>(a: &Matrix<T>, q: &AnnihilatorPolynomial<T>) -> T {
    let scale = T::one().max(a.max_norm().powi(q.degree() as i32));
    q.eval_matrix(a).max_norm() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64) -> C {
        Complex::new(re, 0.0)
    }

    fn diag(v: &[f64]) -> Matrix<f64> {
        Matrix::diagonal(&v.iter().map(|&x| c(x)).collect::<Vec<_>>())
    }

    fn close(q: &AnnihilatorPolynomial<f64>, relation: &[f64], eps: f64) -> bool {
        q.degree() == relation.len()
            && q.relation_vector()
                .iter()
                .zip(relation)
                .all(|(a, &b)| (a - c(b)).norm() <= eps * (1.0 + b.abs()))
    }

    /// Oracle: a monic degree-1 polynomial `X - t` annihilates `A` only when `A = tI`.
    fn is_scalar_matrix(a: &Matrix<f64>) -> bool {
        let t = a[(0, 0)];
        (a - &Matrix::identity(a.dim()).scale(t)).max_norm() == 0.0
    }

    #[test]
    fn identity_has_linear_minimal_polynomial() {
        let q =
            minimal_polynomial(&Matrix::<f64>::identity(4), &ToleranceConfig::default()).unwrap();
        assert!(close(&q, &[1.0], 1e-12));
    }

    #[test]
    fn repeated_diagonal_entry() {
        let a = diag(&[2.0, 2.0, 3.0]);
        // Brute-force oracle: (A-2I)(A-3I) = 0 and no degree-1 monic annihilates.
        let two = &a - &Matrix::identity(3).scale(c(2.0));
        let three = &a - &Matrix::identity(3).scale(c(3.0));
        assert_eq!((&two * &three).max_norm(), 0.0);
        assert!(!is_scalar_matrix(&a));

        let q = minimal_polynomial(&a, &ToleranceConfig::default()).unwrap();
        assert!(close(&q, &[5.0, -6.0], 1e-10), "{q}");
    }

    #[test]
    fn jordan_block_minimal_polynomial() {
        let a = Matrix::jordan_block(c(5.0), 2);
        // Oracle: (A-5I)^2 = N^2 = 0 while A is not scalar.
        let shifted = &a - &Matrix::identity(2).scale(c(5.0));
        assert_eq!((&shifted * &shifted).max_norm(), 0.0);
        assert!(!is_scalar_matrix(&a));

        let q = minimal_polynomial(&a, &ToleranceConfig::default()).unwrap();
        assert!(close(&q, &[10.0, -25.0], 1e-10), "{q}");
    }

    #[test]
    fn one_by_one() {
        let a = Matrix::new(1, vec![Complex::new(2.0, -1.0)]).unwrap();
        let q = minimal_polynomial(&a, &ToleranceConfig::default()).unwrap();
        assert!((q.coeffs()[0] - Complex::new(2.0, -1.0)).norm() < 1e-14);
        let ch = characteristic_polynomial(&a);
        assert!((ch.coeffs()[0] - Complex::new(2.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn nearly_dependent_powers_are_ambiguous() {
        // Eigenvalues 1 and 1 + d: the first Krylov step leaves a residual of relative size d / 2.
        let d = 4e-10;
        let a = diag(&[1.0, 1.0 + d]);
        let tol = ToleranceConfig::default();
        let r = minimal_polynomial(&a, &tol);
        assert!(
            matches!(r, Err(FlowError::AmbiguousDegree { degree: 1, .. })),
            "{r:?}"
        );
    }

    #[test]
    fn characteristic_examples() {
        let q = characteristic_polynomial(&diag(&[2.0, 3.0]));
        assert!(close(&q, &[5.0, -6.0], 1e-14));
        let q = characteristic_polynomial(&Matrix::identity(2));
        assert!(close(&q, &[2.0, -1.0], 1e-14));
        // det(XI - [[c1, 1], [c0, 0]]) = X^2 - c1 X - c0
        let (c1, c0) = (1.5, -0.75);
        let comp = Matrix::from_real_rows(&[&[c1, 1.0], &[c0, 0.0]]).unwrap();
        assert!(close(&characteristic_polynomial(&comp), &[c1, c0], 1e-14));
    }

    #[test]
    fn validate_examples() {
        let one = AnnihilatorPolynomial::from_roots(&[(c(1.0), 1)]).unwrap();
        assert_eq!(validate_relation(&Matrix::identity(3), &one), 0.0);
        let q = AnnihilatorPolynomial::from_relation_vector(&[c(5.0), c(-6.0)]).unwrap();
        assert!(validate_relation(&diag(&[2.0, 3.0]), &q) <= 1e-14);
        // Q = X^2 - 1 at diag(2,3): residual diag(3, 8), normalized by 3^2.
        let bad = AnnihilatorPolynomial::from_relation_vector(&[c(0.0), c(1.0)]).unwrap();
        let r = validate_relation(&diag(&[2.0, 3.0]), &bad);
        assert!((r - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn minimal_divides_characteristic() {
        let t = Matrix::from_real_rows(&[
            &[1.0, 0.5, 0.0, 0.2],
            &[0.0, 1.0, 0.3, 0.0],
            &[0.1, 0.0, 1.0, 0.0],
            &[0.0, 0.2, 0.0, 1.0],
        ])
        .unwrap();
        let j = Matrix::jordan_block(c(2.0), 2).direct_sum(&Matrix::diagonal(&[c(2.0), c(-1.5)]));
        let tol = ToleranceConfig::default();
        let tinv = crate::numeric::lu_factor(&t, &tol).unwrap().inverse();
        let a = &(&t * &j) * &tinv;
        let m = minimal_polynomial(&a, &tol).unwrap();
        let ch = characteristic_polynomial(&a);
        assert_eq!(m.degree(), 3);
        assert_eq!(ch.degree(), 4);
        let scale = ch
            .monic_coefficients()
            .iter()
            .map(|x| x.norm())
            .fold(1.0, f64::max);
        assert!(ch.remainder(&m).iter().all(|r| r.norm() <= 1e-8 * scale));
        assert!(validate_relation(&a, &m) <= tol.residual_tol);
        assert!(validate_relation(&a, &ch) <= tol.residual_tol);
    }
}
