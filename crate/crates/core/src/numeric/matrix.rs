use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{FlowError, Result};
use crate::numeric::{is_finite, lu_factor, Real, ToleranceConfig};

/// Dense square matrix of complex entries, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    /// Builds an `n x n` matrix from row-major entries, rejecting empty, ragged or non-finite input.
    pub fn new(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if n == 0 {
            return Err(FlowError::InvalidInput(
                "matrix dimension must be at least 1".into(),
            ));
        }
        if data.len() != n * n {
            return Err(FlowError::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if !data.iter().all(|&z| is_finite(z)) {
            return Err(FlowError::NonFinite("matrix entries"));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(FlowError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for matrices with real entries.
    pub fn from_real_rows(rows: &[&[T]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect())
                .collect(),
        )
    }

    pub(crate) fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| Complex::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    /// The nilpotent shift `N_n`: ones directly above the diagonal, zero elsewhere.
    pub fn shift(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if j == i + 1 {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    pub fn diagonal(values: &[Complex<T>]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                values[i]
            } else {
                Complex::zero()
            }
        })
    }

    /// Jordan block `B_size(lambda) = lambda I + N`.
    pub fn jordan_block(lambda: Complex<T>, size: usize) -> Self {
        Self::from_fn(size, |i, j| {
            if i == j {
                lambda
            } else if j == i + 1 {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        Self::from_fn(n, |i, j| match (i < self.n, j < self.n) {
            (true, true) => self[(i, j)],
            (false, false) => other[(i - self.n, j - self.n)],
            _ => Complex::zero(),
        })
    }

    /// Upper-left `k x k` corner.
    pub fn top_left(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.n, "corner size out of range");
        Self::from_fn(k, |i, j| self[(i, j)])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    /// `self += c * other`
    pub(crate) fn add_scaled(&mut self, c: Complex<T>, other: &Self) {
        assert_eq!(self.n, other.n);
        for (x, &y) in self.data.iter_mut().zip(&other.data) {
            *x += c * y;
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n)
            .map(|i| self[(i, i)])
            .fold(Complex::zero(), |a, b| a + b)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn max_norm(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|&z| is_finite(z))
    }

    pub(crate) fn check_finite(self, context: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(FlowError::NonFinite(context))
        }
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.n, "vector length must match matrix dimension");
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// Maps every entry to another scalar type, e.g. `f64 -> f32`.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::from(z.re).unwrap(), U::from(z.im).unwrap()))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on dimension mismatch; use [`multiply`] for the fallible form.
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let src = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix sum");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix difference");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let cells: Vec<String> = self.row(i).iter().map(|z| format!("{z}")).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn multiply<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.n != b.n {
        return Err(FlowError::DimensionMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    (a * b).check_finite("matrix product")
}

/// Largest entry magnitude; the norm used for every relative comparison in the crate.
pub fn max_norm<T: Real>(a: &Matrix<T>) -> T {
    a.max_norm()
}

/// `a^k` by square-and-multiply; negative `k` inverts first.
pub fn power_int<T: Real>(a: &Matrix<T>, k: i64, tol: &ToleranceConfig<T>) -> Result<Matrix<T>> {
    let mut base = if k < 0 {
        lu_factor(a, tol)?.inverse()
    } else {
        a.clone()
    };
    let mut e = k.unsigned_abs();
    let mut acc = Matrix::identity(a.n);
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc.check_finite("integer power")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn diag(v: &[f64]) -> Matrix<f64> {
        Matrix::diagonal(&v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn identity_is_neutral() {
        let a = Matrix::from_rows(vec![
            vec![c(1.0, 2.0), c(0.0, -1.0)],
            vec![c(3.0, 0.0), c(4.0, 0.5)],
        ])
        .unwrap();
        assert_eq!(multiply(&Matrix::identity(2), &a).unwrap(), a);
    }

    #[test]
    fn shift_squared_vanishes() {
        let n2 = Matrix::<f64>::shift(2);
        assert_eq!(multiply(&n2, &n2).unwrap(), Matrix::zeros(2));
    }

    #[test]
    fn swap_is_an_involution() {
        let s = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(multiply(&s, &s).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn multiply_rejects_mismatch() {
        let err = multiply(&Matrix::<f64>::identity(2), &Matrix::identity(3)).unwrap_err();
        assert_eq!(
            err,
            FlowError::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(Matrix::<f64>::new(0, vec![]).is_err());
        assert!(Matrix::new(2, vec![c(1.0, 0.0); 3]).is_err());
        assert_eq!(
            Matrix::new(1, vec![c(f64::NAN, 0.0)]),
            Err(FlowError::NonFinite("matrix entries"))
        );
        assert!(Matrix::from_rows(vec![vec![c(1.0, 0.0)], vec![]]).is_err());
    }

    #[test]
    fn integer_powers() {
        let tol = ToleranceConfig::default();
        let a = diag(&[2.0, 3.0]);
        assert_eq!(power_int(&a, 0, &tol).unwrap(), Matrix::identity(2));
        assert_eq!(power_int(&a, 3, &tol).unwrap(), diag(&[8.0, 27.0]));
        assert_eq!(power_int(&diag(&[2.0]), -1, &tol).unwrap(), diag(&[0.5]));
        let singular = Matrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(matches!(
            power_int(&singular, -2, &tol),
            Err(FlowError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn max_norm_examples() {
        assert_eq!(max_norm(&Matrix::<f64>::zeros(3)), 0.0);
        assert_eq!(max_norm(&Matrix::<f64>::identity(3)), 1.0);
        let a = Matrix::from_rows(vec![
            vec![c(3.0, 0.0), c(0.0, -4.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(max_norm(&a), 4.0);
    }

    #[test]
    fn works_in_single_precision() {
        let a = Matrix::<f32>::jordan_block(Complex::new(2.0, 0.0), 2);
        let sq = power_int(&a, 2, &ToleranceConfig::default()).unwrap();
        assert_eq!(sq[(0, 0)], Complex::new(4.0, 0.0));
        assert_eq!(sq[(0, 1)], Complex::new(4.0, 0.0));
    }

    fn well_conditioned(n: usize) -> impl Strategy<Value = Matrix<f64>> {
        prop::collection::vec((-0.3f64..0.3, -0.3f64..0.3), n * n).prop_map(move |v| {
            let mut m = Matrix::identity(n).scale(c(2.0, 0.0));
            for (k, (re, im)) in v.into_iter().enumerate() {
                m.data[k] += c(re, im);
            }
            m
        })
    }

    proptest! {
        #[test]
        fn power_law_is_additive(a in well_conditioned(4), j in -5i64..=5, k in -5i64..=5) {
            let tol = ToleranceConfig::default();
            let lhs = power_int(&a, j + k, &tol).unwrap();
            let rhs = &power_int(&a, j, &tol).unwrap() * &power_int(&a, k, &tol).unwrap();
            let err = (&lhs - &rhs).max_norm() / lhs.max_norm().max(1.0);
            prop_assert!(err <= 1e-10, "relative error {err:e}");
        }
    }
}
