//! Residuals accumulated with error-free transformations (twice the working precision).
//!
//! Iterative refinement only improves a solution when its residual is computed more
//! accurately than the solve itself.

use num_complex::Complex;

use crate::numeric::{Matrix, Real};

fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Running sum carried as a value plus an accumulated correction.
#[derive(Clone, Copy)]
struct Accumulator<T> {
    sum: T,
    err: T,
}

impl<T: Real> Accumulator<T> {
    fn new(start: T) -> Self {
        Self {
            sum: start,
            err: T::zero(),
        }
    }

    fn add(&mut self, x: T) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.err += e;
    }

    fn add_product(&mut self, a: T, b: T) {
        let p = a * b;
        self.add(p);
        self.err += a.mul_add(b, -p);
    }

    fn value(self) -> T {
        self.sum + self.err
    }
}

/// `b - sum_k row[k] x[k]`
fn residual_entry<T: Real>(
    b: Complex<T>,
    row: impl Iterator<Item = (Complex<T>, Complex<T>)>,
) -> Complex<T> {
    let mut re = Accumulator::new(b.re);
    let mut im = Accumulator::new(b.im);
    for (a, x) in row {
        re.add_product(-a.re, x.re);
        re.add_product(a.im, x.im);
        im.add_product(-a.re, x.im);
        im.add_product(-a.im, x.re);
    }
    Complex::new(re.value(), im.value())
}

/// `b - A x`
pub(crate) fn residual_vec<T: Real>(
    a: &Matrix<T>,
    x: &[Complex<T>],
    b: &[Complex<T>],
) -> Vec<Complex<T>> {
    (0..a.dim())
        .map(|i| residual_entry(b[i], a.row(i).iter().copied().zip(x.iter().copied())))
        .collect()
}

/// `b - A^T x`
pub(crate) fn residual_transposed_vec<T: Real>(
    a: &Matrix<T>,
    x: &[Complex<T>],
    b: &[Complex<T>],
) -> Vec<Complex<T>> {
    (0..a.dim())
        .map(|j| residual_entry(b[j], (0..a.dim()).map(|i| (a[(i, j)], x[i]))))
        .collect()
}

/// `B - A X`
pub(crate) fn residual<T: Real>(a: &Matrix<T>, x: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.dim();
    Matrix::from_fn(n, |i, j| {
        residual_entry(b[(i, j)], (0..n).map(|k| (a[(i, k)], x[(k, j)])))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        // 1 + 1e-17 - 1 vanishes in plain arithmetic.
        let row: &[f64] = &[1.0, 1e-17, -1.0];
        let a = Matrix::from_real_rows(&[row; 3]).unwrap();
        let x = vec![Complex::new(1.0, 0.0); 3];
        let r = residual_vec(&a, &x, &[Complex::new(0.0, 0.0); 3]);
        assert_eq!(r[0], Complex::new(-1e-17, 0.0));
        let rt = residual_transposed_vec(&a.transpose(), &x, &[Complex::new(0.0, 0.0); 3]);
        assert_eq!(rt, r);
    }

    #[test]
    fn exact_product_error_is_captured() {
        let e = 2f64.powi(-30);
        let a = Matrix::from_real_rows(&[&[1.0 + e]]).unwrap();
        let x = Matrix::from_real_rows(&[&[1.0 - e]]).unwrap();
        // (1+e)(1-e) = 1 - e^2, which rounds to 1 in f64.
        let r = residual(&a, &x, &Matrix::identity(1));
        assert_eq!(r[(0, 0)], Complex::new(e * e, 0.0));
    }
}
