use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{FlowError, Result};
use crate::numeric::{is_finite, Matrix, Real};

/// Monic relation `X^p - c_{p-1} X^{p-1} - ... - c_1 X - c_0`.
///
/// Stored as `(c_0, ..., c_{p-1})`. When `Q(A) = 0` the relation reads
/// `A^p = c_{p-1} A^{p-1} + ... + c_0 I`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilatorPolynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> AnnihilatorPolynomial<T> {
    /// From `(c_0, ..., c_{p-1})`.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(FlowError::InvalidInput(
                "relation degree must be at least 1".into(),
            ));
        }
        if !coeffs.iter().all(|&c| is_finite(c)) {
            return Err(FlowError::NonFinite("relation coefficients"));
        }
        Ok(Self { coeffs })
    }

    /// From the vector `c = (c_{p-1}, ..., c_1, c_0)`, highest coefficient first.
    pub fn from_relation_vector(c: &[Complex<T>]) -> Result<Self> {
        Self::new(c.iter().rev().copied().collect())
    }

    /// From ascending monic coefficients `(a_0, ..., a_p)` of `sum a_k X^k`; `a_p` must be 1.
    pub(crate) fn from_monic(a: &[Complex<T>]) -> Result<Self> {
        let p = a.len() - 1;
        Self::new(a[..p].iter().map(|&x| -x).collect())
    }

    /// Expands `prod (X - lambda_i)^{n_i}`.
    pub fn from_roots(roots: &[(Complex<T>, usize)]) -> Result<Self> {
        let mut a = vec![Complex::one()];
        for &(lambda, mult) in roots {
            for _ in 0..mult {
                a = mul_linear(&a, lambda);
            }
        }
        if a.len() < 2 {
            return Err(FlowError::InvalidInput("need at least one root".into()));
        }
        Self::from_monic(&a)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `(c_0, ..., c_{p-1})`
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// `c = (c_{p-1}, ..., c_0)`, the ordering used with the companion matrix.
    pub fn relation_vector(&self) -> Vec<Complex<T>> {
        self.coeffs.iter().rev().copied().collect()
    }

    /// Ascending coefficients `(a_0, ..., a_p)` with `a_p = 1`.
    pub fn monic_coefficients(&self) -> Vec<Complex<T>> {
        let mut a: Vec<Complex<T>> = self.coeffs.iter().map(|&c| -c).collect();
        a.push(Complex::one());
        a
    }

    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        horner(&self.monic_coefficients(), x)
    }

    /// `Q(A)` by Horner's scheme.
    pub fn eval_matrix(&self, a: &Matrix<T>) -> Matrix<T> {
        let coeffs = self.monic_coefficients();
        let n = a.dim();
        let mut acc = Matrix::identity(n);
        for &ak in coeffs.iter().rev().skip(1) {
            acc = &acc * a;
            for i in 0..n {
                acc[(i, i)] += ak;
            }
        }
        acc
    }

    /// `Q(X) (X - root)`
    pub fn times_linear(&self, root: Complex<T>) -> Self {
        Self::from_monic(&mul_linear(&self.monic_coefficients(), root))
            .expect("product of monic polynomials is monic")
    }

    /// Remainder of `self` divided by the monic `divisor`, ascending coefficients.
    pub fn remainder(&self, divisor: &Self) -> Vec<Complex<T>> {
        let mut r = self.monic_coefficients();
        let d = divisor.monic_coefficients();
        let dp = d.len() - 1;
        while r.len() > dp {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dp;
            for (k, &dk) in d.iter().enumerate() {
                r[shift + k] -= lead * dk;
            }
            r.pop();
        }
        r
    }

    /// Taylor coefficients `Q^{(k)}(x) / k!` for `k = 0..=count-1`.
    pub fn taylor(&self, x: Complex<T>, count: usize) -> Vec<Complex<T>> {
        let mut a = self.monic_coefficients();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if a.is_empty() {
                out.push(Complex::zero());
                continue;
            }
            // Synthetic division by (X - x): the remainder is the value, the quotient carries on.
            let deg = a.len() - 1;
            let mut q = vec![Complex::zero(); deg];
            let mut acc = Complex::zero();
            for k in (0..=deg).rev() {
                acc = acc * x + a[k];
                if k > 0 {
                    q[k - 1] = acc;
                }
            }
            out.push(acc);
            a = q;
        }
        out
    }

    /// Natural size of the `k`-th Taylor coefficient at `x`: `sum_i |a_i| C(i,k) |x|^{i-k}`.
    pub(crate) fn taylor_scale(&self, x: Complex<T>, k: usize) -> T {
        let r = x.norm();
        self.monic_coefficients()
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, a)| a.norm() * binomial::<T>(i, k) * r.powi((i - k) as i32))
            .fold(T::zero(), |s, t| s + t)
    }
}

fn binomial<T: Real>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| {
        acc * T::from_count(n - i) / T::from_count(i + 1)
    })
}

pub(crate) fn horner<T: Real>(ascending: &[Complex<T>], x: Complex<T>) -> Complex<T> {
    ascending
        .iter()
        .rev()
        .fold(Complex::zero(), |acc, &a| acc * x + a)
}

fn mul_linear<T: Real>(a: &[Complex<T>], root: Complex<T>) -> Vec<Complex<T>> {
    let mut out = vec![Complex::zero(); a.len() + 1];
    for (k, &ak) in a.iter().enumerate() {
        out[k + 1] += ak;
        out[k] -= ak * root;
    }
    out
}

fn fmt_coeff<T: Real>(z: Complex<T>) -> String {
    if z.im.is_zero() {
        format!("{}", z.re)
    } else if z.re.is_zero() {
        format!("{}i", z.im)
    } else {
        format!("({z})")
    }
}

impl<T: Real> fmt::Display for AnnihilatorPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.degree();
        if p == 1 {
            write!(f, "X")?;
        } else {
            write!(f, "X^{p}")?;
        }
        for k in (0..p).rev() {
            let a = -self.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let (sign, mag) = if a.im.is_zero() && a.re < T::zero() {
                ("-", Complex::new(-a.re, T::zero()))
            } else {
                ("+", a)
            };
            let unit = mag.is_one() && k > 0;
            let body = if unit { String::new() } else { fmt_coeff(mag) };
            match k {
                0 => write!(f, " {sign} {body}")?,
                1 => write!(f, " {sign} {body}X")?,
                _ => write!(f, " {sign} {body}X^{k}")?,
            }
        }
        Ok(())
    }
}
