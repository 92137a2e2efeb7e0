//! Jordan-block flows, the similarity oracle built from them, and the one-step matrix
//! extension that multiplies the minimal polynomial by a linear factor.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::annihilator::Spectrum;
use crate::basis::{branch_log, shifted_flow};
use crate::error::{FlowError, Result};
use crate::numeric::{lu_factor, Matrix, Real, ToleranceConfig};

/// `sum_{i < size} g_i(z) lambda^{z-i} N^i`, an upper-triangular Toeplitz matrix.
pub fn jordan_block_flow<T: Real>(
    lambda: Complex<T>,
    size: usize,
    z: Complex<T>,
) -> Result<Matrix<T>> {
    let log_lambda = branch_log(lambda)?;
    let diagonals: Vec<Complex<T>> = (0..size).map(|i| shifted_flow(log_lambda, i, z)).collect();
    Ok(Matrix::from_fn(size, |r, c| {
        if c >= r {
            diagonals[c - r]
        } else {
            Complex::zero()
        }
    }))
}

/// `T diag(B_1^z, ..., B_k^z) T^{-1}` for Jordan blocks `(lambda, size)`.
pub fn jordan_oracle<T: Real>(
    blocks: &[(Complex<T>, usize)],
    t: &Matrix<T>,
    z: Complex<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Matrix<T>> {
    let total: usize = blocks.iter().map(|b| b.1).sum();
    if total != t.dim() {
        return Err(FlowError::DimensionMismatch {
            expected: t.dim(),
            found: total,
        });
    }
    let mut flow: Option<Matrix<T>> = None;
    for &(lambda, size) in blocks {
        let b = jordan_block_flow(lambda, size, z)?;
        flow = Some(match flow {
            None => b,
            Some(acc) => acc.direct_sum(&b),
        });
    }
    let flow = flow.ok_or_else(|| FlowError::InvalidInput("no Jordan blocks".into()))?;
    let t_inv = lu_factor(t, tol)?.inverse();
    Ok(&(t * &flow) * &t_inv)
}

/// A Jordan block found in a block-diagonal matrix: rows `start..start + size`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanBlock<T> {
    pub start: usize,
    pub size: usize,
    pub lambda: Complex<T>,
}

/// Reads the block structure of a matrix in Jordan form.
///
/// Requires an upper-bidiagonal matrix whose superdiagonal entries are exactly 0 or 1 and
/// whose diagonal is constant across every 1.
pub fn jordan_blocks<T: Real>(a: &Matrix<T>) -> Result<Vec<JordanBlock<T>>> {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            if j != i && j != i + 1 && !a[(i, j)].is_zero() {
                return Err(FlowError::NotJordanForm(format!(
                    "nonzero entry at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 0..n {
        let joined = i + 1 < n && {
            let s = a[(i, i + 1)];
            if s.is_one() {
                if a[(i, i)] != a[(i + 1, i + 1)] {
                    return Err(FlowError::NotJordanForm(format!(
                        "superdiagonal 1 at ({}, {}) joins different eigenvalues",
                        i + 1,
                        i + 2
                    )));
                }
                true
            } else if s.is_zero() {
                false
            } else {
                return Err(FlowError::NotJordanForm(format!(
                    "superdiagonal entry {s} at ({}, {}) is neither 0 nor 1",
                    i + 1,
                    i + 2
                )));
            }
        };
        if !joined {
            blocks.push(JordanBlock {
                start,
                size: i + 1 - start,
                lambda: a[(start, start)],
            });
            start = i + 1;
        }
    }
    Ok(blocks)
}

/// Grows `a` by one row and column so that its minimal polynomial gains the factor
/// `X - new_root`, leaving the upper-left `n x n` corner of every flow equal to `a^z`.
///
/// The result is `[[A, u], [0, new_root]]`. When `new_root` is not an eigenvalue `u = 0`.
/// Otherwise `a` must be in Jordan form and `u` is the unit vector at the last row of the
/// largest block for that eigenvalue, which lengthens that block by one.
pub fn extend_matrix<T: Real>(
    a: &Matrix<T>,
    new_root: Complex<T>,
    spectrum_of_a: &Spectrum<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Matrix<T>> {
    let n = a.dim();
    let radius = tol.cluster_tol * T::one().max(new_root.norm());
    let is_eigenvalue = spectrum_of_a
        .clusters()
        .iter()
        .any(|c| (c.lambda - new_root).norm() <= radius);

    let mut link = None;
    let mut corner = new_root;
    if is_eigenvalue {
        let block = jordan_blocks(a)?
            .into_iter()
            .filter(|b| (b.lambda - new_root).norm() <= radius)
            .fold(None::<JordanBlock<T>>, |best, b| match best {
                Some(x) if x.size >= b.size => Some(x),
                _ => Some(b),
            })
            .ok_or_else(|| {
                FlowError::NotJordanForm(format!(
                    "no diagonal block carries the eigenvalue {new_root}"
                ))
            })?;
        link = Some(block.start + block.size - 1);
        corner = block.lambda;
    }

    Ok(Matrix::from_fn(n + 1, |i, j| match (i < n, j < n) {
        (true, true) => a[(i, j)],
        (true, false) if Some(i) == link => Complex::one(),
        (false, false) => corner,
        _ => Complex::zero(),
    }))
}
