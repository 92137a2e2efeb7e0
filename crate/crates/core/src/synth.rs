//! Seeded random matrices `A = T J T^{-1}` with known Jordan structure, and random spectra.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{AnnihilatorPolynomial, Complex, Matrix, C64};

/// Shape of the random test suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub max_dim: usize,
    pub max_block: usize,
    pub min_magnitude: f64,
    pub max_magnitude: f64,
    /// Minimum distance between distinct eigenvalues.
    pub min_separation: f64,
    /// Bound on the infinity-norm condition number of `T`.
    pub max_cond: f64,
    /// Eigenvalue arguments stay this far from the negative real axis.
    pub arg_margin: f64,
    /// Probability that a new block reuses an existing eigenvalue.
    pub reuse_probability: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            max_dim: 8,
            max_block: 3,
            min_magnitude: 0.5,
            max_magnitude: 4.0,
            min_separation: 0.3,
            max_cond: 100.0,
            arg_margin: 0.2,
            reuse_probability: 0.3,
        }
    }
}

/// A test matrix together with everything needed to check flows of it.
#[derive(Debug, Clone)]
pub struct SyntheticMatrix {
    pub a: Matrix<f64>,
    pub t: Matrix<f64>,
    /// Jordan blocks `(lambda, size)` in the order they appear in `J`.
    pub blocks: Vec<(C64, usize)>,
    /// Distinct eigenvalues with the size of their largest block.
    pub minimal_roots: Vec<(C64, usize)>,
    pub cond_t: f64,
}

impl SyntheticMatrix {
    pub fn minimal_polynomial(&self) -> AnnihilatorPolynomial<f64> {
        AnnihilatorPolynomial::from_roots(&self.minimal_roots).expect("nonempty spectrum")
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// Grid for eigenvalues and similarity entries. Keeping every input dyadic with few bits makes
/// `T J T^{-1}` exact in `f64`, so the stored matrix really has the advertised Jordan form.
const EIGEN_GRID: f64 = 1024.0;

fn snap(x: f64, grid: f64) -> f64 {
    (x * grid).round() / grid
}

/// A fresh eigenvalue at least `min_separation` away from all of `existing`.
pub fn random_eigenvalue(rng: &mut impl Rng, existing: &[C64], cfg: &SuiteConfig) -> C64 {
    let limit = std::f64::consts::PI - cfg.arg_margin;
    loop {
        let polar = Complex::from_polar(
            rng.gen_range(cfg.min_magnitude..=cfg.max_magnitude),
            rng.gen_range(-limit..limit),
        );
        let lambda = Complex::new(snap(polar.re, EIGEN_GRID), snap(polar.im, EIGEN_GRID));
        let r = lambda.norm();
        if r < cfg.min_magnitude || r > cfg.max_magnitude || lambda.arg().abs() > limit {
            continue;
        }
        if existing
            .iter()
            .all(|&e| (e - lambda).norm() >= cfg.min_separation)
        {
            return lambda;
        }
    }
}

fn inf_norm(m: &Matrix<f64>) -> f64 {
    (0..m.dim())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Unit triangular matrix with Gaussian entries in quarter steps on one side of the diagonal.
fn unit_triangular(rng: &mut impl Rng, n: usize, lower: bool) -> Matrix<f64> {
    let mut quarter = || f64::from(rng.gen_range(-2i8..=2)) / 4.0;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let off = if lower { j < i } else { j > i };
            data.push(match (i == j, off) {
                (true, _) => Complex::new(1.0, 0.0),
                (false, true) => Complex::new(quarter(), quarter()),
                _ => Complex::new(0.0, 0.0),
            });
        }
    }
    Matrix::new(n, data).expect("finite entries")
}

/// Inverse of a unit lower triangular matrix by forward substitution.
fn invert_unit_lower(l: &Matrix<f64>) -> Matrix<f64> {
    let n = l.dim();
    let mut inv = Matrix::identity(n);
    for j in 0..n {
        for i in j + 1..n {
            let mut acc = Complex::new(0.0, 0.0);
            for k in j..i {
                acc += l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -acc;
        }
    }
    inv
}

/// Random `T = P L U` with `‖T‖_inf ‖T^{-1}‖_inf <= max_cond`, returned with `T^{-1}` and the
/// condition. The inverse is exact: it is checked to reproduce the identity bit for bit.
fn random_similarity(
    rng: &mut impl Rng,
    n: usize,
    cfg: &SuiteConfig,
) -> (Matrix<f64>, Matrix<f64>, f64) {
    loop {
        let l = unit_triangular(rng, n, true);
        let u = unit_triangular(rng, n, false);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let lu = &l * &u;
        let t = Matrix::from_fn(n, |i, j| lu[(perm[i], j)]);
        let u_inv = invert_unit_lower(&u.transpose()).transpose();
        let lu_inv = &u_inv * &invert_unit_lower(&l);
        let inv = Matrix::from_fn(n, |i, j| {
            lu_inv[(i, perm.iter().position(|&r| r == j).expect("permutation"))]
        });
        if &t * &inv != Matrix::identity(n) {
            continue;
        }
        let cond = inf_norm(&t) * inf_norm(&inv);
        if cond <= cfg.max_cond {
            return (t, inv, cond);
        }
    }
}

pub fn random_jordan_matrix(rng: &mut impl Rng, cfg: &SuiteConfig) -> SyntheticMatrix {
    let n = rng.gen_range(1..=cfg.max_dim);
    let mut blocks: Vec<(C64, usize)> = Vec::new();
    let mut distinct: Vec<C64> = Vec::new();
    let mut filled = 0;
    while filled < n {
        let size = rng.gen_range(1..=cfg.max_block.min(n - filled));
        let lambda = if !distinct.is_empty() && rng.gen_bool(cfg.reuse_probability) {
            distinct[rng.gen_range(0..distinct.len())]
        } else {
            let l = random_eigenvalue(rng, &distinct, cfg);
            distinct.push(l);
            l
        };
        blocks.push((lambda, size));
        filled += size;
    }
    let minimal_roots = distinct
        .iter()
        .map(|&l| {
            let largest = blocks
                .iter()
                .filter(|b| b.0 == l)
                .map(|b| b.1)
                .max()
                .unwrap();
            (l, largest)
        })
        .collect();
    let j = blocks
        .iter()
        .map(|&(l, s)| Matrix::jordan_block(l, s))
        .reduce(|acc, b| acc.direct_sum(&b))
        .expect("at least one block");
    let (t, cond_t, a) = loop {
        let (t, t_inv, cond_t) = random_similarity(rng, n, cfg);
        let a = &(&t * &j) * &t_inv;
        // Any rounding would break this identity; resample rather than keep a perturbed matrix.
        if &a * &t == &t * &j {
            break (t, cond_t, a);
        }
    };
    SyntheticMatrix {
        a,
        t,
        blocks,
        minimal_roots,
        cond_t,
    }
}

/// `count` matrices from a ChaCha stream seeded with `seed`.
pub fn suite(seed: u64, count: usize, cfg: &SuiteConfig) -> Vec<SyntheticMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_jordan_matrix(&mut rng, cfg))
        .collect()
}

/// Random `(lambda, multiplicity)` pairs with total degree at most `max_degree`.
pub fn random_spectrum(
    rng: &mut impl Rng,
    max_degree: usize,
    max_multiplicity: usize,
    cfg: &SuiteConfig,
) -> Vec<(C64, usize)> {
    let p = rng.gen_range(1..=max_degree);
    let mut out: Vec<(C64, usize)> = Vec::new();
    let mut total = 0;
    while total < p {
        let m = rng.gen_range(1..=max_multiplicity.min(p - total));
        let existing: Vec<C64> = out.iter().map(|x| x.0).collect();
        out.push((random_eigenvalue(rng, &existing, cfg), m));
        total += m;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_respects_its_shape() {
        let cfg = SuiteConfig::default();
        for m in suite(7, 30, &cfg) {
            assert!(m.dim() >= 1 && m.dim() <= cfg.max_dim);
            assert!(m.cond_t <= cfg.max_cond);
            assert!(m.blocks.iter().all(|b| b.1 <= cfg.max_block));
            assert_eq!(m.blocks.iter().map(|b| b.1).sum::<usize>(), m.dim());
            let q = m.minimal_polynomial();
            assert!(crate::validate_relation(&m.a, &q) <= 1e-9);
        }
    }

    #[test]
    fn suite_is_reproducible() {
        let cfg = SuiteConfig::default();
        let a = suite(3, 5, &cfg);
        let b = suite(3, 5, &cfg);
        assert!(a.iter().zip(&b).all(|(x, y)| x.a == y.a));
    }
}
