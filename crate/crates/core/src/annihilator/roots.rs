//! Simultaneous root iteration (Aberth-Ehrlich) with multiplicity consolidation.

use num_complex::Complex;
use num_traits::Zero;

use crate::annihilator::polynomial::horner;
use crate::annihilator::{transitive_groups, AnnihilatorPolynomial};
use crate::error::{FlowError, Result};
use crate::numeric::{to_f64, Real, ToleranceConfig};

pub const MAX_SWEEPS: usize = 500;

/// Roots of a relation, repeated according to multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<T> {
    pub roots: Vec<Complex<T>>,
    /// `|Q(root)|` for each entry of `roots`.
    pub residuals: Vec<T>,
    pub sweeps: usize,
}

/// Upper bound on the rounding error of evaluating `sum a_k x^k` by Horner's rule.
fn evaluation_noise<T: Real>(a: &[Complex<T>], x: Complex<T>) -> T {
    let r = x.norm();
    let magnitude = a.iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm());
    T::lit(4.0) * T::from_count(a.len()) * T::epsilon() * magnitude
}

fn derivative<T: Real>(a: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * T::from_count(k))
        .collect()
}

fn aberth<T: Real>(
    q: &AnnihilatorPolynomial<T>,
    tol: &ToleranceConfig<T>,
) -> Result<(Vec<Complex<T>>, usize)> {
    let a = q.monic_coefficients();
    let da = derivative(&a);
    let p = q.degree();
    let radius = T::one() + q.coeffs().iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let offset = T::lit(0.4);
    let mut z: Vec<Complex<T>> = (0..p)
        .map(|k| {
            let angle = T::TAU() * T::from_count(k) / T::from_count(p) + offset;
            Complex::from_polar(radius, angle)
        })
        .collect();
    let mut frozen = vec![false; p];
    let mut last_step = T::infinity();

    for sweep in 1..=MAX_SWEEPS {
        let mut max_step = T::zero();
        for k in 0..p {
            if frozen[k] {
                continue;
            }
            let value = horner(&a, z[k]);
            if value.norm() <= evaluation_noise(&a, z[k]) {
                frozen[k] = true;
                continue;
            }
            let slope = horner(&da, z[k]);
            if slope.is_zero() {
                // Stationary point: nudge off it and let the next sweep continue.
                z[k] += Complex::new(tol.root_tol, tol.root_tol) * radius;
                max_step = T::infinity();
                continue;
            }
            let newton = value / slope;
            let repulsion = (0..p)
                .filter(|&j| j != k)
                .map(|j| z[k] - z[j])
                .filter(|d| !d.is_zero())
                .fold(Complex::zero(), |acc, d| acc + d.inv());
            let step = newton / (Complex::new(T::one(), T::zero()) - newton * repulsion);
            z[k] -= step;
            max_step = max_step.max(step.norm() / T::one().max(z[k].norm()));
        }
        last_step = max_step;
        if frozen.iter().all(|&f| f) || max_step <= tol.root_tol {
            return Ok((z, sweep));
        }
    }
    Err(FlowError::NonConvergence {
        sweeps: MAX_SWEEPS,
        last_step: to_f64(last_step),
    })
}

/// Tries to confirm that the roots in `group` approximate one multiple root.
///
/// The centroid is refined by Newton's method on `Q^{(m-1)}`, which has a simple zero at an
/// `m`-fold root, and accepted when the Taylor coefficients of order `< m` all vanish to
/// `cluster_tol` relative to their natural size.
fn confirm_multiple_root<T: Real>(
    q: &AnnihilatorPolynomial<T>,
    group: &[Complex<T>],
    radius: T,
    tol: &ToleranceConfig<T>,
) -> Option<Complex<T>> {
    let m = group.len();
    let centroid = group.iter().fold(Complex::zero(), |s, &x| s + x) / T::from_count(m);
    let mut c = centroid;
    for _ in 0..8 {
        let t = q.taylor(c, m + 1);
        let slope = t[m] * T::from_count(m);
        if slope.is_zero() {
            break;
        }
        let step = t[m - 1] / slope;
        c -= step;
        if step.norm() <= T::epsilon() * T::one().max(c.norm()) {
            break;
        }
    }
    if (c - centroid).norm() > radius {
        return None;
    }
    let t = q.taylor(c, m);
    let vanishes = (0..m).all(|k| t[k].norm() <= tol.cluster_tol * q.taylor_scale(c, k));
    vanishes.then_some(c)
}

fn consolidate<T: Real>(
    q: &AnnihilatorPolynomial<T>,
    roots: &mut [Complex<T>],
    members: &[usize],
    radius: T,
    tol: &ToleranceConfig<T>,
) {
    let points: Vec<Complex<T>> = members.iter().map(|&i| roots[i]).collect();
    for group in transitive_groups(&points, radius) {
        if group.len() < 2 {
            continue;
        }
        let idx: Vec<usize> = group.iter().map(|&g| members[g]).collect();
        let values: Vec<Complex<T>> = idx.iter().map(|&i| roots[i]).collect();
        let scale = T::one().max(values[0].norm());
        if let Some(c) = confirm_multiple_root(q, &values, radius * scale, tol) {
            for &i in &idx {
                roots[i] = c;
            }
        } else {
            let finer = radius / T::lit(10.0);
            if finer >= tol.cluster_tol {
                consolidate(q, roots, &idx, finer, tol);
            }
        }
    }
}

/// All `p` roots of `q`, repeated by multiplicity.
///
/// Aberth-Ehrlich iteration from `p` points equally spaced on the circle of radius
/// `1 + max |c_i|`, stopping once every step is at most `root_tol` or every residual has
/// reached rounding level. Roots that numerically form one multiple root are then replaced
/// by a single refined value, so repeated roots come back coincident.
pub fn find_roots<T: Real>(
    q: &AnnihilatorPolynomial<T>,
    tol: &ToleranceConfig<T>,
) -> Result<RootSet<T>> {
    tol.validate()?;
    let (mut roots, sweeps) = if q.degree() == 1 {
        (vec![q.coeffs()[0]], 0)
    } else {
        aberth(q, tol)?
    };
    let all: Vec<usize> = (0..roots.len()).collect();
    let coarse = tol.cluster_tol.sqrt().sqrt();
    consolidate(q, &mut roots, &all, coarse, tol);
    if q.coeffs().iter().all(|c| c.im.is_zero()) {
        // Real polynomials: the iteration starts off the axis and leaves rounding-level imaginary
        // parts on real roots.
        for r in roots.iter_mut() {
            if r.im.abs() <= tol.root_tol * T::one().max(r.norm()) {
                r.im = T::zero();
            }
        }
    }
    let residuals = roots.iter().map(|&r| q.eval(r).norm()).collect();
    Ok(RootSet {
        roots,
        residuals,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn sorted(mut v: Vec<C>) -> Vec<C> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn real_roots_of_real_polynomials_are_real() {
        let q = AnnihilatorPolynomial::from_relation_vector(&[c(5.0, 0.0), c(-6.0, 0.0)]).unwrap();
        let r = find_roots(&q, &ToleranceConfig::default()).unwrap();
        assert!(r.roots.iter().all(|x| x.im == 0.0), "{:?}", r.roots);
        let q = AnnihilatorPolynomial::from_relation_vector(&[c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let mut r = find_roots(&q, &ToleranceConfig::default()).unwrap().roots;
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14 && (r[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn linear() {
        let q = AnnihilatorPolynomial::new(vec![c(5.0, 0.0)]).unwrap();
        let r = find_roots(&q, &ToleranceConfig::default()).unwrap();
        assert_eq!(r.roots, vec![c(5.0, 0.0)]);
    }

    #[test]
    fn plus_minus_one() {
        let q = AnnihilatorPolynomial::from_relation_vector(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = sorted(find_roots(&q, &ToleranceConfig::default()).unwrap().roots);
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn double_root_comes_back_coincident() {
        let tol = ToleranceConfig::default();
        let q = AnnihilatorPolynomial::from_relation_vector(&[c(2.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let r = find_roots(&q, &tol).unwrap();
        for &root in &r.roots {
            assert!((root - c(1.0, 0.0)).norm() <= tol.cluster_tol);
            // Oracle: a double root zeroes both Q and Q'.
            let t = q.taylor(root, 2);
            assert!(t[0].norm() < 1e-14 && t[1].norm() < 1e-7);
        }
    }

    #[test]
    fn triple_complex_root_with_neighbours() {
        let tol = ToleranceConfig::default();
        let lambda = c(1.2, -0.7);
        let q =
            AnnihilatorPolynomial::from_roots(&[(lambda, 3), (c(-2.0, 0.5), 1), (c(0.6, 0.0), 2)])
                .unwrap();
        let r = find_roots(&q, &tol).unwrap();
        let near = r
            .roots
            .iter()
            .filter(|&&z| (z - lambda).norm() <= tol.cluster_tol)
            .count();
        assert_eq!(near, 3);
        let near = r
            .roots
            .iter()
            .filter(|&&z| (z - c(0.6, 0.0)).norm() <= tol.cluster_tol)
            .count();
        assert_eq!(near, 2);
    }

    #[test]
    fn close_simple_roots_stay_separate() {
        let tol = ToleranceConfig::default();
        let q = AnnihilatorPolynomial::from_roots(&[
            (c(1.0, 0.0), 1),
            (c(1.01, 0.0), 1),
            (c(3.0, 0.0), 1),
        ])
        .unwrap();
        let r = sorted(find_roots(&q, &tol).unwrap().roots);
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.01, 0.0)).norm() < 1e-12);
    }
}
