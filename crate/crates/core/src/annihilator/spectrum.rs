use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::Zero;

use crate::basis::branch_log;
use crate::error::{FlowError, Result};
use crate::numeric::{to_f64, Real, ToleranceConfig};

/// One eigenvalue of the relation with its multiplicity and fixed logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster<T> {
    pub lambda: Complex<T>,
    pub multiplicity: usize,
    /// The chosen `log(lambda)`; every flow built from this spectrum uses it.
    pub log_lambda: Complex<T>,
}

/// Distinct roots of a relation with multiplicities and branch-fixed logarithms.
///
/// Clusters are kept ordered by descending `|lambda|`, then ascending `arg lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    clusters: Vec<Cluster<T>>,
}

fn merge_radius<T: Real>(a: Complex<T>, b: Complex<T>, cluster_tol: T) -> T {
    cluster_tol * T::one().max(a.norm()).max(b.norm())
}

/// Connected components of the graph joining points closer than `radius * max(1, |x|)`.
pub(crate) fn transitive_groups<T: Real>(points: &[Complex<T>], radius: T) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..points.len()).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() <= merge_radius(points[i], points[j], radius) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of_group: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        let r = find(&mut label, i);
        match root_of_group.iter().position(|&g| g == r) {
            Some(k) => groups[k].push(i),
            None => {
                root_of_group.push(r);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

impl<T: Real> Spectrum<T> {
    /// Builds a spectrum from explicit `(lambda, multiplicity)` pairs with principal logarithms.
    ///
    /// Values within `cluster_tol` of the negative real axis are placed on it, so that their
    /// logarithm takes imaginary part `+pi` rather than an arbitrary side of the cut.
    pub fn from_clusters(pairs: &[(Complex<T>, usize)], tol: &ToleranceConfig<T>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(FlowError::InvalidInput(
                "spectrum needs at least one eigenvalue".into(),
            ));
        }
        let mut clusters = Vec::with_capacity(pairs.len());
        for &(lambda, multiplicity) in pairs {
            if multiplicity == 0 {
                return Err(FlowError::InvalidInput(
                    "multiplicities must be positive".into(),
                ));
            }
            let magnitude = lambda.norm();
            if magnitude <= tol.cluster_tol {
                return Err(FlowError::ZeroEigenvalue {
                    magnitude: to_f64(magnitude),
                });
            }
            let mut lambda = lambda;
            if lambda.re < T::zero() && lambda.im.abs() <= tol.cluster_tol * magnitude {
                lambda.im = T::zero();
            }
            clusters.push(Cluster {
                lambda,
                multiplicity,
                log_lambda: branch_log(lambda)?,
            });
        }
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let (a, b) = (clusters[i].lambda, clusters[j].lambda);
                if (a - b).norm() <= merge_radius(a, b, tol.cluster_tol) {
                    return Err(FlowError::InvalidInput(format!(
                        "eigenvalues {a} and {b} are closer than the clustering radius"
                    )));
                }
            }
        }
        clusters.sort_by(|a, b| {
            let by_magnitude = b.lambda.norm().partial_cmp(&a.lambda.norm());
            let by_argument = a.lambda.arg().partial_cmp(&b.lambda.arg());
            by_magnitude
                .unwrap_or(Ordering::Equal)
                .then(by_argument.unwrap_or(Ordering::Equal))
        });
        Ok(Self { clusters })
    }

    /// Moves cluster `index` (0-based) to the branch `log(lambda) + 2 pi i k`.
    pub fn with_branch_offset(mut self, index: usize, k: i64) -> Result<Self> {
        let m = self.clusters.len();
        let cluster = self.clusters.get_mut(index).ok_or_else(|| {
            FlowError::InvalidInput(format!(
                "branch offset for cluster {} but only {m} clusters",
                index + 1
            ))
        })?;
        let shift = T::from_i64(k).expect("branch offset representable") * T::TAU();
        cluster.log_lambda.im += shift;
        Ok(self)
    }

    pub fn clusters(&self) -> &[Cluster<T>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Sum of multiplicities, the degree of the relation.
    pub fn degree(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).sum()
    }
}

/// Groups roots lying within `cluster_tol` of each other (transitively) into clusters.
///
/// Each cluster is represented by its centroid and has the group size as multiplicity.
pub fn cluster_roots<T: Real>(
    roots: &[Complex<T>],
    tol: &ToleranceConfig<T>,
) -> Result<Spectrum<T>> {
    if roots.is_empty() {
        return Err(FlowError::InvalidInput("no roots to cluster".into()));
    }
    if let Some(r) = roots.iter().find(|r| r.norm() <= tol.cluster_tol) {
        return Err(FlowError::ZeroEigenvalue {
            magnitude: to_f64(r.norm()),
        });
    }
    let pairs: Vec<(Complex<T>, usize)> = transitive_groups(roots, tol.cluster_tol)
        .into_iter()
        .map(|g| {
            let sum = g.iter().fold(Complex::zero(), |s, &i| s + roots[i]);
            (sum / T::from_count(g.len()), g.len())
        })
        .collect();
    Spectrum::from_clusters(&pairs, tol)
}
