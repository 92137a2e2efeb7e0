use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use crate::annihilator::{
    cluster_roots, find_roots, minimal_polynomial, validate_relation, AnnihilatorPolynomial,
    Spectrum,
};
use crate::basis::{
    build_basis, eval_basis, invert_vandermonde, vandermonde_matrix, BasisDescriptor,
    CoefficientTable,
};
use crate::engine::MatrixFlow;
use crate::error::{FlowError, Result};
use crate::numeric::{
    is_finite, lu_factor, to_f64, LuFactorization, Matrix, Real, ToleranceConfig,
};

const REFINE_STEPS: usize = 2;

/// Knobs for building a flow beyond the tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowOptions<T> {
    pub tol: ToleranceConfig<T>,
    /// Cluster index (0-based, spectrum order) to the number of `2 pi i` added to its logarithm.
    pub branch_offsets: BTreeMap<usize, i64>,
    /// Explicit `(lambda, multiplicity)` pairs, bypassing root finding and clustering.
    pub spectrum: Option<Vec<(Complex<T>, usize)>>,
}

impl<T: Real> Default for FlowOptions<T> {
    fn default() -> Self {
        Self::with_tolerances(ToleranceConfig::default())
    }
}

impl<T: Real> FlowOptions<T> {
    pub fn with_tolerances(tol: ToleranceConfig<T>) -> Self {
        Self {
            tol,
            branch_offsets: BTreeMap::new(),
            spectrum: None,
        }
    }
}

/// Clustered roots of `q` with the requested branches applied.
pub fn spectrum_of<T: Real>(
    q: &AnnihilatorPolynomial<T>,
    opts: &FlowOptions<T>,
) -> Result<Spectrum<T>> {
    let tol = &opts.tol;
    if q.coeffs()[0].is_zero() {
        return Err(FlowError::ZeroEigenvalue { magnitude: 0.0 });
    }
    let mut spectrum = match &opts.spectrum {
        Some(pairs) => {
            let s = Spectrum::from_clusters(pairs, tol)?;
            if s.degree() != q.degree() {
                return Err(FlowError::InvalidInput(format!(
                    "multiplicities sum to {} but the relation has degree {}",
                    s.degree(),
                    q.degree()
                )));
            }
            s
        }
        None => cluster_roots(&find_roots(q, tol)?.roots, tol)?,
    };
    for (&index, &k) in &opts.branch_offsets {
        spectrum = spectrum.with_branch_offset(index, k)?;
    }
    Ok(spectrum)
}

/// The coefficient functions `mu_1, ..., mu_p` of a relation, independent of any matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MuFunctions<T> {
    relation: AnnihilatorPolynomial<T>,
    basis: BasisDescriptor<T>,
    coeffs: CoefficientTable<T>,
}

impl<T: Real> MuFunctions<T> {
    pub fn from_relation(q: &AnnihilatorPolynomial<T>, opts: &FlowOptions<T>) -> Result<Self> {
        opts.tol.validate()?;
        let spectrum = spectrum_of(q, opts)?;
        let basis = build_basis(&spectrum);
        let coeffs = invert_vandermonde(&vandermonde_matrix(&basis), &opts.tol)?;
        Ok(Self {
            relation: q.clone(),
            basis,
            coeffs,
        })
    }

    /// `mu_i(z) = sum_j e_ij f_j(z)`
    pub fn eval(&self, z: Complex<T>) -> Vec<Complex<T>> {
        self.coeffs.mu(&eval_basis(&self.basis, z))
    }

    /// `‖E‖_max max_k |f_k(z)|`, the magnitude scale of the coefficients at `z`.
    pub fn conditioning(&self, z: Complex<T>) -> T {
        let fmax = eval_basis(&self.basis, z)
            .iter()
            .map(|f| f.norm())
            .fold(T::zero(), T::max);
        self.coeffs.max_norm() * fmax
    }

    pub fn relation(&self) -> &AnnihilatorPolynomial<T> {
        &self.relation
    }

    pub fn basis(&self) -> &BasisDescriptor<T> {
        &self.basis
    }

    pub fn coefficients(&self) -> &CoefficientTable<T> {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.relation.degree()
    }
}

/// Everything needed to evaluate `A^z = sum_i mu_i(z) A^{-i}` at any `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRepresentation<T> {
    mu: MuFunctions<T>,
    neg_powers: Vec<Matrix<T>>,
    a: Matrix<T>,
    lu: LuFactorization<T>,
}

impl<T: Real> FlowRepresentation<T> {
    pub fn p(&self) -> usize {
        self.neg_powers.len()
    }

    pub fn dim(&self) -> usize {
        self.neg_powers[0].dim()
    }

    /// `[A^{-1}, ..., A^{-p}]`
    pub fn neg_powers(&self) -> &[Matrix<T>] {
        &self.neg_powers
    }

    pub fn mu_functions(&self) -> &MuFunctions<T> {
        &self.mu
    }

    pub fn relation(&self) -> &AnnihilatorPolynomial<T> {
        self.mu.relation()
    }

    pub fn basis(&self) -> &BasisDescriptor<T> {
        self.mu.basis()
    }

    pub fn coefficients(&self) -> &CoefficientTable<T> {
        self.mu.coefficients()
    }

    pub fn mu(&self, z: Complex<T>) -> Vec<Complex<T>> {
        self.mu.eval(z)
    }

    pub fn evaluate(&self, z: Complex<T>) -> Result<Matrix<T>> {
        combine(&self.mu(z), &self.neg_powers)
    }

    /// `A^z v`, accumulated as `sum_i mu_i(z) A^{-i} v` with `A^{-i} v` from repeated solves.
    ///
    /// Never forms `A^z`, so large entries of `A^{-i}` that cancel against `v` do no harm.
    pub fn apply(&self, z: Complex<T>, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.dim() {
            return Err(FlowError::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let mut out = vec![Complex::zero(); v.len()];
        let mut current = v.to_vec();
        for w in self.mu(z) {
            current = self.lu.solve_refined_vec(&self.a, &current, REFINE_STEPS);
            for (o, x) in out.iter_mut().zip(&current) {
                *o += w * x;
            }
        }
        if out.iter().all(|x| is_finite(*x)) {
            Ok(out)
        } else {
            Err(FlowError::NonFinite("flow application"))
        }
    }
}

impl<T: Real> MatrixFlow<T> for FlowRepresentation<T> {
    fn dim(&self) -> usize {
        FlowRepresentation::dim(self)
    }

    fn evaluate(&self, z: Complex<T>) -> Result<Matrix<T>> {
        FlowRepresentation::evaluate(self, z)
    }
}

/// `sum_i weights[i] * mats[i]`
pub(crate) fn combine<T: Real>(weights: &[Complex<T>], mats: &[Matrix<T>]) -> Result<Matrix<T>> {
    let mut out = Matrix::zeros(mats[0].dim());
    for (&w, m) in weights.iter().zip(mats) {
        if !w.is_zero() {
            out.add_scaled(w, m);
        }
    }
    out.check_finite("flow evaluation")
}

/// `[A^{-1}, ..., A^{-p}]` from a single factorization of `A`.
pub fn negative_powers<T: Real>(
    a: &Matrix<T>,
    p: usize,
    tol: &ToleranceConfig<T>,
) -> Result<Vec<Matrix<T>>> {
    powers_from(a, &lu_factor(a, tol)?, p)
}

/// Each power is refined against `a`: errors in `A^{-i}` that break the relation are amplified
/// by the cancellation in `sum_i mu_i A^{-i}`.
fn powers_from<T: Real>(
    a: &Matrix<T>,
    lu: &LuFactorization<T>,
    p: usize,
) -> Result<Vec<Matrix<T>>> {
    let mut out: Vec<Matrix<T>> = Vec::with_capacity(p);
    let mut current = Matrix::identity(a.dim());
    for _ in 0..p {
        current = lu.solve_refined(a, &current, REFINE_STEPS)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// Builds the flow of `a` from the relation `q`, or from its minimal polynomial when `q` is `None`.
pub fn build_flow<T: Real>(
    a: &Matrix<T>,
    q: Option<&AnnihilatorPolynomial<T>>,
    tol: &ToleranceConfig<T>,
) -> Result<FlowRepresentation<T>> {
    build_flow_with(a, q, &FlowOptions::with_tolerances(*tol))
}

pub fn build_flow_with<T: Real>(
    a: &Matrix<T>,
    q: Option<&AnnihilatorPolynomial<T>>,
    opts: &FlowOptions<T>,
) -> Result<FlowRepresentation<T>> {
    let tol = &opts.tol;
    tol.validate()?;
    let relation = match q {
        Some(q) => {
            check_relation(a, q, tol)?;
            q.clone()
        }
        None => minimal_polynomial(a, tol)?,
    };
    let mu = MuFunctions::from_relation(&relation, opts)?;
    let lu = lu_factor(a, tol)?;
    let neg_powers = powers_from(a, &lu, relation.degree())?;
    Ok(FlowRepresentation {
        mu,
        neg_powers,
        a: a.clone(),
        lu,
    })
}

pub(crate) fn check_relation<T: Real>(
    a: &Matrix<T>,
    q: &AnnihilatorPolynomial<T>,
    tol: &ToleranceConfig<T>,
) -> Result<()> {
    let residual = validate_relation(a, q);
    if residual <= tol.residual_tol {
        Ok(())
    } else {
        Err(FlowError::RelationInvalid {
            residual: to_f64(residual),
            tolerance: to_f64(tol.residual_tol),
        })
    }
}

pub fn evaluate_flow<T: Real>(rep: &FlowRepresentation<T>, z: Complex<T>) -> Result<Matrix<T>> {
    rep.evaluate(z)
}

pub fn mu_functions<T: Real>(rep: &FlowRepresentation<T>, z: Complex<T>) -> Vec<Complex<T>> {
    rep.mu(z)
}
