use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::annihilator::Spectrum;
use crate::error::{FlowError, Result};
use crate::numeric::Real;

/// Falling-factorial polynomial `g_j(z) = z (z-1) ... (z-j+1) / j!`, with `g_0 = 1`.
///
/// At a nonnegative integer `k` this is the binomial coefficient `C(k, j)`, zero when `k < j`.
pub fn g<T: Real>(j: usize, z: Complex<T>) -> Complex<T> {
    let mut product = Complex::one();
    let mut factorial = T::one();
    for i in 0..j {
        product *= z - T::from_count(i);
        factorial *= T::from_count(i + 1);
    }
    product / factorial
}

/// Principal logarithm, imaginary part in `(-pi, pi]`.
pub fn branch_log<T: Real>(lambda: Complex<T>) -> Result<Complex<T>> {
    if lambda.is_zero() {
        return Err(FlowError::ZeroEigenvalue { magnitude: 0.0 });
    }
    let modulus = lambda.norm().ln();
    // A negative real with a signed-zero imaginary part must still land on +pi.
    if lambda.im.is_zero() && lambda.re < T::zero() {
        return Ok(Complex::new(modulus, T::PI()));
    }
    Ok(Complex::new(modulus, lambda.im.atan2(lambda.re)))
}

/// `lambda^z = exp(z log lambda)` on the principal branch.
pub fn scalar_flow<T: Real>(lambda: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    Ok((z * branch_log(lambda)?).exp())
}

/// `g_j(z) lambda^{z-j}` with `lambda^{z-j}` taken as `exp((z-j) log lambda)` in one step.
pub(crate) fn shifted_flow<T: Real>(
    log_lambda: Complex<T>,
    shift: usize,
    z: Complex<T>,
) -> Complex<T> {
    g(shift, z) * ((z - T::from_count(shift)) * log_lambda).exp()
}

/// The term `g_shift(z) lambda_cluster^{z - shift}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisTerm {
    /// 0-based index into the spectrum's clusters.
    pub cluster: usize,
    pub shift: usize,
}

impl fmt::Display for BasisTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.cluster + 1;
        match self.shift {
            0 => write!(f, "lambda_{k}^z"),
            j => write!(f, "g_{j}(z)*lambda_{k}^(z-{j})"),
        }
    }
}

/// Ordered list `f_1, ..., f_p` of the analytic functions a flow is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisDescriptor<T> {
    terms: Vec<BasisTerm>,
    spectrum: Spectrum<T>,
}

impl<T: Real> BasisDescriptor<T> {
    pub fn terms(&self) -> &[BasisTerm] {
        &self.terms
    }

    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.spectrum
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `f_k(z)` for a single term.
    pub fn eval_term(&self, k: usize, z: Complex<T>) -> Complex<T> {
        let term = self.terms[k];
        let log_lambda = self.spectrum.clusters()[term.cluster].log_lambda;
        shifted_flow(log_lambda, term.shift, z)
    }
}

/// One term per `(cluster, shift)` with `shift < multiplicity`, in cluster order then by shift.
///
/// Cluster order is the spectrum's (descending `|lambda|`, then ascending argument).
pub fn build_basis<T: Real>(spectrum: &Spectrum<T>) -> BasisDescriptor<T> {
    let terms = spectrum
        .clusters()
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            (0..c.multiplicity).map(move |j| BasisTerm {
                cluster: i,
                shift: j,
            })
        })
        .collect();
    BasisDescriptor {
        terms,
        spectrum: spectrum.clone(),
    }
}

/// `(f_1(z), ..., f_p(z))`
pub fn eval_basis<T: Real>(basis: &BasisDescriptor<T>, z: Complex<T>) -> Vec<Complex<T>> {
    (0..basis.len()).map(|k| basis.eval_term(k, z)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ToleranceConfig;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    /// Generalized binomial coefficient in exact integer arithmetic.
    fn binomial_oracle(k: i64, j: u32) -> i128 {
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for i in 0..j as i64 {
            num *= (k - i) as i128;
            den *= (i + 1) as i128;
        }
        num / den
    }

    #[test]
    fn g_examples() {
        assert_eq!(g(0, c(3.7, -1.2)), c(1.0, 0.0));
        assert_eq!(g(2, c(4.0, 0.0)), c(6.0, 0.0));
        assert_eq!(g(3, c(1.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn g_is_binomial_on_integer_grid() {
        for j in 0..=10u32 {
            for k in -5i64..=10 {
                let expected = binomial_oracle(k, j) as f64;
                let got = g(j as usize, c(k as f64, 0.0));
                let err = (got - c(expected, 0.0)).norm();
                assert!(
                    err <= 1e-12 * expected.abs().max(1.0),
                    "g({j},{k}) = {got}, want {expected}"
                );
            }
        }
    }

    #[test]
    fn log_examples() {
        assert_eq!(branch_log(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((branch_log(c(std::f64::consts::E, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(
            branch_log(c(-1.0, 0.0)).unwrap(),
            c(0.0, std::f64::consts::PI)
        );
        assert_eq!(
            branch_log(c(-1.0, -0.0)).unwrap(),
            c(0.0, std::f64::consts::PI)
        );
        assert!(matches!(
            branch_log(c(0.0, 0.0)),
            Err(FlowError::ZeroEigenvalue { .. })
        ));
    }

    #[test]
    fn scalar_flow_examples() {
        let lambda = c(0.3, -2.0);
        assert_eq!(scalar_flow(lambda, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((scalar_flow(lambda, c(1.0, 0.0)).unwrap() - lambda).norm() < 1e-15);
        assert!((scalar_flow(c(4.0, 0.0), c(0.5, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!((scalar_flow(c(-1.0, 0.0), c(0.5, 0.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!(scalar_flow(c(0.0, 0.0), c(0.5, 0.0)).is_err());
    }

    fn spectrum(pairs: &[(C, usize)]) -> Spectrum<f64> {
        Spectrum::from_clusters(pairs, &ToleranceConfig::default()).unwrap()
    }

    #[test]
    fn basis_layouts() {
        let b = build_basis(&spectrum(&[(c(5.0, 0.0), 1)]));
        assert_eq!(
            b.terms(),
            &[BasisTerm {
                cluster: 0,
                shift: 0
            }]
        );

        let b = build_basis(&spectrum(&[(c(2.0, 0.0), 2)]));
        assert_eq!(
            b.terms(),
            &[
                BasisTerm {
                    cluster: 0,
                    shift: 0
                },
                BasisTerm {
                    cluster: 0,
                    shift: 1
                }
            ]
        );
        assert_eq!(b.terms()[1].to_string(), "g_1(z)*lambda_1^(z-1)");

        let b = build_basis(&spectrum(&[(c(2.0, 0.0), 1), (c(3.0, 0.0), 1)]));
        assert_eq!(b.spectrum().clusters()[0].lambda, c(3.0, 0.0));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn basis_values() {
        let b = build_basis(&spectrum(&[(c(2.0, 0.0), 2), (c(-0.5, 1.0), 1)]));
        let at_zero = eval_basis(&b, c(0.0, 0.0));
        // Shift-0 terms are lambda^0 = 1; the shift-1 term carries g_1(0) = 0.
        assert_eq!(at_zero[0], c(1.0, 0.0));
        assert_eq!(at_zero[1], c(0.0, 0.0));
        assert!((at_zero[2] - c(1.0, 0.0)).norm() < 1e-15);

        let b = build_basis(&spectrum(&[(c(2.0, 0.0), 2)]));
        let v = eval_basis(&b, c(3.0, 0.0));
        assert!((v[0] - c(8.0, 0.0)).norm() < 1e-13);
        assert!((v[1] - c(12.0, 0.0)).norm() < 1e-13);

        let b = build_basis(&spectrum(&[(c(5.0, 0.0), 1)]));
        assert!((eval_basis(&b, c(-1.0, 0.0))[0] - c(0.2, 0.0)).norm() < 1e-16);
    }

    fn complex_in(r: f64) -> impl Strategy<Value = C> {
        (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #[test]
        fn binomial_convolution(z in complex_in(3.0), w in complex_in(3.0)) {
            for k in 0..=10usize {
                let lhs = (0..=k).fold(c(0.0, 0.0), |s, l| s + g(l, z) * g(k - l, w));
                let bound = 1e-10 * (1.0 + z.norm() + w.norm()).powi(k as i32);
                prop_assert!((lhs - g(k, z + w)).norm() <= bound);
            }
        }

        #[test]
        fn scalar_flow_group_law(
            mag in 0.5f64..4.0,
            arg in -3.1f64..3.1,
            z in complex_in(3.0),
            w in complex_in(3.0),
        ) {
            let lambda = C::from_polar(mag, arg);
            let lhs = scalar_flow(lambda, z).unwrap() * scalar_flow(lambda, w).unwrap();
            let rhs = scalar_flow(lambda, z + w).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }
    }
}
