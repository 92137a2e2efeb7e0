//! Structured reports for `analyze`, `formula` and `verify`.

use std::fmt::Write as _;

use cflow::{MuFunctions, Relation64, C64};
use serde::Serialize;

use crate::io::{complex, num};

/// Adding `0.0` turns `-0.0` into `0.0`.
fn pair(z: C64) -> [f64; 2] {
    [z.re + 0.0, z.im + 0.0]
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationInfo {
    /// "supplied", "minimal polynomial" or "characteristic polynomial".
    pub source: String,
    pub polynomial: String,
    pub degree: usize,
    /// `(c_{p-1}, ..., c_0)`
    pub coefficients: Vec<[f64; 2]>,
    /// `‖Q(A)‖` relative to the size of the powers of `A`; absent without a matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl RelationInfo {
    pub fn new(q: &Relation64, source: &str, residual: Option<f64>) -> Self {
        Self {
            source: source.to_string(),
            polynomial: q.to_string(),
            degree: q.degree(),
            coefficients: q.relation_vector().into_iter().map(pair).collect(),
            residual,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterInfo {
    /// 1-based, as accepted by `--branch-offset`.
    pub index: usize,
    pub lambda: [f64; 2],
    pub multiplicity: usize,
    pub log: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct MuValues {
    pub z: [f64; 2],
    pub method: String,
    pub mu: Vec<[f64; 2]>,
}

/// Everything behind `mu_i(z) = sum_j e_ij f_j(z)`.
#[derive(Debug, Clone, Serialize)]
pub struct FormulaReport {
    pub relation: RelationInfo,
    pub spectrum: Vec<ClusterInfo>,
    /// `f_1, ..., f_p` in the order used by the table.
    pub basis: Vec<String>,
    /// Row `i` holds `e_i1, ..., e_ip`.
    pub table: Vec<Vec<[f64; 2]>>,
    pub condition_estimate: f64,
    pub ill_conditioned: bool,
    /// Row `i` holds the rendered terms of `mu_i(z)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<MuValues>,
}

impl FormulaReport {
    pub fn new(mu: &MuFunctions<f64>, relation: RelationInfo) -> Self {
        let basis = mu.basis();
        let spectrum = basis
            .spectrum()
            .clusters()
            .iter()
            .enumerate()
            .map(|(i, c)| ClusterInfo {
                index: i + 1,
                lambda: pair(c.lambda),
                multiplicity: c.multiplicity,
                log: pair(c.log_lambda),
            })
            .collect();
        let p = basis.len();
        let coeffs = mu.coefficients();
        Self {
            relation,
            spectrum,
            basis: basis.terms().iter().map(|t| t.to_string()).collect(),
            table: (0..p)
                .map(|i| (0..p).map(|j| pair(coeffs.e(i, j))).collect())
                .collect(),
            condition_estimate: coeffs.condition_estimate(),
            ill_conditioned: coeffs.ill_conditioned(),
            terms: None,
            values: Vec::new(),
        }
    }

    /// Fills in the `p^2` terms `e_ij * f_j(z)`, optionally dropping exact zeros.
    pub fn with_terms(mut self, elide_zeros: bool) -> Self {
        let terms = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.basis)
                    .filter(|([re, im], _)| !(elide_zeros && *re == 0.0 && *im == 0.0))
                    .map(|(&[re, im], f)| format!("({})*{f}", complex(C64::new(re, im))))
                    .collect()
            })
            .collect();
        self.terms = Some(terms);
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let r = &self.relation;
        let _ = writeln!(s, "relation ({}): {} = 0", r.source, r.polynomial);
        let cs: Vec<String> = r
            .coefficients
            .iter()
            .map(|&[a, b]| complex(C64::new(a, b)))
            .collect();
        let names = match r.degree {
            1 => "c_0".to_string(),
            2 => "c_1, c_0".to_string(),
            p => format!("c_{}, ..., c_0", p - 1),
        };
        let _ = writeln!(s, "  c = ({names}) = ({})", cs.join(", "));
        if let Some(res) = r.residual {
            let _ = writeln!(s, "  residual |Q(A)| = {}", num(res));
        }
        let _ = writeln!(s, "p = {}", r.degree);
        let _ = writeln!(s, "spectrum:");
        for c in &self.spectrum {
            let _ = writeln!(
                s,
                "  lambda_{} = {}  multiplicity {}  log = {}",
                c.index,
                complex(C64::new(c.lambda[0], c.lambda[1])),
                c.multiplicity,
                complex(C64::new(c.log[0], c.log[1]))
            );
        }
        let _ = writeln!(s, "basis:");
        for (k, f) in self.basis.iter().enumerate() {
            let _ = writeln!(s, "  f_{}(z) = {f}", k + 1);
        }
        let _ = writeln!(s, "coefficients e_ij (mu_i = sum_j e_ij f_j):");
        for (i, row) in self.table.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|&[a, b]| complex(C64::new(a, b))).collect();
            let _ = writeln!(s, "  mu_{}: {}", i + 1, cells.join("  "));
        }
        let flag = if self.ill_conditioned {
            " (ill-conditioned)"
        } else {
            ""
        };
        let _ = writeln!(
            s,
            "condition estimate: {}{flag}",
            num(self.condition_estimate)
        );
        if let Some(terms) = &self.terms {
            let _ = writeln!(s, "formula:");
            for (i, row) in terms.iter().enumerate() {
                let body = if row.is_empty() {
                    "0".to_string()
                } else {
                    row.join(" + ")
                };
                let _ = writeln!(s, "  mu_{}(z) = {body}", i + 1);
            }
        }
        for v in &self.values {
            let _ = writeln!(
                s,
                "values at z = {} ({}):",
                complex(C64::new(v.z[0], v.z[1])),
                v.method
            );
            for (i, &[a, b]) in v.mu.iter().enumerate() {
                let _ = writeln!(s, "  mu_{} = {}", i + 1, complex(C64::new(a, b)));
            }
        }
        s
    }
}

impl MuValues {
    pub fn new(z: C64, method: &str, mu: &[C64]) -> Self {
        Self {
            z: pair(z),
            method: method.to_string(),
            mu: mu.iter().copied().map(pair).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub relation: RelationInfo,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "relation ({}): {} = 0",
            self.relation.source, self.relation.polynomial
        );
        let _ = writeln!(s, "samples: {} (seed {})", self.samples, self.seed);
        for c in &self.checks {
            let verdict = if c.pass { "ok" } else { "FAIL" };
            let _ = writeln!(
                s,
                "  {:<28} {}  <= {:e}  {verdict}",
                c.name,
                num(c.residual),
                c.threshold
            );
        }
        let _ = writeln!(
            s,
            "{}",
            if self.pass {
                "verification passed"
            } else {
                "verification FAILED"
            }
        );
        s
    }
}
