use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use cflow::{
    build_flow_with, characteristic_polynomial, check_flow_axioms, minimal_polynomial, power_int,
    validate_relation, CompanionFlow, CompanionMu, FlowError, FlowOptions, FlowRepresentation,
    Matrix64, MatrixFlow, MuFunctions, Relation64, Tolerances64, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{Cli, Command, Common, Method};
use crate::error::CliError;
use crate::io::{num, parse_complex, parse_list, read_matrix, write_matrix};
use crate::report::{Check, FormulaReport, MuValues, RelationInfo, VerifyReport};

/// Pass threshold for every `verify` category.
pub const VERIFY_THRESHOLD: f64 = 1e-8;

/// Runs a parsed command line, printing errors to `err`, and returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::VerifyFailed) {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Pow { matrix, z, common } => pow(&matrix, &z, &common, out, err),
        Command::Analyze { matrix, common } => analyze(&matrix, &common, out, err),
        Command::Verify {
            matrix,
            samples,
            seed,
            z_radius,
            common,
        } => verify(&matrix, samples, seed, z_radius, &common, out, err),
        Command::Formula {
            matrix,
            at,
            elide_zeros,
            common,
        } => formula(
            matrix.as_deref(),
            at.as_deref(),
            elide_zeros,
            &common,
            out,
            err,
        ),
    }
}

fn tolerances(common: &Common) -> Result<Tolerances64, CliError> {
    let mut tol = Tolerances64::default();
    let overrides = [
        (&mut tol.rank_tol, common.tol_rank),
        (&mut tol.root_tol, common.tol_root),
        (&mut tol.cluster_tol, common.tol_cluster),
        (&mut tol.residual_tol, common.tol_residual),
        (&mut tol.cond_warn, common.tol_cond_warn),
    ];
    for (field, value) in overrides {
        if let Some(v) = value {
            *field = v;
        }
    }
    tol.validate()?;
    Ok(tol)
}

fn options(common: &Common) -> Result<FlowOptions<f64>, CliError> {
    let mut opts = FlowOptions::with_tolerances(tolerances(common)?);
    // The command line numbers clusters from 1.
    opts.branch_offsets = common
        .branch_offsets
        .iter()
        .map(|&(index, k)| (index - 1, k))
        .collect::<BTreeMap<_, _>>();
    Ok(opts)
}

/// The relation given by `--relation` or `--monic`, if any.
fn supplied_relation(common: &Common) -> Result<Option<Relation64>, CliError> {
    if let Some(s) = &common.relation {
        return Ok(Some(Relation64::from_relation_vector(&parse_list(s)?)?));
    }
    if let Some(s) = &common.monic {
        let coeffs = parse_list(s)?;
        if coeffs.len() < 2 || coeffs[0] != C64::new(1.0, 0.0) {
            return Err(CliError::Parse(format!(
                "--monic expects the coefficients of a monic polynomial of degree >= 1, leading 1 first; got {s:?}"
            )));
        }
        let c: Vec<C64> = coeffs[1..].iter().map(|x| -x).collect();
        return Ok(Some(Relation64::from_relation_vector(&c)?));
    }
    Ok(None)
}

/// The supplied relation, else the minimal polynomial, else the characteristic polynomial.
fn relation_for(
    a: &Matrix64,
    common: &Common,
    tol: &Tolerances64,
    err: &mut dyn Write,
) -> Result<(Relation64, &'static str), CliError> {
    if let Some(q) = supplied_relation(common)? {
        return Ok((q, "supplied"));
    }
    match minimal_polynomial(a, tol) {
        Ok(q) => Ok((q, "minimal polynomial")),
        Err(e @ (FlowError::AmbiguousDegree { .. } | FlowError::RelationInvalid { .. })) => {
            writeln!(
                err,
                "note: {e}; falling back to the characteristic polynomial"
            )?;
            Ok((characteristic_polynomial(a), "characteristic polynomial"))
        }
        Err(e) => Err(e.into()),
    }
}

struct Setup {
    a: Matrix64,
    relation: Relation64,
    source: &'static str,
    opts: FlowOptions<f64>,
}

impl Setup {
    fn load(path: &Path, common: &Common, err: &mut dyn Write) -> Result<Self, CliError> {
        let a = read_matrix(path)?;
        let opts = options(common)?;
        let (relation, source) = relation_for(&a, common, &opts.tol, err)?;
        Ok(Self {
            a,
            relation,
            source,
            opts,
        })
    }

    fn relation_info(&self) -> RelationInfo {
        RelationInfo::new(
            &self.relation,
            self.source,
            Some(validate_relation(&self.a, &self.relation)),
        )
    }

    fn vandermonde(&self, err: &mut dyn Write) -> Result<FlowRepresentation<f64>, CliError> {
        let rep = build_flow_with(&self.a, Some(&self.relation), &self.opts)?;
        warn_conditioning(rep.mu_functions(), err)?;
        Ok(rep)
    }

    fn companion(&self) -> Result<CompanionFlow<f64>, CliError> {
        Ok(CompanionFlow::new(&self.a, &self.relation, &self.opts)?)
    }
}

fn warn_conditioning(mu: &MuFunctions<f64>, err: &mut dyn Write) -> std::io::Result<()> {
    let table = mu.coefficients();
    if table.ill_conditioned() {
        writeln!(
            err,
            "warning: generalized Vandermonde condition estimate {} exceeds the warning threshold; \
             eigenvalues may be too close for reliable results",
            num(table.condition_estimate())
        )?;
    }
    Ok(())
}

fn relative(x: &Matrix64, reference: &Matrix64) -> f64 {
    (x - reference).max_norm() / reference.max_norm().max(f64::MIN_POSITIVE)
}

fn pow(
    path: &Path,
    z: &str,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let z = parse_complex(z)?;
    let setup = Setup::load(path, common, err)?;
    let result = match common.method {
        Method::Vandermonde => setup.vandermonde(err)?.evaluate(z)?,
        Method::Companion => setup.companion()?.evaluate(z)?,
        Method::Both => {
            let x = setup.vandermonde(err)?.evaluate(z)?;
            let y = setup.companion()?.evaluate(z)?;
            let gap = relative(&y, &x);
            if !(gap <= VERIFY_THRESHOLD) {
                writeln!(
                    err,
                    "warning: the two methods differ by {} (relative)",
                    num(gap)
                )?;
            }
            x
        }
    };
    write_matrix(out, &result)?;
    Ok(())
}

fn analyze(
    path: &Path,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let setup = Setup::load(path, common, err)?;
    let rep = setup.vandermonde(err)?;
    let report = FormulaReport::new(rep.mu_functions(), setup.relation_info());
    emit(&report, report.render(), common.json, out)
}

fn formula(
    path: Option<&Path>,
    at: Option<&str>,
    elide_zeros: bool,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let at = at.map(parse_complex).transpose()?;
    let opts = options(common)?;
    let (relation, info) = match (supplied_relation(common)?, path) {
        (Some(q), None) => {
            let info = RelationInfo::new(&q, "supplied", None);
            (q, info)
        }
        (_, Some(path)) => {
            let setup = Setup::load(path, common, err)?;
            let info = setup.relation_info();
            if !(validate_relation(&setup.a, &setup.relation) <= opts.tol.residual_tol) {
                return Err(FlowError::RelationInvalid {
                    residual: validate_relation(&setup.a, &setup.relation),
                    tolerance: opts.tol.residual_tol,
                }
                .into());
            }
            (setup.relation, info)
        }
        (None, None) => {
            return Err(CliError::Parse(
                "formula needs --relation, --monic or a matrix file".into(),
            ));
        }
    };
    let mu = MuFunctions::from_relation(&relation, &opts)?;
    warn_conditioning(&mu, err)?;
    let mut report = FormulaReport::new(&mu, info).with_terms(elide_zeros);
    if let Some(z) = at {
        if common.method != Method::Companion {
            report
                .values
                .push(MuValues::new(z, "vandermonde", &mu.eval(z)));
        }
        if common.method != Method::Vandermonde {
            let values = CompanionMu::new(&relation, &opts)?.eval(z)?;
            report.values.push(MuValues::new(z, "companion", &values));
        }
    }
    emit(&report, report.render(), common.json, out)
}

fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    // Uniform on the disc.
    C64::from_polar(
        radius * rng.gen::<f64>().sqrt(),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

fn verify(
    path: &Path,
    samples: usize,
    seed: u64,
    z_radius: f64,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    if !(z_radius.is_finite() && z_radius >= 0.0) {
        return Err(CliError::Parse(format!(
            "--z-radius must be a finite non-negative number, got {z_radius}"
        )));
    }
    let setup = Setup::load(path, common, err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(C64, C64)> = (0..samples)
        .map(|_| {
            (
                random_point(&mut rng, z_radius),
                random_point(&mut rng, z_radius),
            )
        })
        .collect();

    let vandermonde = setup.vandermonde(err)?;
    let companion = setup.companion()?;
    let mut flows: Vec<(&str, &dyn MatrixFlow<f64>)> = Vec::new();
    if common.method != Method::Companion {
        flows.push(("vandermonde", &vandermonde));
    }
    if common.method != Method::Vandermonde {
        flows.push(("companion", &companion));
    }

    let mut checks = Vec::new();
    let mut push = |name: String, residual: f64| {
        checks.push(Check {
            name,
            residual,
            threshold: VERIFY_THRESHOLD,
            pass: residual <= VERIFY_THRESHOLD,
        });
    };
    for (label, flow) in &flows {
        let axioms = check_flow_axioms(*flow, &setup.a, &pairs)?;
        push(format!("{label}: F(0) = I"), axioms.identity);
        push(format!("{label}: F(1) = A"), axioms.generator);
        push(format!("{label}: F(z)F(w) = F(z+w)"), axioms.group_law);
        let mut integer: f64 = 0.0;
        for k in -3..=5 {
            let exact = power_int(&setup.a, k, &setup.opts.tol)?;
            integer = integer.max(relative(&flow.evaluate(C64::new(k as f64, 0.0))?, &exact));
        }
        push(format!("{label}: F(k) = A^k, k=-3..5"), integer);
    }
    let mut cross: f64 = 0.0;
    for &(z, w) in &pairs {
        for point in [z, w] {
            cross = cross.max(relative(
                &companion.evaluate(point)?,
                &vandermonde.evaluate(point)?,
            ));
        }
    }
    push("methods agree".to_string(), cross);

    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        relation: setup.relation_info(),
        samples,
        seed,
        checks,
        pass,
    };
    emit(&report, report.render(), common.json, out)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

fn emit<R: serde::Serialize>(
    report: &R,
    text: String,
    json: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if json {
        let doc =
            serde_json::to_string_pretty(report).map_err(|e| CliError::Parse(e.to_string()))?;
        writeln!(out, "{doc}")?;
    } else {
        out.write_all(text.as_bytes())?;
    }
    Ok(())
}
