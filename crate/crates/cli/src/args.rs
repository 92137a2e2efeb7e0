use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Complex powers `A^z` of invertible matrices.
///
/// Flows are written as `A^z = mu_1(z) A^-1 + ... + mu_p(z) A^-p` for a relation
/// `A^p = c_{p-1} A^{p-1} + ... + c_0 I`. The coefficient vector is `c = (c_{p-1}, ..., c_0)`,
/// and `mu(z) = C^z c` where `C` has `c` as its first column and ones on the superdiagonal.
#[derive(Debug, Parser)]
#[command(name = "cflow", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print A^z as a matrix document.
    Pow {
        /// Matrix document: {"n": 2, "entries": [[[re, im], ...], ...]}
        matrix: PathBuf,
        /// Exponent, e.g. 0.5, -2, 1.3-0.7i, 2i.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        common: Common,
    },
    /// Report the relation, spectrum, basis and coefficient table behind the flow.
    Analyze {
        matrix: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check the flow axioms, integer powers and agreement of the two methods.
    Verify {
        matrix: PathBuf,
        /// Number of random (z, w) pairs for the group law.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples are drawn uniformly from the disc |z| <= radius.
        #[arg(long, default_value_t = 3.0)]
        z_radius: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Closed form of the coefficient functions mu_i(z), from a relation or a matrix.
    Formula {
        /// Matrix whose relation to use when neither --relation nor --monic is given.
        matrix: Option<PathBuf>,
        /// Also print the values mu_i(z) at this point.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Leave out terms whose coefficient is exactly zero.
        #[arg(long)]
        elide_zeros: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Vandermonde,
    Companion,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Relation coefficients c_{p-1},...,c_0 of A^p = c_{p-1} A^{p-1} + ... + c_0 I.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "monic")]
    pub relation: Option<String>,
    /// Relation as monic polynomial coefficients, leading 1 first: "1,-5,6" is X^2 - 5X + 6.
    #[arg(long, allow_hyphen_values = true)]
    pub monic: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::Vandermonde)]
    pub method: Method,
    #[arg(long)]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub tol_root: Option<f64>,
    #[arg(long)]
    pub tol_cluster: Option<f64>,
    #[arg(long)]
    pub tol_residual: Option<f64>,
    #[arg(long)]
    pub tol_cond_warn: Option<f64>,
    /// CLUSTER:K adds 2*pi*i*K to log(lambda_CLUSTER); clusters are numbered from 1 as in `analyze`.
    #[arg(long = "branch-offset", value_parser = parse_branch_offset, allow_hyphen_values = true)]
    pub branch_offsets: Vec<(usize, i64)>,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

fn parse_branch_offset(s: &str) -> Result<(usize, i64), String> {
    let s = s.replace('\u{2212}', "-");
    let (index, k) = s.split_once(':').ok_or("expected CLUSTER:K")?;
    let index: usize = index
        .trim()
        .parse()
        .map_err(|e| format!("cluster index: {e}"))?;
    if index == 0 {
        return Err("cluster indices start at 1".into());
    }
    let k: i64 = k.trim().parse().map_err(|e| format!("offset: {e}"))?;
    Ok((index, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_offsets() {
        assert_eq!(parse_branch_offset("2:-1"), Ok((2, -1)));
        assert_eq!(parse_branch_offset("1:\u{2212}3"), Ok((1, -3)));
        assert!(parse_branch_offset("0:1").is_err());
        assert!(parse_branch_offset("3").is_err());
    }

    #[test]
    fn negative_values_are_not_flags() {
        let cli =
            Cli::try_parse_from(["cflow", "formula", "--relation", "-5,6", "--at", "-1"]).unwrap();
        match cli.command {
            Command::Formula { common, at, .. } => {
                assert_eq!(common.relation.as_deref(), Some("-5,6"));
                assert_eq!(at.as_deref(), Some("-1"));
            }
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from([
            "cflow",
            "analyze",
            "m.json",
            "--relation",
            "1",
            "--monic",
            "1,-1"
        ])
        .is_err());
    }
}
