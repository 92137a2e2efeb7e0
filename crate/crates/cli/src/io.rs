//! Matrix documents and number literals.

use std::io::Write;
use std::path::Path;

use cflow::{Matrix64, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `{"n": 2, "entries": [[[re, im], [re, im]], [[re, im], [re, im]]]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix64) -> Self {
        let n = m.dim();
        Self {
            n,
            entries: (0..n)
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix64, CliError> {
        if self.n == 0 {
            return Err(CliError::Parse("n must be positive".into()));
        }
        if self.entries.len() != self.n {
            return Err(CliError::Parse(format!(
                "expected {} rows, found {}",
                self.n,
                self.entries.len()
            )));
        }
        let mut data = Vec::with_capacity(self.n * self.n);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(CliError::Parse(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    self.n
                )));
            }
            data.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        Matrix64::new(self.n, data).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// The document with every component at 17 significant digits.
    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|row| {
                let cells: Vec<String> = row
                    .iter()
                    .map(|[re, im]| format!("[{}, {}]", num(*re), num(*im)))
                    .collect();
                format!("    [{}]", cells.join(", "))
            })
            .collect();
        format!(
            "{{\n  \"n\": {},\n  \"entries\": [\n{}\n  ]\n}}\n",
            self.n,
            rows.join(",\n")
        )
    }
}

/// 17 significant digits, which round-trips every `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn complex(z: C64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", num(z.re), num(z.im.abs()))
}

pub fn read_matrix(path: &Path) -> Result<Matrix64, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let doc: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    doc.to_matrix()
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn write_matrix(out: &mut dyn Write, m: &Matrix64) -> std::io::Result<()> {
    out.write_all(MatrixFile::from_matrix(m).render().as_bytes())
}

/// `a+bi`, `a-bi`, `a`, `bi`; the Unicode minus sign is accepted.
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let cleaned: String = s
        .replace('\u{2212}', "-")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let z: C64 = cleaned
        .parse()
        .map_err(|_| CliError::Parse(format!("not a complex number: {s:?}")))?;
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(CliError::Parse(format!("not a finite number: {s:?}")))
    }
}

pub fn parse_list(s: &str) -> Result<Vec<C64>, CliError> {
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.iter().any(|x| x.is_empty()) {
        return Err(CliError::Parse(format!(
            "empty entry in coefficient list {s:?}"
        )));
    }
    items.into_iter().map(parse_complex).collect()
}
