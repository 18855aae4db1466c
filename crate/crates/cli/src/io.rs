//! JSON file formats. Complex numbers are `[re, im]` pairs and matrices are
//! row-major nested arrays.

use std::path::Path;

use posext::linalg::{CMatrix, Tolerance};
use posext::num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Environment variable selecting the default tolerance profile.
pub const TOLERANCE_ENV: &str = "POSEXT_TOLERANCE";

#[derive(Debug)]
pub struct Malformed(pub String);

impl std::fmt::Display for Malformed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Parsed<T> = Result<T, Malformed>;

/// A matrix as it appears in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonMatrix(pub Vec<Vec<[f64; 2]>>);

impl JsonMatrix {
    /// Negative zeros are written as `0.0`.
    pub fn from_matrix(m: &CMatrix) -> Self {
        JsonMatrix(
            (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re + 0.0, m[(i, j)].im + 0.0])
                        .collect()
                })
                .collect(),
        )
    }

    /// Rejects ragged rows and non-finite entries. An `n × 0` matrix is
    /// written as `n` empty rows.
    pub fn to_matrix(&self, what: &str) -> Parsed<CMatrix> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, Vec::len);
        if let Some((i, row)) = self.0.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Malformed(format!(
                "{what}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        let mut m = CMatrix::zeros(rows, cols);
        for (i, row) in self.0.iter().enumerate() {
            for (j, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Malformed(format!("{what}: entry ({i}, {j}) is not finite")));
                }
                m[(i, j)] = Complex64::new(re, im);
            }
        }
        Ok(m)
    }
}

/// Per-field tolerance overrides in a problem file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub ortho: Option<f64>,
    pub rank_rel: Option<f64>,
    pub psd: Option<f64>,
    pub contraction: Option<f64>,
    pub compare: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerance) -> Tolerance {
        Tolerance {
            ortho: self.ortho.unwrap_or(base.ortho),
            rank_rel: self.rank_rel.unwrap_or(base.rank_rel),
            psd: self.psd.unwrap_or(base.psd),
            contraction: self.contraction.unwrap_or(base.contraction),
            compare: self.compare.unwrap_or(base.compare),
        }
    }
}

/// A positive symmetric operator given by its action on spanning vectors.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub ambient_dim: usize,
    /// `n × k`, columns span the domain.
    pub domain_basis: JsonMatrix,
    /// `n × k`, column `j` is the image of column `j` of `domain_basis`.
    pub action: JsonMatrix,
    #[serde(default)]
    pub lower_bound_shift: Option<f64>,
    #[serde(default)]
    pub tolerance: Option<ToleranceOverrides>,
}

pub struct Problem {
    pub columns: CMatrix,
    pub images: CMatrix,
    pub lower_bound_shift: Option<f64>,
    pub overrides: ToleranceOverrides,
}

fn read(path: &Path) -> Parsed<String> {
    std::fs::read_to_string(path).map_err(|e| Malformed(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Parsed<T> {
    serde_json::from_str(text).map_err(|e| Malformed(format!("{}: {e}", path.display())))
}

fn shaped(m: &JsonMatrix, rows: usize, what: &str) -> Parsed<CMatrix> {
    let matrix = m.to_matrix(what)?;
    if m.0.len() != rows {
        return Err(Malformed(format!("{what}: expected {rows} rows, found {}", m.0.len())));
    }
    Ok(matrix)
}

pub fn read_problem(path: &Path) -> Parsed<Problem> {
    let file: ProblemFile = parse_json(&read(path)?, path)?;
    let n = file.ambient_dim;
    if n == 0 {
        return Err(Malformed("ambient_dim must be at least 1".into()));
    }
    let columns = shaped(&file.domain_basis, n, "domain_basis")?;
    let images = shaped(&file.action, n, "action")?;
    if columns.ncols() != images.ncols() {
        return Err(Malformed(format!(
            "domain_basis has {} columns but action has {}",
            columns.ncols(),
            images.ncols()
        )));
    }
    if let Some(shift) = file.lower_bound_shift {
        if !shift.is_finite() {
            return Err(Malformed("lower_bound_shift is not finite".into()));
        }
    }
    Ok(Problem {
        columns,
        images,
        lower_bound_shift: file.lower_bound_shift,
        overrides: file.tolerance.unwrap_or_default(),
    })
}

/// A matrix file: either a bare nested array or `{"matrix": ...}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(JsonMatrix),
    Wrapped { matrix: JsonMatrix },
}

/// `Γ` as given on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum GammaSpec {
    Krein,
    Friedrichs,
    Neutral,
    Matrix(CMatrix),
}

fn named_gamma(name: &str) -> Option<GammaSpec> {
    match name {
        "krein" => Some(GammaSpec::Krein),
        "friedrichs" => Some(GammaSpec::Friedrichs),
        "neutral" => Some(GammaSpec::Neutral),
        _ => None,
    }
}

pub fn read_matrix(path: &Path, what: &str) -> Parsed<CMatrix> {
    let file: MatrixFile = parse_json(&read(path)?, path)?;
    let m = match file {
        MatrixFile::Bare(m) | MatrixFile::Wrapped { matrix: m } => m,
    };
    m.to_matrix(what)
}

/// Resolves a `--gamma` argument: one of the literal names or a file that
/// holds a name or a matrix.
pub fn read_gamma(arg: &str) -> Parsed<GammaSpec> {
    if let Some(spec) = named_gamma(arg) {
        return Ok(spec);
    }
    let path = Path::new(arg);
    let text = read(path)?;
    if let Ok(name) = serde_json::from_str::<String>(&text) {
        return named_gamma(&name).ok_or_else(|| Malformed(format!("{}: unknown gamma name `{name}`", path.display())));
    }
    let file: MatrixFile = parse_json(&text, path)?;
    let m = match file {
        MatrixFile::Bare(m) | MatrixFile::Wrapped { matrix: m } => m,
    };
    Ok(GammaSpec::Matrix(m.to_matrix("gamma")?))
}

/// Default tolerance from the environment profile.
pub fn base_tolerance() -> Parsed<Tolerance> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(name) => Tolerance::profile(name.trim())
            .ok_or_else(|| Malformed(format!("{TOLERANCE_ENV}={name} is not one of default, strict, loose"))),
        Err(_) => Ok(Tolerance::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = CMatrix::from_fn(2, 3, |i, j| Complex64::new(i as f64 + 0.1, j as f64 - 0.3));
        let json = serde_json::to_string(&JsonMatrix::from_matrix(&m)).unwrap();
        let back: JsonMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_matrix("m").unwrap(), m);
    }

    #[test]
    fn ragged_rows_rejected() {
        let m: JsonMatrix = serde_json::from_str("[[[1,0],[2,0]],[[3,0]]]").unwrap();
        assert!(m.to_matrix("m").is_err());
    }

    #[test]
    fn overrides_replace_only_given_fields() {
        let o: ToleranceOverrides = serde_json::from_str(r#"{"psd": 1e-6}"#).unwrap();
        let t = o.apply(Tolerance::default());
        assert_eq!(t.psd, 1e-6);
        assert_eq!(t.ortho, Tolerance::default().ortho);
    }

    #[test]
    fn gamma_names() {
        assert_eq!(read_gamma("krein").unwrap(), GammaSpec::Krein);
        assert_eq!(read_gamma("friedrichs").unwrap(), GammaSpec::Friedrichs);
        assert_eq!(read_gamma("neutral").unwrap(), GammaSpec::Neutral);
        assert!(read_gamma("/nonexistent/gamma.json").is_err());
    }
}
