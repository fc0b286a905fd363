//! Dataset ingestion, quadratic-model expansion, standardization in the two
//! conventions used by the benchmark commands, and seeded synthetic data
//! generation for the simulation study.
//!
//! All sampling uses ChaCha8 seeded explicitly plus the ziggurat standard
//! normal from `rand_distr`, so replicates are reproducible from their seed
//! arguments alone.

use std::io::Read;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::linalg::{Matrix, Vector};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("row {row}, column {col}: cannot parse {value:?} as a number")]
    Parse {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("row {row} has {got} fields, expected {expected}")]
    Shape {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("csv error: {0}")]
    Csv(String),
    #[error("no column named {0:?}")]
    MissingColumn(String),
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
    #[error("column {0:?} is constant and cannot be scaled")]
    ConstantColumn(String),
    #[error("dataset needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// A raw regression dataset: predictors, response, and column labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub x_raw: Matrix,
    pub y_raw: Vector,
    pub column_names: Vec<String>,
}

impl Dataset {
    pub fn new(x_raw: Matrix, y_raw: Vector, column_names: Vec<String>) -> Result<Self, DataError> {
        if x_raw.rows() < 2 {
            return Err(DataError::TooFewRows(x_raw.rows()));
        }
        assert_eq!(x_raw.rows(), y_raw.len(), "X and y row counts differ");
        assert_eq!(x_raw.cols(), column_names.len(), "names do not match columns");
        for (i, n) in column_names.iter().enumerate() {
            if column_names[..i].contains(n) {
                return Err(DataError::DuplicateColumn(n.clone()));
            }
        }
        Ok(Self {
            x_raw,
            y_raw,
            column_names,
        })
    }

    pub fn n(&self) -> usize {
        self.x_raw.rows()
    }

    pub fn p(&self) -> usize {
        self.x_raw.cols()
    }
}

/// Column scaling convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardizeMode {
    /// Centered columns scaled to `‖·‖₂ = 1`.
    UnitL2Norm,
    /// Centered columns scaled to sample variance 1 (n−1 denominator).
    UnitVariance,
}

/// Centered and scaled design with the response centered, retaining the
/// original means and scales for de-standardization.
#[derive(Debug, Clone)]
pub struct StandardizedDesign {
    pub x: Matrix,
    pub y: Vector,
    pub mode: StandardizeMode,
    pub column_means: Vector,
    pub column_scales: Vector,
    pub y_mean: f64,
}

/// Reads a comma-separated file with a header row; the named response column
/// becomes `y_raw` and every other column a predictor.
pub fn load_csv(path: &Path, response: &str) -> Result<Dataset, DataError> {
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(file, response)
}

/// Same as [`load_csv`] but from any reader (used for the vendored fixture).
pub fn parse_csv<R: Read>(reader: R, response: &str) -> Result<Dataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| DataError::Csv(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let Some(y_col) = headers.iter().position(|h| h == response) else {
        return Err(DataError::MissingColumn(response.to_string()));
    };
    let expected = headers.len();
    let mut x_data: Vec<f64> = Vec::new();
    let mut y_data: Vec<f64> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1; // 1-based body row, matching what a user sees
        let rec = rec.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths { len, .. } => DataError::Shape {
                row,
                got: *len as usize,
                expected,
            },
            _ => DataError::Csv(e.to_string()),
        })?;
        if rec.len() != expected {
            return Err(DataError::Shape {
                row,
                got: rec.len(),
                expected,
            });
        }
        for (col, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| DataError::Parse {
                row,
                col: col + 1,
                value: field.to_string(),
            })?;
            if col == y_col {
                y_data.push(v);
            } else {
                x_data.push(v);
            }
        }
    }
    let n = y_data.len();
    let names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != y_col)
        .map(|(_, h)| h.clone())
        .collect();
    let x = Matrix::from_vec(n, expected - 1, x_data)?;
    Dataset::new(x, Vector::new(y_data)?, names)
}

fn is_binary(col: &Vector) -> bool {
    let mut distinct: Vec<f64> = Vec::with_capacity(3);
    for &v in col.iter() {
        if !distinct.contains(&v) {
            distinct.push(v);
            if distinct.len() > 2 {
                return false;
            }
        }
    }
    distinct.len() == 2
}

/// Quadratic-model expansion: the original columns, then all pairwise
/// interaction products in lexicographic pair order, then squared terms for
/// every non-binary column (a squared binary column is itself, so it is
/// skipped). Column count is `p + C(p,2) + #non-binary`.
pub fn expand_quadratic(d: &Dataset) -> Dataset {
    let p = d.p();
    let cols: Vec<Vector> = (0..p).map(|j| d.x_raw.column(j)).collect();
    let mut out: Vec<Vector> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for j in 0..p {
        out.push(cols[j].clone());
        names.push(d.column_names[j].clone());
    }
    for i in 0..p {
        for j in (i + 1)..p {
            let prod: Vec<f64> = cols[i]
                .iter()
                .zip(cols[j].iter())
                .map(|(a, b)| a * b)
                .collect();
            out.push(Vector::new(prod).expect("products of finite entries"));
            names.push(format!("{}:{}", d.column_names[i], d.column_names[j]));
        }
    }
    for j in 0..p {
        if !is_binary(&cols[j]) {
            let sq: Vec<f64> = cols[j].iter().map(|a| a * a).collect();
            out.push(Vector::new(sq).expect("squares of finite entries"));
            names.push(format!("{}^2", d.column_names[j]));
        }
    }
    Dataset {
        x_raw: Matrix::from_columns(&out).expect("equal-length columns"),
        y_raw: d.y_raw.clone(),
        column_names: names,
    }
}

/// Centers every column and `y`, then scales columns per `mode`.
pub fn standardize(d: &Dataset, mode: StandardizeMode) -> Result<StandardizedDesign, DataError> {
    let n = d.n();
    let p = d.p();
    let mut means = vec![0.0; p];
    let mut scales = vec![0.0; p];
    let mut centered: Vec<Vec<f64>> = Vec::with_capacity(p);
    for j in 0..p {
        let col = d.x_raw.column(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        let c: Vec<f64> = col.iter().map(|v| v - mean).collect();
        let sumsq: f64 = c.iter().map(|v| v * v).sum();
        let scale = match mode {
            StandardizeMode::UnitL2Norm => sumsq.sqrt(),
            StandardizeMode::UnitVariance => (sumsq / (n as f64 - 1.0)).sqrt(),
        };
        if scale <= 1e-12 * (1.0 + col.linf()) {
            return Err(DataError::ConstantColumn(d.column_names[j].clone()));
        }
        means[j] = mean;
        scales[j] = scale;
        centered.push(c.iter().map(|v| v / scale).collect());
    }
    let y_mean = d.y_raw.iter().sum::<f64>() / n as f64;
    let y: Vec<f64> = d.y_raw.iter().map(|v| v - y_mean).collect();
    let mut x_data = vec![0.0; n * p];
    for (j, col) in centered.iter().enumerate() {
        for i in 0..n {
            x_data[i * p + j] = col[i];
        }
    }
    Ok(StandardizedDesign {
        x: Matrix::from_vec(n, p, x_data)?,
        y: Vector::new(y)?,
        mode,
        column_means: Vector::new(means)?,
        column_scales: Vector::new(scales)?,
        y_mean,
    })
}

/// Synthetic regression specification for `y = Xβ + ε`.
#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub n: usize,
    pub p: usize,
    pub k_nonzero: usize,
    /// Standard deviation of the nonzero coefficients.
    pub coef_sd: f64,
    pub noise_sd: f64,
    /// Dense: every coefficient drawn; sparse: first `k_nonzero` only.
    pub dense: bool,
}

impl SynthSpec {
    fn validate(&self) {
        assert!(self.k_nonzero <= self.p, "k_nonzero exceeds p");
        assert!(self.coef_sd > 0.0 && self.noise_sd >= 0.0);
    }
}

/// Coefficient draw for [`generate_synthetic`], depending on `beta_seed`
/// alone: sparse specs fill the first `k_nonzero` entries with
/// `N(0, coef_sd²)` draws and leave the rest exactly zero; dense specs fill
/// all `p`.
pub fn draw_coefficients(spec: &SynthSpec, beta_seed: u64) -> Vector {
    spec.validate();
    let normal = StandardNormal;
    let mut rng = ChaCha8Rng::seed_from_u64(beta_seed);
    let k = if spec.dense { spec.p } else { spec.k_nonzero };
    let mut beta = vec![0.0; spec.p];
    for b in beta.iter_mut().take(k) {
        let z: f64 = normal.sample(&mut rng);
        *b = spec.coef_sd * z;
    }
    Vector::new(beta).expect("finite normals")
}

/// Design and noise draw for [`generate_synthetic`], depending on
/// `rep_seed` alone. Stream layout is fixed: `X` is filled row-major, then
/// the `n` noise values follow on the same stream.
pub fn draw_design_and_noise(spec: &SynthSpec, rep_seed: u64) -> (Matrix, Vector) {
    spec.validate();
    let normal = StandardNormal;
    let mut rng = ChaCha8Rng::seed_from_u64(rep_seed);
    let mut x_data = vec![0.0; spec.n * spec.p];
    for v in x_data.iter_mut() {
        *v = normal.sample(&mut rng);
    }
    let x = Matrix::from_vec(spec.n, spec.p, x_data).expect("finite normals");
    let noise: Vec<f64> = (0..spec.n)
        .map(|_| {
            let z: f64 = normal.sample(&mut rng);
            spec.noise_sd * z
        })
        .collect();
    (x, Vector::new(noise).expect("finite"))
}

/// Draws `β` from `beta_seed` alone and `(X, ε)` from `rep_seed` alone, so
/// the same `beta_seed` yields an identical `β` regardless of the
/// replicate; `y = Xβ + ε`.
pub fn generate_synthetic(
    spec: &SynthSpec,
    beta_seed: u64,
    rep_seed: u64,
) -> (Matrix, Vector, Vector) {
    let beta = draw_coefficients(spec, beta_seed);
    let (x, noise) = draw_design_and_noise(spec, rep_seed);
    let fitted = x.matvec(&beta).expect("shape by construction");
    let y: Vec<f64> = fitted
        .iter()
        .zip(noise.iter())
        .map(|(f, e)| f + e)
        .collect();
    (x, Vector::new(y).expect("finite"), beta)
}

/// The vendored 442×10 diabetes dataset (see `data/README.md` for
/// provenance). Response column is `y`.
pub fn diabetes_raw() -> Dataset {
    parse_csv(
        std::io::Cursor::new(include_str!("../data/diabetes.csv")),
        "y",
    )
    .expect("vendored fixture parses")
}

/// The 64-column quadratic diabetes dataset, before final standardization:
/// main effects are centered and scaled to unit norm, then expanded with
/// interactions and squares. Centering the mains before taking products is
/// what makes the benchmark columns reproducible; scaling them is
/// immaterial because the final standardization absorbs per-column factors.
pub fn diabetes64_dataset() -> Dataset {
    let raw = diabetes_raw();
    let std_mains = standardize(&raw, StandardizeMode::UnitL2Norm).expect("no constant column");
    let mains = Dataset {
        x_raw: std_mains.x,
        y_raw: raw.y_raw.clone(),
        column_names: raw.column_names.clone(),
    };
    expand_quadratic(&mains)
}

/// The standardized 64-predictor diabetes design used by the benchmark
/// commands.
pub fn diabetes64(mode: StandardizeMode) -> StandardizedDesign {
    standardize(&diabetes64_dataset(), mode).expect("no constant column")
}
