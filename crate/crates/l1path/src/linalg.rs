//! Dense linear-algebra kernels sized for n up to a few thousand rows and a
//! few hundred columns, plus incrementally updatable Cholesky factors for
//! active-set least-squares solves.
//!
//! Storage is row-major and dense throughout; every operation is
//! deterministic and single-threaded, so results are bit-reproducible.

use thiserror::Error;

/// Relative pivot tolerance: a Cholesky pivot at or below
/// `PIVOT_RTOL * max_diagonal` signals a rank-deficient matrix.
pub const PIVOT_RTOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric within 1e-12")]
    NotSymmetric,
    #[error("matrix is not positive definite (pivot {index} too small)")]
    NotPositiveDefinite { index: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("non-finite entry at flat index {index}")]
    NonFinite { index: usize },
}

/// Dense row-major matrix. Entries are validated to be finite at
/// construction and the value is immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite { index: i });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from column vectors (all of equal length).
    pub fn from_columns(columns: &[Vector]) -> Result<Self, LinalgError> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vector::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::DimensionMismatch(
                "columns of unequal length".into(),
            ));
        }
        let mut data = vec![0.0; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for i in 0..rows {
                data[i * cols + j] = c[i];
            }
        }
        // entries already validated by the Vector constructor
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        debug_assert!(j < self.cols);
        Vector {
            data: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    /// `A x`.
    pub fn matvec(&self, x: &Vector) -> Result<Vector, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "matvec: {}x{} by length-{}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let data = (0..self.rows)
            .map(|i| dot(self.row(i), x.as_slice()))
            .collect();
        Ok(Vector { data })
    }

    /// `Aᵀ x`.
    pub fn tr_matvec(&self, x: &Vector) -> Result<Vector, LinalgError> {
        if x.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "tr_matvec: {}x{} by length-{}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut data = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for (j, a) in self.row(i).iter().enumerate() {
                data[j] += a * xi;
            }
        }
        Ok(Vector { data })
    }

    /// `X_Aᵀ X_A` for the given column subset, in the order given.
    pub fn gram_submatrix(&self, active: &[usize]) -> Result<Matrix, LinalgError> {
        if let Some(&j) = active.iter().find(|&&j| j >= self.cols) {
            return Err(LinalgError::IndexOutOfRange {
                index: j,
                dim: self.cols,
            });
        }
        let k = active.len();
        let mut g = Matrix::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let mut s = 0.0;
                for i in 0..self.rows {
                    s += self.get(i, active[a]) * self.get(i, active[b]);
                }
                g.data[a * k + b] = s;
                g.data[b * k + a] = s;
            }
        }
        Ok(g)
    }
}

/// Dense vector of finite reals, immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    pub fn new(data: Vec<f64>) -> Result<Self, LinalgError> {
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite { index: i });
        }
        Ok(Self { data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        dot(&self.data, &other.data)
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    /// `‖·‖∞`; 0 for the empty vector.
    pub fn linf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Vec<f64> {
        v.data
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower-triangular Cholesky factor `L` with `L·Lᵀ` reconstructing the
/// factored SPD matrix. Supports appending and deleting a row/column pair
/// without refactoring, which is what an active set needs.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    /// Row-major `dim × dim`, strictly upper part kept at zero.
    lower: Vec<f64>,
}

impl CholeskyFactor {
    /// Factors a symmetric positive definite matrix.
    ///
    /// Fails with `NotPositiveDefinite` as soon as a pivot drops to
    /// `PIVOT_RTOL` times the largest diagonal entry, which is how a
    /// rank-deficient active set announces itself.
    pub fn factor(a: &Matrix) -> Result<Self, LinalgError> {
        if a.rows() != a.cols() {
            return Err(LinalgError::DimensionMismatch(format!(
                "cholesky of {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let max_abs = (0..n * n).fold(0.0f64, |m, i| m.max(a.data[i].abs()));
        let sym_tol = 1e-12 * (1.0 + max_abs);
        for i in 0..n {
            for j in (i + 1)..n {
                if (a.get(i, j) - a.get(j, i)).abs() > sym_tol {
                    return Err(LinalgError::NotSymmetric);
                }
            }
        }
        let max_diag = (0..n).fold(0.0f64, |m, i| m.max(a.get(i, i)));
        let pivot_tol = PIVOT_RTOL * max_diag;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d <= pivot_tol {
                return Err(LinalgError::NotPositiveDefinite { index: j });
            }
            let dj = d.sqrt();
            l[j * n + j] = dj;
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / dj;
            }
        }
        Ok(Self { dim: n, lower: l })
    }

    pub fn empty() -> Self {
        Self {
            dim: 0,
            lower: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn l(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.dim + j]
    }

    /// Factor of the `(dim+1)×(dim+1)` matrix obtained by appending the
    /// row/column `(cross, diag)` to the factored matrix.
    pub fn insert(&self, cross: &Vector, diag: f64) -> Result<Self, LinalgError> {
        if cross.len() != self.dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "insert cross length {} into dim-{} factor",
                cross.len(),
                self.dim
            )));
        }
        let n = self.dim;
        // forward-substitute L w = cross
        let mut w = vec![0.0; n];
        for i in 0..n {
            let mut s = cross[i];
            for k in 0..i {
                s -= self.l(i, k) * w[k];
            }
            w[i] = s / self.l(i, i);
        }
        let d2 = diag - w.iter().map(|v| v * v).sum::<f64>();
        // reference scale: largest diagonal of the extended matrix
        let mut max_diag = diag;
        for i in 0..n {
            let a_ii: f64 = (0..=i).map(|k| self.l(i, k) * self.l(i, k)).sum();
            max_diag = max_diag.max(a_ii);
        }
        if d2 <= PIVOT_RTOL * max_diag {
            return Err(LinalgError::NotPositiveDefinite { index: n });
        }
        let m = n + 1;
        let mut lower = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..=i {
                lower[i * m + j] = self.l(i, j);
            }
        }
        for (j, wj) in w.iter().enumerate() {
            lower[n * m + j] = *wj;
        }
        lower[n * m + n] = d2.sqrt();
        Ok(Self { dim: m, lower })
    }

    /// Factor of the submatrix with row/column `idx` removed.
    pub fn delete(&self, idx: usize) -> Result<Self, LinalgError> {
        if idx >= self.dim {
            return Err(LinalgError::IndexOutOfRange {
                index: idx,
                dim: self.dim,
            });
        }
        let n = self.dim;
        let m = n - 1;
        let mut lower = vec![0.0; m * m];
        // rows above idx are untouched
        for i in 0..idx {
            for j in 0..=i {
                lower[i * m + j] = self.l(i, j);
            }
        }
        // rows below idx: leading columns shift up, trailing block gets a
        // rank-one update by the deleted subdiagonal column
        let t = n - idx - 1; // trailing block size
        let mut w: Vec<f64> = (0..t).map(|k| self.l(idx + 1 + k, idx)).collect();
        let mut block: Vec<f64> = vec![0.0; t * t];
        for i in 0..t {
            for j in 0..=i {
                block[i * t + j] = self.l(idx + 1 + i, idx + 1 + j);
            }
        }
        rank_one_update(&mut block, t, &mut w);
        for i in 0..t {
            let gi = idx + i; // row index in the new factor
            for j in 0..idx {
                lower[gi * m + j] = self.l(idx + 1 + i, j);
            }
            for j in 0..=i {
                lower[gi * m + (idx + j)] = block[i * t + j];
            }
        }
        Ok(Self { dim: m, lower })
    }

    /// Solves `(L Lᵀ) x = b`.
    pub fn solve(&self, b: &Vector) -> Result<Vector, LinalgError> {
        if b.len() != self.dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "solve rhs length {} for dim-{} factor",
                b.len(),
                self.dim
            )));
        }
        let n = self.dim;
        let mut z = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l(i, k) * z[k];
            }
            z[i] = s / self.l(i, i);
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in (i + 1)..n {
                s -= self.l(k, i) * z[k];
            }
            z[i] = s / self.l(i, i);
        }
        Ok(Vector { data: z })
    }

    /// `L·Lᵀ`, for verification.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..=i.min(j) {
                    s += self.l(i, k) * self.l(j, k);
                }
                m.data[i * n + j] = s;
            }
        }
        m
    }
}

/// In-place update of a lower-triangular factor so that the new factor
/// reconstructs `L Lᵀ + w wᵀ`. Consumes `w` as scratch.
fn rank_one_update(l: &mut [f64], n: usize, w: &mut [f64]) {
    let mut b = 1.0;
    for j in 0..n {
        let ljj = l[j * n + j];
        let wj = w[j];
        let nljj = (ljj * ljj + wj * wj / b).sqrt();
        let gamma = ljj * ljj * b + wj * wj;
        for k in (j + 1)..n {
            let wk = w[k] - wj * l[k * n + j] / ljj;
            l[k * n + j] = nljj * (l[k * n + j] / ljj + wj * wk / gamma);
            w[k] = wk;
        }
        b += wj * wj / (ljj * ljj);
        l[j * n + j] = nljj;
    }
}
