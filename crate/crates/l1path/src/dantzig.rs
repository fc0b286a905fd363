//! The Dantzig selector in both of its linear-program formulations, reduced
//! to standard-form problems for the simplex engine in [`crate::lp`].
//!
//! Writing `g(β) = Xᵀ(y − Xβ)` for the gradient of the squared error, the
//! two forms are duals of the same tradeoff:
//!
//! * l1-budget form: minimize `‖g(β)‖∞` subject to `‖β‖₁ ≤ s`;
//! * gradient-cap form: minimize `‖β‖₁` subject to `‖g(β)‖∞ ≤ λ`.
//!
//! Both are encoded with the split `β = u − v`, `u, v ≥ 0` and slack
//! variables for the two-sided gradient constraint.

use thiserror::Error;

use crate::linalg::{Matrix, Vector};
use crate::lp::{self, LpError, LpProblem, LpStatus};

/// Coefficients below this are reported as exact zeros.
pub const NONZERO_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum DsError {
    #[error("lp solver failed at parameter {value}: {source}")]
    Lp { value: f64, source: LpError },
    #[error("lp reported {status:?} at parameter {value}, which the encoding rules out")]
    UnexpectedStatus { status: LpStatus, value: f64 },
}

/// Which problem to solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DsForm {
    /// Minimize the gradient sup-norm under `‖β‖₁ ≤ s`.
    L1Budget(f64),
    /// Minimize `‖β‖₁` under a sup-norm cap λ on the gradient.
    GradientCap(f64),
}

/// A Dantzig selector estimate with its achieved diagnostics.
#[derive(Debug, Clone)]
pub struct DsSolution {
    pub beta: Vector,
    /// `‖Xᵀ(y − Xβ)‖∞`, recomputed from β.
    pub achieved_linf: f64,
    /// `‖β‖₁`, recomputed from β.
    pub achieved_l1: f64,
    /// Indices with `|β_j| > NONZERO_TOL`.
    pub nonzero: Vec<usize>,
    pub lp_iterations: usize,
}

/// Path parameterization for [`ds_path_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsParameter {
    /// Grid of ℓ1 budgets `s`.
    L1Bound,
    /// Grid of gradient caps λ.
    GradientBound,
}

/// Grid-indexed Dantzig selector solutions.
#[derive(Debug, Clone)]
pub struct DsPath {
    pub grid: Vector,
    pub solutions: Vec<DsSolution>,
    pub parameter_kind: DsParameter,
}

/// Residual diagnostics shared by the comparison commands.
#[derive(Debug, Clone)]
pub struct ResidualStats {
    /// `X_jᵀ(y − Xβ)` per column.
    pub inner_products: Vector,
    pub linf: f64,
    pub rss: f64,
    pub mse: f64,
}

/// `inner_products[j] = X_jᵀ(y − Xβ)`, `rss = ‖y − Xβ‖²`, `mse = rss / n`.
pub fn residual_stats(x: &Matrix, y: &Vector, beta: &Vector) -> ResidualStats {
    let fitted = x.matvec(beta).expect("beta length matches columns");
    let r = Vector::new(
        y.iter()
            .zip(fitted.iter())
            .map(|(yi, fi)| yi - fi)
            .collect(),
    )
    .expect("finite");
    let inner = x.tr_matvec(&r).expect("shapes");
    let rss = r.dot(&r);
    ResidualStats {
        linf: inner.linf(),
        mse: rss / x.rows() as f64,
        rss,
        inner_products: inner,
    }
}

fn gram_and_xty(x: &Matrix, y: &Vector) -> (Matrix, Vector) {
    let p = x.cols();
    let all: Vec<usize> = (0..p).collect();
    let g = x.gram_submatrix(&all).expect("indices in range");
    let xty = x.tr_matvec(y).expect("shapes");
    (g, xty)
}

/// Standard-form LP for the gradient-cap problem:
/// `min Σ(u+v)` subject to `−λ·1 ≤ Xᵀy − XᵀX(u−v) ≤ λ·1`, `u, v ≥ 0`.
/// Layout: variables `[u | v | upper slacks | lower slacks]` (N = 4p),
/// constraints: p upper rows then p lower rows (M = 2p).
pub fn build_lp_gradient_cap(x: &Matrix, y: &Vector, lambda: f64) -> LpProblem {
    assert!(lambda >= 0.0);
    let p = x.cols();
    let (g, xty) = gram_and_xty(x, y);
    let n_vars = 4 * p;
    let m = 2 * p;
    let mut a = vec![0.0; m * n_vars];
    let mut b = vec![0.0; m];
    for i in 0..p {
        // upper: Xᵀy − G(u−v) ≤ λ  ⇔  −G u + G v + s_up = λ − (Xᵀy)_i
        for j in 0..p {
            a[i * n_vars + j] = -g.get(i, j);
            a[i * n_vars + p + j] = g.get(i, j);
        }
        a[i * n_vars + 2 * p + i] = 1.0;
        b[i] = lambda - xty[i];
        // lower: G(u−v) − Xᵀy ≤ λ  ⇔  G u − G v + s_lo = λ + (Xᵀy)_i
        let r = p + i;
        for j in 0..p {
            a[r * n_vars + j] = g.get(i, j);
            a[r * n_vars + p + j] = -g.get(i, j);
        }
        a[r * n_vars + 3 * p + i] = 1.0;
        b[r] = lambda + xty[i];
    }
    let mut c = vec![0.0; n_vars];
    for v in c.iter_mut().take(2 * p) {
        *v = 1.0;
    }
    LpProblem::new(
        Vector::new(c).expect("finite"),
        Matrix::from_vec(m, n_vars, a).expect("finite"),
        Vector::new(b).expect("finite"),
    )
    .expect("consistent dimensions")
}

/// Standard-form LP for the ℓ1-budget problem (epigraph encoding):
/// `min t` subject to `−t·1 ≤ Xᵀy − XᵀX(u−v) ≤ t·1`, `Σ(u+v) ≤ s`.
/// Layout: `[u | v | t | upper slacks | lower slacks | budget slack]`
/// (N = 4p + 2, M = 2p + 1).
pub fn build_lp_l1_budget(x: &Matrix, y: &Vector, s: f64) -> LpProblem {
    assert!(s >= 0.0);
    let p = x.cols();
    let (g, xty) = gram_and_xty(x, y);
    let n_vars = 4 * p + 2;
    let t_col = 2 * p;
    let m = 2 * p + 1;
    let mut a = vec![0.0; m * n_vars];
    let mut b = vec![0.0; m];
    for i in 0..p {
        // upper: Xᵀy − G(u−v) − t ≤ 0
        for j in 0..p {
            a[i * n_vars + j] = -g.get(i, j);
            a[i * n_vars + p + j] = g.get(i, j);
        }
        a[i * n_vars + t_col] = -1.0;
        a[i * n_vars + t_col + 1 + i] = 1.0;
        b[i] = -xty[i];
        // lower: G(u−v) − Xᵀy − t ≤ 0
        let r = p + i;
        for j in 0..p {
            a[r * n_vars + j] = g.get(i, j);
            a[r * n_vars + p + j] = -g.get(i, j);
        }
        a[r * n_vars + t_col] = -1.0;
        a[r * n_vars + t_col + 1 + p + i] = 1.0;
        b[r] = xty[i];
    }
    // budget row: Σu + Σv + slack = s
    let r = 2 * p;
    for j in 0..2 * p {
        a[r * n_vars + j] = 1.0;
    }
    a[r * n_vars + n_vars - 1] = 1.0;
    b[r] = s;
    let mut c = vec![0.0; n_vars];
    c[t_col] = 1.0;
    LpProblem::new(
        Vector::new(c).expect("finite"),
        Matrix::from_vec(m, n_vars, a).expect("finite"),
        Vector::new(b).expect("finite"),
    )
    .expect("consistent dimensions")
}

/// Builds and solves the requested formulation, extracts `β = u − v` and
/// recomputes the diagnostics from β.
pub fn solve_ds(x: &Matrix, y: &Vector, form: DsForm) -> Result<DsSolution, DsError> {
    let p = x.cols();
    let (problem, value) = match form {
        DsForm::L1Budget(s) => (build_lp_l1_budget(x, y, s), s),
        DsForm::GradientCap(lambda) => (build_lp_gradient_cap(x, y, lambda), lambda),
    };
    let sol = lp::solve(&problem).map_err(|source| DsError::Lp { value, source })?;
    if sol.status != LpStatus::Optimal {
        return Err(DsError::UnexpectedStatus {
            status: sol.status,
            value,
        });
    }
    // β = u − v; a shared basic mass min(u_j, v_j) cancels in the difference
    let beta = Vector::new((0..p).map(|j| sol.z[j] - sol.z[p + j]).collect())
        .expect("finite");
    let stats = residual_stats(x, y, &beta);
    let nonzero = (0..p).filter(|&j| beta[j].abs() > NONZERO_TOL).collect();
    Ok(DsSolution {
        achieved_linf: stats.linf,
        achieved_l1: beta.norm1(),
        nonzero,
        lp_iterations: sol.iterations,
        beta,
    })
}

/// One independent solve per grid value, assembled in grid order.
pub fn ds_path_grid(
    x: &Matrix,
    y: &Vector,
    kind: DsParameter,
    grid: &Vector,
) -> Result<DsPath, DsError> {
    assert!(
        grid.iter().zip(grid.iter().skip(1)).all(|(a, b)| a < b),
        "grid must be strictly increasing"
    );
    assert!(grid.iter().all(|&v| v >= 0.0));
    let mut solutions = Vec::with_capacity(grid.len());
    for &v in grid.iter() {
        let form = match kind {
            DsParameter::L1Bound => DsForm::L1Budget(v),
            DsParameter::GradientBound => DsForm::GradientCap(v),
        };
        solutions.push(solve_ds(x, y, form)?);
    }
    Ok(DsPath {
        grid: grid.clone(),
        solutions,
        parameter_kind: kind,
    })
}
