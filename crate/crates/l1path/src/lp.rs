//! Self-contained two-phase revised simplex for dense standard-form linear
//! programs: minimize `cᵀz` subject to `A z = b`, `z ≥ 0`.
//!
//! The basis inverse is kept explicitly and updated per pivot, with a full
//! refactorization every 50 pivots or whenever the feasibility residual
//! drifts. Pricing is Dantzig (most negative reduced cost) with an
//! automatic switch to Bland's rule after a long degenerate run, which
//! guarantees termination on cycling instances.

use thiserror::Error;

use crate::linalg::{LinalgError, Matrix, Vector};

/// Reduced costs above `-OPT_TOL` count as optimal.
const OPT_TOL: f64 = 1e-9;
/// Entries at or below this are treated as zero in ratio tests and pivots.
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 50;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("iteration limit reached after {iterations} simplex iterations")]
    IterationLimit { iterations: usize },
    #[error("singular basis during refactorization")]
    SingularBasis,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `min cᵀz  s.t.  A z = b, z ≥ 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub c: Vector,
    pub a: Matrix,
    pub b: Vector,
}

impl LpProblem {
    pub fn new(c: Vector, a: Matrix, b: Vector) -> Result<Self, LpError> {
        if c.len() != a.cols() || b.len() != a.rows() {
            return Err(LpError::Dimension(format!(
                "c is {}, A is {}x{}, b is {}",
                c.len(),
                a.rows(),
                a.cols(),
                b.len()
            )));
        }
        Ok(Self { c, a, b })
    }

    pub fn num_vars(&self) -> usize {
        self.a.cols()
    }

    pub fn num_constraints(&self) -> usize {
        self.a.rows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `z`, `objective` and `basis` are meaningful only when
/// `status == Optimal`.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub z: Vector,
    pub objective: f64,
    pub basis: Vec<usize>,
    /// Original constraint rows still present in the basis system; rows
    /// found redundant in phase 1 are omitted.
    pub kept_rows: Vec<usize>,
    pub iterations: usize,
}

/// Optimality diagnostics for an `Optimal` solution.
#[derive(Debug, Clone)]
pub struct OptimalityReport {
    /// `‖Az − b‖∞ / (1 + ‖b‖∞)`
    pub primal_residual: f64,
    /// smallest reduced cost over all columns (≥ −1e-9 at an optimum)
    pub min_reduced_cost: f64,
    /// `max_j |z_j d_j| / (1 + |cᵀz|)`
    pub complementary_slackness: f64,
    /// dual objective `yᵀb` from the basis-derived multipliers
    pub dual_objective: f64,
    pub pass: bool,
}

struct Simplex {
    m: usize,
    n_struct: usize,
    n_total: usize,
    cols: Vec<Vec<f64>>,
    b: Vec<f64>,
    b_scale: f64,
    costs: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<f64>,
    x_b: Vec<f64>,
    iterations: usize,
    degenerate_run: usize,
    bland: bool,
    pivots_since_refactor: usize,
    iteration_limit: usize,
    bland_after: usize,
    kept_rows: Vec<usize>,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Simplex {
    fn new(p: &LpProblem) -> Self {
        let m = p.num_constraints();
        let n = p.num_vars();
        // column-major copy with b made nonnegative
        let flip: Vec<bool> = (0..m).map(|i| p.b[i] < 0.0).collect();
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        for j in 0..n {
            cols.push(
                (0..m)
                    .map(|i| {
                        let v = p.a.get(i, j);
                        if flip[i] {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect(),
            );
        }
        let b: Vec<f64> = (0..m).map(|i| p.b[i].abs()).collect();
        let b_scale = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(*v));

        // crash basis: a column that is a positive multiple of e_i covers
        // row i; remaining rows get artificial columns
        let mut basis_of_row: Vec<Option<usize>> = vec![None; m];
        for (j, col) in cols.iter().enumerate() {
            let nonzeros: Vec<usize> = (0..m).filter(|&i| col[i] != 0.0).collect();
            if let [i] = nonzeros[..] {
                if col[i] > PIVOT_TOL && basis_of_row[i].is_none() {
                    basis_of_row[i] = Some(j);
                }
            }
        }
        let mut n_total = n;
        let mut basis = vec![0usize; m];
        for i in 0..m {
            match basis_of_row[i] {
                Some(j) => basis[i] = j,
                None => {
                    let mut col = vec![0.0; m];
                    col[i] = 1.0;
                    cols.push(col);
                    basis[i] = n_total;
                    n_total += 1;
                }
            }
        }
        let mut in_basis = vec![false; n_total];
        for &j in &basis {
            in_basis[j] = true;
        }
        let mut s = Self {
            m,
            n_struct: n,
            n_total,
            cols,
            b,
            b_scale,
            costs: vec![0.0; n_total],
            basis,
            in_basis,
            binv: vec![0.0; m * m],
            x_b: vec![0.0; m],
            iterations: 0,
            degenerate_run: 0,
            bland: false,
            pivots_since_refactor: 0,
            iteration_limit: 50 * (m + n),
            bland_after: 3 * (m + n),
            kept_rows: (0..m).collect(),
        };
        s.refactor().expect("crash basis is triangular");
        s
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n_struct
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        // Gauss-Jordan inversion of the basis matrix with partial pivoting
        let mut work = vec![0.0; m * 2 * m];
        for i in 0..m {
            for (k, &bj) in self.basis.iter().enumerate() {
                work[i * 2 * m + k] = self.cols[bj][i];
            }
            work[i * 2 * m + m + i] = 1.0;
        }
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&a, &b| {
                    work[a * 2 * m + col]
                        .abs()
                        .partial_cmp(&work[b * 2 * m + col].abs())
                        .expect("finite")
                })
                .expect("nonempty");
            if work[piv * 2 * m + col].abs() <= 1e-12 {
                return Err(LpError::SingularBasis);
            }
            if piv != col {
                for k in 0..2 * m {
                    work.swap(col * 2 * m + k, piv * 2 * m + k);
                }
            }
            let d = work[col * 2 * m + col];
            for k in 0..2 * m {
                work[col * 2 * m + k] /= d;
            }
            for i in 0..m {
                if i == col {
                    continue;
                }
                let f = work[i * 2 * m + col];
                if f == 0.0 {
                    continue;
                }
                for k in 0..2 * m {
                    work[i * 2 * m + k] -= f * work[col * 2 * m + k];
                }
            }
        }
        for i in 0..m {
            for k in 0..m {
                self.binv[i * m + k] = work[i * 2 * m + m + k];
            }
        }
        self.x_b = self.binv_times(&self.b);
        self.pivots_since_refactor = 0;
        Ok(())
    }

    fn binv_times(&self, v: &[f64]) -> Vec<f64> {
        let m = self.m;
        (0..m)
            .map(|i| {
                let row = &self.binv[i * m..(i + 1) * m];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    fn feasibility_residual(&self) -> f64 {
        let m = self.m;
        let mut worst = 0.0f64;
        for i in 0..m {
            let mut s = 0.0;
            for (k, &bj) in self.basis.iter().enumerate() {
                s += self.cols[bj][i] * self.x_b[k];
            }
            worst = worst.max((s - self.b[i]).abs());
        }
        worst
    }

    /// Runs simplex iterations with the current costs until optimal or
    /// unbounded, honoring the iteration budget. Artificial columns never
    /// enter the basis; they only leave.
    fn run(&mut self) -> Result<PhaseOutcome, LpError> {
        let m = self.m;
        loop {
            if self.iterations >= self.iteration_limit {
                return Err(LpError::IterationLimit {
                    iterations: self.iterations,
                });
            }
            // simplex multipliers y = c_Bᵀ B⁻¹
            let mut y = vec![0.0; m];
            for (i, &bj) in self.basis.iter().enumerate() {
                let cb = self.costs[bj];
                if cb == 0.0 {
                    continue;
                }
                for k in 0..m {
                    y[k] += cb * self.binv[i * m + k];
                }
            }
            // pricing
            let mut entering: Option<(f64, usize)> = None;
            for j in 0..self.n_total {
                if self.in_basis[j] {
                    continue;
                }
                if self.is_artificial(j) {
                    continue;
                }
                let col = &self.cols[j];
                let d = self.costs[j] - y.iter().zip(col).map(|(a, b)| a * b).sum::<f64>();
                if d >= -OPT_TOL {
                    continue;
                }
                if self.bland {
                    entering = Some((d, j));
                    break; // lowest eligible index
                }
                match entering {
                    None => entering = Some((d, j)),
                    Some((best, _)) if d < best => entering = Some((d, j)),
                    _ => {}
                }
            }
            let Some((_, q)) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };

            let alpha = self.binv_times(&self.cols[q]);
            let mut leave: Option<(f64, usize)> = None; // (ratio, row)
            for (i, &ai) in alpha.iter().enumerate() {
                if ai <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.x_b[i].max(0.0) / ai;
                let better = match leave {
                    None => true,
                    Some((best, row)) => {
                        if ratio < best - 1e-12 * (1.0 + best) {
                            true
                        } else if ratio <= best + 1e-12 * (1.0 + best) {
                            if self.bland {
                                self.basis[i] < self.basis[row]
                            } else {
                                // prefer the larger pivot for stability,
                                // then the lower basic index
                                ai > alpha[row] + 1e-12
                                    || (ai >= alpha[row] - 1e-12
                                        && self.basis[i] < self.basis[row])
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((ratio, i));
                }
            }
            let Some((theta, r)) = leave else {
                return Ok(PhaseOutcome::Unbounded);
            };

            if theta <= 1e-10 * self.b_scale {
                self.degenerate_run += 1;
                if self.degenerate_run > self.bland_after {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }

            // pivot: update basic values and the basis inverse
            let ar = alpha[r];
            for i in 0..m {
                if i != r {
                    self.x_b[i] -= theta * alpha[i];
                }
            }
            self.x_b[r] = theta;
            for k in 0..m {
                self.binv[r * m + k] /= ar;
            }
            for i in 0..m {
                if i == r {
                    continue;
                }
                let f = alpha[i];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    self.binv[i * m + k] -= f * self.binv[r * m + k];
                }
            }
            self.in_basis[self.basis[r]] = false;
            self.in_basis[q] = true;
            self.basis[r] = q;
            self.iterations += 1;
            self.pivots_since_refactor += 1;

            // a full residual check is quadratic, so drift is sampled
            if self.pivots_since_refactor >= REFACTOR_EVERY
                || (self.iterations.is_multiple_of(16)
                    && self.feasibility_residual() > 1e-9 * self.b_scale)
            {
                self.refactor()?;
            }
        }
    }

    /// Pivots zero-level artificial variables out of the basis; rows that
    /// cannot be covered by any structural column are redundant and removed.
    fn drive_out_artificials(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut redundant: Vec<usize> = Vec::new();
        for r in 0..m {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let mut pivoted = false;
            for j in 0..self.n_struct {
                if self.in_basis[j] {
                    continue;
                }
                let alpha_r: f64 = (0..m)
                    .map(|k| self.binv[r * m + k] * self.cols[j][k])
                    .sum();
                if alpha_r.abs() <= PIVOT_TOL {
                    continue;
                }
                let alpha = self.binv_times(&self.cols[j]);
                let ar = alpha[r];
                for i in 0..m {
                    if i != r {
                        self.x_b[i] -= self.x_b[r] / ar * alpha[i];
                    }
                }
                self.x_b[r] /= ar;
                for k in 0..m {
                    self.binv[r * m + k] /= ar;
                }
                for i in 0..m {
                    if i == r {
                        continue;
                    }
                    let f = alpha[i];
                    if f == 0.0 {
                        continue;
                    }
                    for k in 0..m {
                        self.binv[i * m + k] -= f * self.binv[r * m + k];
                    }
                }
                self.in_basis[self.basis[r]] = false;
                self.in_basis[j] = true;
                self.basis[r] = j;
                pivoted = true;
                break;
            }
            if !pivoted {
                redundant.push(r);
            }
        }
        if !redundant.is_empty() {
            for col in self.cols.iter_mut() {
                let mut keep = 0;
                for i in 0..m {
                    if !redundant.contains(&i) {
                        col[keep] = col[i];
                        keep += 1;
                    }
                }
                col.truncate(keep);
            }
            let mut keep_b = Vec::with_capacity(m - redundant.len());
            let mut keep_basis = Vec::with_capacity(m - redundant.len());
            let mut keep_rows = Vec::with_capacity(m - redundant.len());
            for i in 0..m {
                if !redundant.contains(&i) {
                    keep_b.push(self.b[i]);
                    keep_basis.push(self.basis[i]);
                    keep_rows.push(self.kept_rows[i]);
                }
            }
            self.b = keep_b;
            self.basis = keep_basis;
            self.kept_rows = keep_rows;
            self.m -= redundant.len();
            self.binv = vec![0.0; self.m * self.m];
            self.refactor()?;
        }
        Ok(())
    }
}

/// Two-phase revised simplex. `Infeasible` and `Unbounded` come back as
/// statuses; `IterationLimit` is an error signaling a numerical pathology.
pub fn solve(p: &LpProblem) -> Result<LpSolution, LpError> {
    let n = p.num_vars();
    let mut s = Simplex::new(p);

    // phase 1: drive the artificial variables to zero; once out of the
    // basis an artificial never re-enters
    for j in s.n_struct..s.n_total {
        s.costs[j] = 1.0;
    }
    match s.run()? {
        PhaseOutcome::Unbounded => {
            // cannot happen: the phase-1 objective is bounded below by 0
            return Err(LpError::IterationLimit {
                iterations: s.iterations,
            });
        }
        PhaseOutcome::Optimal => {}
    }
    let artificial_mass: f64 = s
        .basis
        .iter()
        .zip(&s.x_b)
        .filter(|(&bj, _)| bj >= s.n_struct)
        .map(|(_, &v)| v.max(0.0))
        .sum();
    if artificial_mass > 1e-8 * s.b_scale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            z: Vector::zeros(n),
            objective: 0.0,
            basis: Vec::new(),
            kept_rows: s.kept_rows.clone(),
            iterations: s.iterations,
        });
    }
    s.drive_out_artificials()?;

    // phase 2: the real objective
    for j in 0..s.n_total {
        s.costs[j] = if j < s.n_struct { p.c[j] } else { 0.0 };
    }
    s.bland = false;
    s.degenerate_run = 0;
    let outcome = s.run()?;

    match outcome {
        PhaseOutcome::Unbounded => Ok(LpSolution {
            status: LpStatus::Unbounded,
            z: Vector::zeros(n),
            objective: 0.0,
            basis: Vec::new(),
            kept_rows: s.kept_rows.clone(),
            iterations: s.iterations,
        }),
        PhaseOutcome::Optimal => {
            let mut z = vec![0.0; n];
            for (i, &bj) in s.basis.iter().enumerate() {
                if bj < n {
                    z[bj] = s.x_b[i];
                }
            }
            let objective = p.c.iter().zip(&z).map(|(a, b)| a * b).sum();
            Ok(LpSolution {
                status: LpStatus::Optimal,
                z: Vector::new(z)?,
                objective,
                basis: s.basis.clone(),
                kept_rows: s.kept_rows.clone(),
                iterations: s.iterations,
            })
        }
    }
}

/// Independent optimality diagnostics: primal feasibility, dual
/// feasibility from basis-derived multipliers, complementary slackness.
pub fn check_optimality(p: &LpProblem, s: &LpSolution) -> OptimalityReport {
    assert_eq!(s.status, LpStatus::Optimal, "check requires an optimum");
    let m = p.num_constraints();
    let n = p.num_vars();
    let az = p.a.matvec(&s.z).expect("shapes");
    let b_scale = 1.0 + p.b.linf();
    let primal_residual = (0..m)
        .map(|i| (az[i] - p.b[i]).abs())
        .fold(0.0f64, f64::max)
        / b_scale;

    // multipliers: solve Bᵀ y = c_B over the kept rows by Gaussian
    // elimination; dropped redundant rows take multiplier zero
    let k = s.basis.len();
    assert_eq!(k, s.kept_rows.len());
    let mut aug = vec![0.0; k * (k + 1)];
    for (row, &bj) in s.basis.iter().enumerate() {
        for col in 0..k {
            // Bᵀ(row, col) = B(col, row) = a[kept_rows[col], basis[row]]
            aug[row * (k + 1) + col] = p.a.get(s.kept_rows[col], bj);
        }
        aug[row * (k + 1) + k] = p.c[bj];
    }
    let y_kept = gauss(&mut aug, k);
    let mut y = vec![0.0; m];
    for (i, &row) in s.kept_rows.iter().enumerate() {
        y[row] = y_kept[i];
    }

    let mut min_reduced = f64::INFINITY;
    let mut comp = 0.0f64;
    let obj_scale = 1.0 + s.objective.abs();
    let c_scale = 1.0 + p.c.linf();
    for j in 0..n {
        let yaj: f64 = (0..m).map(|i| y[i] * p.a.get(i, j)).sum();
        let d = p.c[j] - yaj;
        min_reduced = min_reduced.min(d);
        comp = comp.max((s.z[j] * d).abs());
    }
    let dual_objective = (0..m).map(|i| y[i] * p.b[i]).sum();
    let comp_rel = comp / obj_scale;
    OptimalityReport {
        primal_residual,
        min_reduced_cost: min_reduced,
        complementary_slackness: comp_rel,
        dual_objective,
        pass: primal_residual <= 1e-8
            && min_reduced >= -1e-8 * c_scale
            && comp_rel <= 1e-8,
    }
}

fn gauss(aug: &mut [f64], k: usize) -> Vec<f64> {
    let w = k + 1;
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&a, &b| {
                aug[a * w + col]
                    .abs()
                    .partial_cmp(&aug[b * w + col].abs())
                    .expect("finite")
            })
            .expect("nonempty");
        if piv != col {
            for j in 0..w {
                aug.swap(col * w + j, piv * w + j);
            }
        }
        let d = aug[col * w + col];
        if d.abs() <= 1e-300 {
            continue;
        }
        for i in 0..k {
            if i == col {
                continue;
            }
            let f = aug[i * w + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..w {
                aug[i * w + j] -= f * aug[col * w + j];
            }
        }
    }
    (0..k)
        .map(|i| {
            let d = aug[i * w + i];
            if d.abs() <= 1e-300 {
                0.0
            } else {
                aug[i * w + k] / d
            }
        })
        .collect()
}
