//! Replicated synthetic-regression study comparing the lasso and the
//! Dantzig selector by root-mean-squared coefficient error over a shared
//! parameter grid.
//!
//! Each replicate draws a fresh design and noise while the true coefficient
//! vector stays fixed, computes the full lasso path once and interpolates
//! it, and solves one selector program per grid value. Grids are expressed
//! as fractions of a per-replicate maximum (the path's final ℓ1 norm, or
//! `‖Xᵀy‖∞` for penalty grids) so that curves pool across replicates with
//! different data scales.

use rayon::prelude::*;
use thiserror::Error;

use crate::dantzig::{self, DsForm};
use crate::data::{self, SynthSpec};
use crate::lars::{self, LarsError};
use crate::linalg::Vector;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("replicate seed {seed}: {source}")]
    Path {
        seed: u64,
        #[source]
        source: LarsError,
    },
    #[error("replicate seed {seed}: {source}")]
    Selector {
        seed: u64,
        #[source]
        source: dantzig::DsError,
    },
    #[error("replicate {rep}: {source}")]
    Study {
        rep: usize,
        #[source]
        source: Box<SimError>,
    },
}

/// The three data-generating scenarios of the study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// n < p with a sparse coefficient vector (n=25, p=100, 15 nonzero).
    NpSparse,
    /// n < p with a dense coefficient vector (n=25, p=100, all nonzero).
    NpDense,
    /// n > p with a sparse coefficient vector (n=100, p=25, 5 nonzero).
    PnSparse,
}

/// Parameter-grid flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Grid on the ℓ1 norm of the estimate.
    L1Grid,
    /// Grid on the penalty / gradient cap λ.
    LambdaGrid,
}

/// Full study configuration. Presets fill the scenario defaults; every
/// field stays overridable.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub scenario: Scenario,
    pub n: usize,
    pub p: usize,
    pub k_nonzero: usize,
    pub coef_sd: f64,
    pub noise_sd: f64,
    pub reps: usize,
    pub grid_kind: GridKind,
    pub grid_points: usize,
    pub beta_seed: u64,
    pub master_seed: u64,
}

impl StudyConfig {
    pub fn preset(scenario: Scenario) -> Self {
        let (n, p, k_nonzero, coef_sd) = match scenario {
            Scenario::NpSparse => (25, 100, 15, 4.0),
            Scenario::NpDense => (25, 100, 100, 1.0),
            Scenario::PnSparse => (100, 25, 5, 4.0),
        };
        Self {
            scenario,
            n,
            p,
            k_nonzero,
            coef_sd,
            noise_sd: 1.0,
            reps: 100,
            grid_kind: GridKind::L1Grid,
            grid_points: 41,
            beta_seed: 7,
            master_seed: 1000,
        }
    }

    fn synth_spec(&self) -> SynthSpec {
        SynthSpec {
            n: self.n,
            p: self.p,
            k_nonzero: self.k_nonzero,
            coef_sd: self.coef_sd,
            noise_sd: self.noise_sd,
            dense: self.k_nonzero == self.p,
        }
    }
}

/// Pointwise mean and sample standard deviation of the per-replicate RMSE
/// for both estimators, over the fractional grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseCurve {
    pub grid: Vector,
    pub lasso_mean: Vector,
    pub lasso_sd: Vector,
    pub ds_mean: Vector,
    pub ds_sd: Vector,
    pub reps_used: usize,
}

/// `sqrt(mean((β̂_j − β_j)²))`.
pub fn rmse(beta_hat: &Vector, beta_true: &Vector) -> f64 {
    assert_eq!(
        beta_hat.len(),
        beta_true.len(),
        "rmse requires equal lengths"
    );
    let p = beta_true.len();
    let ss: f64 = beta_hat
        .iter()
        .zip(beta_true.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    (ss / p as f64).sqrt()
}

/// Evenly spaced grid from 0 to `x_max` inclusive.
pub fn make_grid(_kind: GridKind, x_max: f64, points: usize) -> Vector {
    assert!(x_max > 0.0 && points >= 2);
    let step = x_max / (points - 1) as f64;
    Vector::new(
        (0..points)
            .map(|i| if i + 1 == points { x_max } else { i as f64 * step })
            .collect(),
    )
    .expect("finite grid")
}

const SIM_PATH_TOL: f64 = 1e-10;

/// RMSE vectors for one replicate, over a grid of fractions in `[0, 1]` of
/// the replicate's own parameter maximum.
pub fn run_replicate(
    cfg: &StudyConfig,
    beta_true: &Vector,
    rep_seed: u64,
    fractions: &Vector,
) -> Result<(Vec<f64>, Vec<f64>), SimError> {
    let (x, noise) = data::draw_design_and_noise(&cfg.synth_spec(), rep_seed);
    let fitted = x.matvec(beta_true).expect("beta length p");
    let y = Vector::new(
        fitted
            .iter()
            .zip(noise.iter())
            .map(|(f, e)| f + e)
            .collect(),
    )
    .expect("finite");

    let max_steps = 20 * (cfg.n.min(cfg.p) + 2);
    let path = lars::lasso_path(&x, &y, max_steps, SIM_PATH_TOL)
        .map_err(|source| SimError::Path { seed: rep_seed, source })?;
    let x_max = match cfg.grid_kind {
        GridKind::L1Grid => path.final_l1(),
        GridKind::LambdaGrid => path.first_lambda(),
    };

    let zero = Vector::zeros(cfg.p);
    let mut lasso_rmse = Vec::with_capacity(fractions.len());
    let mut ds_rmse = Vec::with_capacity(fractions.len());
    for &frac in fractions.iter() {
        let v = frac * x_max;
        let (beta_l, beta_d) = match cfg.grid_kind {
            GridKind::L1Grid => {
                let bl = lars::beta_at_l1(&path, v);
                let bd = if v == 0.0 {
                    zero.clone()
                } else {
                    dantzig::solve_ds(&x, &y, DsForm::L1Budget(v))
                        .map_err(|source| SimError::Selector { seed: rep_seed, source })?
                        .beta
                };
                (bl, bd)
            }
            GridKind::LambdaGrid => {
                let bl = lars::beta_at_lambda(&path, v);
                // at or above ‖Xᵀy‖∞ the zero vector is optimal with cost 0
                let bd = if v >= x_max {
                    zero.clone()
                } else {
                    dantzig::solve_ds(&x, &y, DsForm::GradientCap(v))
                        .map_err(|source| SimError::Selector { seed: rep_seed, source })?
                        .beta
                };
                (bl, bd)
            }
        };
        lasso_rmse.push(rmse(&beta_l, beta_true));
        ds_rmse.push(rmse(&beta_d, beta_true));
    }
    Ok((lasso_rmse, ds_rmse))
}

/// Pointwise mean and sample standard deviation over replicate rows; a
/// single replicate has sd zero by convention.
fn pointwise_mean_sd(rows: &[&Vec<f64>], g: usize) -> (Vec<f64>, Vec<f64>) {
    let reps = rows.len();
    let mut mean = vec![0.0; g];
    let mut sd = vec![0.0; g];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= reps as f64;
    }
    if reps > 1 {
        for row in rows {
            for i in 0..g {
                let d = row[i] - mean[i];
                sd[i] += d * d;
            }
        }
        for s in sd.iter_mut() {
            *s = (*s / (reps as f64 - 1.0)).sqrt();
        }
    }
    (mean, sd)
}

/// Runs the full study: one β draw, `reps` independent replicates (in
/// parallel; aggregation is order-independent), pointwise mean and sd.
pub fn run_study(cfg: &StudyConfig) -> Result<RmseCurve, SimError> {
    assert!(cfg.reps >= 1 && cfg.grid_points >= 2);
    let beta_true = data::draw_coefficients(&cfg.synth_spec(), cfg.beta_seed);
    let fractions = make_grid(cfg.grid_kind, 1.0, cfg.grid_points);

    let results: Result<Vec<(Vec<f64>, Vec<f64>)>, SimError> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| {
            let rep_seed = cfg.master_seed.wrapping_add(rep as u64);
            run_replicate(cfg, &beta_true, rep_seed, &fractions).map_err(|e| SimError::Study {
                rep,
                source: Box::new(e),
            })
        })
        .collect();
    let results = results?;

    let lasso_rows: Vec<&Vec<f64>> = results.iter().map(|r| &r.0).collect();
    let ds_rows: Vec<&Vec<f64>> = results.iter().map(|r| &r.1).collect();
    let (lasso_mean, lasso_sd) = pointwise_mean_sd(&lasso_rows, fractions.len());
    let (ds_mean, ds_sd) = pointwise_mean_sd(&ds_rows, fractions.len());

    Ok(RmseCurve {
        grid: fractions,
        lasso_mean: Vector::new(lasso_mean).expect("finite"),
        lasso_sd: Vector::new(lasso_sd).expect("finite"),
        ds_mean: Vector::new(ds_mean).expect("finite"),
        ds_sd: Vector::new(ds_sd).expect("finite"),
        reps_used: cfg.reps,
    })
}
