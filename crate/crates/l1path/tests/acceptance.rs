//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities (run with `--nocapture` to see them).
//!
//! Criterion 10 (byte-identical command output) lives in the CLI crate's
//! own acceptance target, since it exercises the binary.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use l1path::dantzig::{self, DsForm};
use l1path::data::{diabetes64, StandardizeMode};
use l1path::lars;
use l1path::linalg::{Matrix, Vector};
use l1path::lp::{self, LpProblem, LpStatus};
use l1path::sim::{self, Scenario, StudyConfig};

const TABLE_S: f64 = 1734.79;
const PATH_TOL: f64 = 1e-10;

/// Random regression instance: standard normal design, sparse normal
/// coefficients, unit noise.
fn instance(seed: u64, n: usize, p: usize) -> (Matrix, Vector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Matrix::from_vec(
        n,
        p,
        (0..n * p)
            .map(|_| standard_normal(&mut rng))
            .collect(),
    )
    .unwrap();
    let k = (p / 3).max(1);
    let beta: Vec<f64> = (0..p)
        .map(|j| {
            if j < k {
                2.0 * standard_normal(&mut rng)
            } else {
                0.0
            }
        })
        .collect();
    let y: Vec<f64> = (0..n)
        .map(|i| {
            let fit: f64 = (0..p).map(|j| x.get(i, j) * beta[j]).sum();
            fit + standard_normal(&mut rng)
        })
        .collect();
    (x, Vector::new(y).unwrap())
}

/// Box-Muller from uniform draws; self-contained so the acceptance oracle
/// stack shares nothing with the library's samplers.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Independent penalized-form oracle: cyclic coordinate descent with
/// soft-thresholding, run to convergence.
fn coordinate_descent(x: &Matrix, y: &Vector, lambda: f64) -> Vec<f64> {
    let n = x.rows();
    let p = x.cols();
    let col_sq: Vec<f64> = (0..p)
        .map(|j| (0..n).map(|i| x.get(i, j) * x.get(i, j)).sum())
        .collect();
    let mut beta = vec![0.0; p];
    let mut resid: Vec<f64> = (0..n).map(|i| y[i]).collect();
    for _sweep in 0..500_000 {
        let mut max_change = 0.0f64;
        for j in 0..p {
            let old = beta[j];
            let cj: f64 = (0..n).map(|i| x.get(i, j) * resid[i]).sum();
            let z = cj + col_sq[j] * old;
            let new = soft(z, lambda) / col_sq[j];
            if new != old {
                for i in 0..n {
                    resid[i] -= (new - old) * x.get(i, j);
                }
                beta[j] = new;
            }
            max_change = max_change.max((new - old).abs());
        }
        if max_change <= 1e-11 {
            break;
        }
    }
    beta
}

fn soft(z: f64, lambda: f64) -> f64 {
    z.signum() * (z.abs() - lambda).max(0.0)
}

/// Brute-force LP optimum over every basic feasible solution.
fn enumerate_lp_optimum(p: &LpProblem) -> Option<f64> {
    let m = p.num_constraints();
    let n = p.num_vars();
    let mut best: Option<f64> = None;
    let mut combo: Vec<usize> = (0..m).collect();
    loop {
        let w = m + 1;
        let mut aug = vec![0.0; m * w];
        for i in 0..m {
            for (col, &j) in combo.iter().enumerate() {
                aug[i * w + col] = p.a.get(i, j);
            }
            aug[i * w + m] = p.b[i];
        }
        let mut singular = false;
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&a, &b| {
                    aug[a * w + col]
                        .abs()
                        .partial_cmp(&aug[b * w + col].abs())
                        .unwrap()
                })
                .unwrap();
            if aug[piv * w + col].abs() < 1e-10 {
                singular = true;
                break;
            }
            if piv != col {
                for j in 0..w {
                    aug.swap(col * w + j, piv * w + j);
                }
            }
            for i in 0..m {
                if i == col {
                    continue;
                }
                let f = aug[i * w + col] / aug[col * w + col];
                for j in col..w {
                    aug[i * w + j] -= f * aug[col * w + j];
                }
            }
        }
        if !singular {
            let xs: Vec<f64> = (0..m).map(|i| aug[i * w + m] / aug[i * w + i]).collect();
            if xs.iter().all(|&v| v >= -1e-9) {
                let obj: f64 = combo.iter().zip(&xs).map(|(&j, &v)| p.c[j] * v).sum();
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
        let mut i = m;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if combo[i] != i + n - m {
                combo[i] += 1;
                for k2 in (i + 1)..m {
                    combo[k2] = combo[k2 - 1] + 1;
                }
                break;
            }
        }
    }
}

fn nonzero_count(beta: &Vector) -> usize {
    beta.iter().filter(|b| b.abs() > 1e-8).count()
}

#[test]
fn criterion_01_table_objective_reproduction() {
    let start = Instant::now();
    let d = diabetes64(StandardizeMode::UnitL2Norm);
    let path = lars::lasso_path(&d.x, &d.y, 2000, PATH_TOL).unwrap();
    let bp = path.nearest_breakpoint_by_l1(TABLE_S);
    let lasso = dantzig::residual_stats(&d.x, &d.y, &bp.beta);
    let ds = dantzig::solve_ds(&d.x, &d.y, DsForm::L1Budget(bp.l1_norm)).unwrap();
    let ds_stats = dantzig::residual_stats(&d.x, &d.y, &ds.beta);
    let elapsed = start.elapsed();

    assert!(
        (lasso.linf - 83.6413).abs() <= 0.05,
        "lasso max inner {} vs 83.6413",
        lasso.linf
    );
    assert!(
        (ds_stats.linf - 83.4945).abs() <= 0.05,
        "selector max inner {} vs 83.4945",
        ds_stats.linf
    );
    assert_eq!(nonzero_count(&bp.beta), 12, "lasso nonzero count");
    assert_eq!(ds.nonzero.len(), 12, "selector nonzero count");
    assert!(
        (lasso.mse - 2827.4).abs() <= 1.0,
        "lasso mse {} vs 2827.4",
        lasso.mse
    );
    assert!(
        (ds_stats.mse - 2829.4).abs() <= 1.0,
        "selector mse {} vs 2829.4",
        ds_stats.mse
    );
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");

    // coefficient-level values are reported, not fatal: an lp optimum need
    // not be unique at coefficient level
    let coef_checks = [
        ("lasso beta_3", bp.beta[2], 502.8695),
        ("lasso beta_9", bp.beta[8], 463.4805),
        ("lasso beta_4", bp.beta[3], 233.5998),
        ("selector beta_3", ds.beta[2], 543.7634),
    ];
    let mut coef_notes = String::new();
    for (name, got, want) in coef_checks {
        if (got - want).abs() > 1.0 {
            coef_notes.push_str(&format!(" [reported: {name} = {got:.4} vs {want}]"));
        }
    }
    println!(
        "criterion 1: PASS — lasso linf {:.4} / mse {:.1} / nnz 12, selector linf {:.4} / mse {:.1} / nnz 12, {:.2?}{}",
        lasso.linf, lasso.mse, ds_stats.linf, ds_stats.mse, elapsed, coef_notes
    );
}

#[test]
fn criterion_02_structural_claim() {
    let start = Instant::now();
    let d = diabetes64(StandardizeMode::UnitL2Norm);
    let path = lars::lasso_path(&d.x, &d.y, 2000, PATH_TOL).unwrap();

    // the selector at the published budget: someone attains the maximal
    // inner product while sitting at zero (variable 10 in the table)
    let ds = dantzig::solve_ds(&d.x, &d.y, DsForm::L1Budget(TABLE_S)).unwrap();
    let ds_stats = dantzig::residual_stats(&d.x, &d.y, &ds.beta);
    let witness: Vec<usize> = (0..64)
        .filter(|&j| {
            ds_stats.inner_products[j].abs() >= ds_stats.linf - 1e-6
                && ds.beta[j].abs() <= 1e-8
        })
        .collect();
    assert!(
        !witness.is_empty(),
        "no zero-coefficient variable attains the selector's maximum"
    );
    assert!(
        witness.contains(&9),
        "variable 10 should be a witness, got {witness:?}"
    );

    // the lasso at the same budget: maximal inner products and nonzero
    // coefficients are the same set
    let beta = lars::beta_at_l1(&path, TABLE_S);
    let lasso_stats = dantzig::residual_stats(&d.x, &d.y, &beta);
    let attaining: Vec<usize> = (0..64)
        .filter(|&j| lasso_stats.inner_products[j].abs() >= lasso_stats.linf - 1e-6)
        .collect();
    let nonzero: Vec<usize> = (0..64).filter(|&j| beta[j].abs() > 1e-8).collect();
    assert_eq!(
        attaining, nonzero,
        "lasso attaining set differs from its nonzero set"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "criterion 2: PASS — selector witness vars {:?} (1-based {:?}), lasso attaining == nonzero ({} vars), {:.2?}",
        witness,
        witness.iter().map(|j| j + 1).collect::<Vec<_>>(),
        nonzero.len(),
        elapsed
    );
}

fn suite_instances() -> Vec<(Matrix, Vector)> {
    let mut meta = ChaCha8Rng::seed_from_u64(20_240_501);
    (0..50)
        .map(|i| {
            let n = meta.gen_range(10..=40);
            let p = meta.gen_range(5..=60);
            instance(9_000 + i, n, p)
        })
        .collect()
}

#[test]
fn criterion_03_kkt_suite() {
    let start = Instant::now();
    let mut breakpoints = 0usize;
    for (idx, (x, y)) in suite_instances().iter().enumerate() {
        let path = lars::lasso_path(x, y, 2000, PATH_TOL).unwrap();
        for seg in &path.segments {
            let rep = lars::kkt_check(x, y, &seg.beta, seg.lambda, 1e-8);
            assert!(
                rep.passes(),
                "instance {idx}: λ={} violations {}/{}",
                seg.lambda,
                rep.max_active_violation,
                rep.max_inactive_excess
            );
            breakpoints += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "criterion 3: PASS — {breakpoints} breakpoints across 50 instances all satisfy kkt at 1e-8, {:.2?}",
        elapsed
    );
}

#[test]
fn criterion_04_lasso_oracle_equivalence() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for (x, y) in suite_instances().iter() {
        let path = lars::lasso_path(x, y, 2000, PATH_TOL).unwrap();
        let lambda0 = path.first_lambda();
        for frac in [0.75, 0.5, 0.3, 0.15, 0.05] {
            let lambda = frac * lambda0;
            let ours = lars::beta_at_lambda(&path, lambda);
            let oracle = coordinate_descent(x, y, lambda);
            let diff = (0..x.cols())
                .map(|j| (ours[j] - oracle[j]).abs())
                .fold(0.0f64, f64::max);
            worst = worst.max(diff);
            assert!(diff <= 1e-6, "ℓ∞ gap {diff} at λ={lambda}");
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "criterion 4: PASS — {checked} penalty levels match coordinate descent within 1e-6 (worst {worst:.2e}), {:.2?}",
        elapsed
    );
}

#[test]
fn criterion_05_selector_oracle_equivalence() {
    let start = Instant::now();
    let mut meta = ChaCha8Rng::seed_from_u64(555);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = meta.gen_range(3..=8);
        let p = meta.gen_range(1..=3);
        let (x, y) = instance(70_000 + i, n, p);
        let lambda = 0.4 * x.tr_matvec(&y).unwrap().linf();
        let problem = dantzig::build_lp_gradient_cap(&x, &y, lambda);
        let sol = lp::solve(&problem).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        let oracle = enumerate_lp_optimum(&problem).expect("feasible by construction");
        let diff = (sol.objective - oracle).abs();
        worst = worst.max(diff);
        assert!(diff <= 1e-8, "instance {i}: {} vs {oracle}", sol.objective);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "criterion 5: PASS — 20 gradient-cap lps match basic-solution enumeration within 1e-8 (worst {worst:.2e}), {:.2?}",
        elapsed
    );
}

#[test]
fn criterion_06_matched_budget_dominance() {
    let start = Instant::now();
    let mut meta = ChaCha8Rng::seed_from_u64(777);
    let mut checked = 0usize;
    for i in 0..20 {
        let n = meta.gen_range(12..=30);
        let p = meta.gen_range(6..=25);
        let (x, y) = instance(80_000 + i, n, p);
        let path = lars::lasso_path(&x, &y, 2000, PATH_TOL).unwrap();
        let total = path.final_l1();
        for k in 1..=10 {
            let s = total * k as f64 / 11.0;
            let lasso_beta = lars::beta_at_l1(&path, s);
            let lasso = dantzig::residual_stats(&x, &y, &lasso_beta);
            let ds = dantzig::solve_ds(&x, &y, DsForm::L1Budget(s)).unwrap();
            let ds_stats = dantzig::residual_stats(&x, &y, &ds.beta);
            assert!(
                ds_stats.linf <= lasso.linf + 1e-8,
                "instance {i}, s={s}: selector linf {} > lasso {}",
                ds_stats.linf,
                lasso.linf
            );
            assert!(
                lasso.rss <= ds_stats.rss + 1e-8,
                "instance {i}, s={s}: lasso rss {} > selector {}",
                lasso.rss,
                ds_stats.rss
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "criterion 6: PASS — dominance holds at {checked} matched budgets, {:.2?}",
        elapsed
    );
}

#[test]
fn criterion_07_np_sparse_study() {
    let start = Instant::now();
    let cfg = StudyConfig::preset(Scenario::NpSparse);
    assert_eq!((cfg.n, cfg.p, cfg.k_nonzero, cfg.reps), (25, 100, 15, 100));
    let curve = sim::run_study(&cfg).unwrap();
    let lasso_min = curve
        .lasso_mean
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let ds_min = curve.ds_mean.iter().cloned().fold(f64::INFINITY, f64::min);
    let interior = 1..curve.grid.len() - 1;
    let count = interior.len();
    let dominated = interior
        .filter(|&i| curve.lasso_mean[i] <= curve.ds_mean[i])
        .count();
    let frac = dominated as f64 / count as f64;
    let elapsed = start.elapsed();

    assert!(
        lasso_min < ds_min,
        "lasso min {lasso_min} not below selector min {ds_min}"
    );
    assert!(
        frac >= 0.80,
        "lasso below selector at only {frac:.2} of interior grid points"
    );
    assert!(elapsed < Duration::from_secs(900), "took {elapsed:?}");
    println!(
        "criterion 7: PASS — lasso min {lasso_min:.4} < selector min {ds_min:.4}, dominance at {:.0}% of interior points, {:.1?}",
        frac * 100.0,
        elapsed
    );
}

#[test]
fn criterion_08_pn_sparse_study() {
    let start = Instant::now();
    let cfg = StudyConfig::preset(Scenario::PnSparse);
    assert_eq!((cfg.n, cfg.p, cfg.k_nonzero, cfg.reps), (100, 25, 5, 100));
    let curve = sim::run_study(&cfg).unwrap();
    let lasso_min = curve
        .lasso_mean
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let ds_min = curve.ds_mean.iter().cloned().fold(f64::INFINITY, f64::min);
    let gap = (lasso_min - ds_min).abs() / ds_min;
    let elapsed = start.elapsed();
    assert!(gap <= 0.05, "min rmse gap {gap:.4} exceeds 5%");
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    println!(
        "criterion 8: PASS — min rmse {lasso_min:.4} (lasso) vs {ds_min:.4} (selector), gap {:.2}%, {:.1?}",
        gap * 100.0,
        elapsed
    );
}

#[test]
fn criterion_09_trivial_limits() {
    let start = Instant::now();
    // s = 0 and λ ≥ ‖Xᵀy‖∞ give zero for both methods
    let (x, y) = instance(42, 20, 7);
    let path = lars::lasso_path(&x, &y, 2000, PATH_TOL).unwrap();
    let lambda0 = x.tr_matvec(&y).unwrap().linf();
    assert_eq!(lars::beta_at_l1(&path, 0.0), Vector::zeros(7));
    assert_eq!(lars::beta_at_lambda(&path, lambda0 * 1.1), Vector::zeros(7));
    assert_eq!(lars::beta_at_lambda(&path, lambda0), Vector::zeros(7));
    let ds0 = dantzig::solve_ds(&x, &y, DsForm::L1Budget(0.0)).unwrap();
    assert_eq!(ds0.beta, Vector::zeros(7));
    let dsl = dantzig::solve_ds(&x, &y, DsForm::GradientCap(lambda0)).unwrap();
    assert_eq!(dsl.beta, Vector::zeros(7));

    // λ = 0 on overdetermined full-rank data is least squares
    let ols_beta = lars::beta_at_lambda(&path, 0.0);
    let resid_corr = x
        .tr_matvec(
            &Vector::new(
                (0..20)
                    .map(|i| {
                        y[i] - (0..7).map(|j| x.get(i, j) * ols_beta[j]).sum::<f64>()
                    })
                    .collect(),
            )
            .unwrap(),
        )
        .unwrap();
    assert!(
        resid_corr.linf() <= 1e-6,
        "normal equations violated by {}",
        resid_corr.linf()
    );
    let elapsed = start.elapsed();
    println!(
        "criterion 9: PASS — zero limits exact for both methods, λ=0 endpoint solves the normal equations to {:.2e}, {:.2?}",
        resid_corr.linf(),
        elapsed
    );
}
