//! The four subcommands. Each writes a manifest header followed by the
//! body; bodies are deterministic given flags and seeds.

use l1path::dantzig::{self, DsForm};
use l1path::data::{self, StandardizeMode, StandardizedDesign};
use l1path::lars;
use l1path::linalg::Vector;
use l1path::sim::{self, StudyConfig};

use crate::output::{fixed, sig, RunManifest};
use crate::{CliError, DataArgs, Method, StdMode};

const PATH_TOL: f64 = 1e-10;

struct Design {
    design: StandardizedDesign,
    names: Vec<String>,
    label: String,
}

fn load_design(args: &DataArgs) -> Result<Design, CliError> {
    let mode: StandardizeMode = args.std.into();
    if args.diabetes64 {
        let dataset = crate::fixture::diabetes64_dataset();
        let names = dataset.column_names.clone();
        let design = data::standardize(&dataset, mode)?;
        return Ok(Design {
            design,
            names,
            label: "diabetes64".to_string(),
        });
    }
    let Some(path) = &args.data else {
        return Err(CliError::Usage(
            "a dataset is required: pass --data <csv> or --diabetes64".into(),
        ));
    };
    let dataset = data::load_csv(path, &args.response)?;
    let names = dataset.column_names.clone();
    let design = data::standardize(&dataset, mode)?;
    Ok(Design {
        design,
        names,
        label: path.display().to_string(),
    })
}

fn std_label(mode: StdMode) -> &'static str {
    match mode {
        StdMode::L2 => "l2",
        StdMode::Var => "var",
    }
}

pub fn cmd_path(
    args: &DataArgs,
    method: Method,
    grid: usize,
    l1_max_frac: Option<f64>,
    max_steps: usize,
    digits: usize,
) -> Result<(), CliError> {
    if let Some(f) = l1_max_frac {
        if !(f > 0.0 && f <= 1.0) {
            return Err(CliError::Usage(format!(
                "--l1-max-frac must be in (0, 1], got {f}"
            )));
        }
    }
    if max_steps == 0 {
        return Err(CliError::Usage("--max-steps must be at least 1".into()));
    }
    let d = load_design(args)?;
    let path = lars::lasso_path(&d.design.x, &d.design.y, max_steps, PATH_TOL)?;
    let l1_cap = l1_max_frac.map(|f| f * path.final_l1());

    let method_name = match method {
        Method::Lasso => "lasso",
        Method::Dantzig => "dantzig",
    };
    let mut manifest = RunManifest::new("path")
        .entry("dataset", &d.label)
        .entry("std", std_label(args.std))
        .entry("method", method_name)
        .entry("max_steps", max_steps)
        .entry("digits", digits);
    if let Some(cap) = l1_cap {
        manifest = manifest.entry("l1_max", sig(cap, digits));
    }
    if method == Method::Dantzig {
        manifest = manifest.entry("grid", grid);
    }

    let mut out = manifest.render();
    out.push_str("l1_norm,lambda");
    for name in &d.names {
        out.push_str(&format!(",beta_{name}"));
    }
    out.push('\n');

    let mut emit = |l1: f64, lambda: f64, beta: &Vector| {
        out.push_str(&sig(l1, digits));
        out.push(',');
        out.push_str(&sig(lambda, digits));
        for j in 0..beta.len() {
            out.push(',');
            out.push_str(&sig(beta[j], digits));
        }
        out.push('\n');
    };

    match method {
        Method::Lasso => {
            for seg in &path.segments {
                if l1_cap.is_some_and(|cap| seg.l1_norm > cap) {
                    break;
                }
                emit(seg.l1_norm, seg.lambda, &seg.beta);
            }
        }
        Method::Dantzig => {
            if grid < 2 {
                return Err(CliError::Usage("--grid must be at least 2".into()));
            }
            let x_max = l1_cap.unwrap_or_else(|| path.final_l1());
            for i in 0..grid {
                let s = x_max * i as f64 / (grid - 1) as f64;
                let sol = dantzig::solve_ds(&d.design.x, &d.design.y, DsForm::L1Budget(s))?;
                emit(sol.achieved_l1, sol.achieved_linf, &sol.beta);
            }
        }
    }
    print!("{out}");
    Ok(())
}

struct TableSide {
    inner: Vector,
    beta: Vector,
    mse: f64,
    linf: f64,
    nonzero: usize,
}

fn table_block(
    mode: StdMode,
    s: f64,
    digits: usize,
    csv: bool,
    names: &[String],
) -> Result<String, CliError> {
    let design = crate::fixture::diabetes64(mode.into());
    let path = lars::lasso_path(&design.x, &design.y, 2000, PATH_TOL)?;
    let bp = path.nearest_breakpoint_by_l1(s);
    let lasso_stats = dantzig::residual_stats(&design.x, &design.y, &bp.beta);
    let lasso = TableSide {
        nonzero: bp.beta.iter().filter(|b| b.abs() > 1e-8).count(),
        linf: lasso_stats.linf,
        mse: lasso_stats.mse,
        inner: lasso_stats.inner_products,
        beta: bp.beta.clone(),
    };
    let ds_sol = dantzig::solve_ds(&design.x, &design.y, DsForm::L1Budget(bp.l1_norm))?;
    let ds_stats = dantzig::residual_stats(&design.x, &design.y, &ds_sol.beta);
    let ds = TableSide {
        nonzero: ds_sol.nonzero.len(),
        linf: ds_stats.linf,
        mse: ds_stats.mse,
        inner: ds_stats.inner_products,
        beta: ds_sol.beta,
    };

    let mut out = String::new();
    let header = format!(
        "standardization: {} | requested s = {} | snapshot breakpoint l1 = {}",
        match mode {
            StdMode::L2 => "unit-l2-norm",
            StdMode::Var => "unit-variance",
        },
        sig(s, 6),
        sig(bp.l1_norm, 8),
    );
    if csv {
        out.push_str(&format!("# {header}\n"));
        out.push_str("variable,name,lasso_inner,lasso_beta,ds_inner,ds_beta\n");
        for j in 0..names.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                j + 1,
                names[j],
                fixed(lasso.inner[j], digits),
                fixed(lasso.beta[j], digits),
                fixed(ds.inner[j], digits),
                fixed(ds.beta[j], digits),
            ));
        }
        out.push_str(&format!(
            "# lasso: max_inner = {}, mse = {}, nonzero = {}\n",
            fixed(lasso.linf, digits),
            fixed(lasso.mse, 1),
            lasso.nonzero
        ));
        out.push_str(&format!(
            "# dantzig: max_inner = {}, mse = {}, nonzero = {}\n",
            fixed(ds.linf, digits),
            fixed(ds.mse, 1),
            ds.nonzero
        ));
    } else {
        out.push_str(&format!("{header}\n\n"));
        out.push_str(&format!(
            "{:>4} {:>10} {:>12} {:>12} {:>12} {:>12}\n",
            "var", "name", "lasso_inner", "lasso_beta", "ds_inner", "ds_beta"
        ));
        for j in 0..names.len() {
            out.push_str(&format!(
                "{:>4} {:>10} {:>12} {:>12} {:>12} {:>12}\n",
                j + 1,
                names[j],
                fixed(lasso.inner[j], digits),
                fixed(lasso.beta[j], digits),
                fixed(ds.inner[j], digits),
                fixed(ds.beta[j], digits),
            ));
        }
        out.push_str(&format!(
            "\nlasso:   max |inner| = {}  mse = {}  nonzero = {}\n",
            fixed(lasso.linf, digits),
            fixed(lasso.mse, 1),
            lasso.nonzero
        ));
        out.push_str(&format!(
            "dantzig: max |inner| = {}  mse = {}  nonzero = {}\n",
            fixed(ds.linf, digits),
            fixed(ds.mse, 1),
            ds.nonzero
        ));
    }
    Ok(out)
}

pub fn cmd_table1(
    std: Option<StdMode>,
    s: f64,
    digits: usize,
    csv: bool,
) -> Result<(), CliError> {
    if s < 0.0 {
        return Err(CliError::Usage(format!("--s must be nonnegative, got {s}")));
    }
    let names = crate::fixture::diabetes64_dataset().column_names;
    let modes: Vec<StdMode> = match std {
        Some(m) => vec![m],
        None => vec![StdMode::L2, StdMode::Var],
    };
    let mut out = RunManifest::new("table1")
        .entry("s", s)
        .entry(
            "std",
            std.map_or("both".to_string(), |m| std_label(m).to_string()),
        )
        .entry("digits", digits)
        .render();
    for (i, mode) in modes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&table_block(*mode, s, digits, csv, &names)?);
    }
    print!("{out}");
    Ok(())
}

pub fn cmd_simulate(cfg: &StudyConfig, digits: usize) -> Result<(), CliError> {
    if cfg.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    if cfg.grid_points < 2 {
        return Err(CliError::Usage("--grid-points must be at least 2".into()));
    }
    if cfg.k_nonzero > cfg.p {
        return Err(CliError::Usage(format!(
            "--k ({}) cannot exceed --p ({})",
            cfg.k_nonzero, cfg.p
        )));
    }
    let curve = sim::run_study(cfg)?;
    let mut out = RunManifest::new("simulate")
        .entry("scenario", format!("{:?}", cfg.scenario))
        .entry("grid_kind", format!("{:?}", cfg.grid_kind))
        .entry("n", cfg.n)
        .entry("p", cfg.p)
        .entry("k_nonzero", cfg.k_nonzero)
        .entry("coef_sd", cfg.coef_sd)
        .entry("noise_sd", cfg.noise_sd)
        .entry("reps", cfg.reps)
        .entry("grid_points", cfg.grid_points)
        .entry("beta_seed", cfg.beta_seed)
        .entry("master_seed", cfg.master_seed)
        .entry("digits", digits)
        .render();
    out.push_str("grid_frac,lasso_mean,lasso_sd,ds_mean,ds_sd\n");
    for i in 0..curve.grid.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig(curve.grid[i], digits),
            sig(curve.lasso_mean[i], digits),
            sig(curve.lasso_sd[i], digits),
            sig(curve.ds_mean[i], digits),
            sig(curve.ds_sd[i], digits),
        ));
    }
    print!("{out}");
    Ok(())
}

pub fn cmd_compare(args: &DataArgs, s: f64, digits: usize) -> Result<(), CliError> {
    if s < 0.0 {
        return Err(CliError::Usage(format!("--s must be nonnegative, got {s}")));
    }
    let d = load_design(args)?;
    let path = lars::lasso_path(&d.design.x, &d.design.y, 2000, PATH_TOL)?;
    let lasso_beta = lars::beta_at_l1(&path, s);
    let lasso = dantzig::residual_stats(&d.design.x, &d.design.y, &lasso_beta);
    let ds_sol = dantzig::solve_ds(&d.design.x, &d.design.y, DsForm::L1Budget(s))?;
    let ds = dantzig::residual_stats(&d.design.x, &d.design.y, &ds_sol.beta);

    let active = |beta: &Vector| -> String {
        let idx: Vec<String> = (0..beta.len())
            .filter(|&j| beta[j].abs() > 1e-8)
            .map(|j| (j + 1).to_string())
            .collect();
        if idx.is_empty() {
            "-".to_string()
        } else {
            idx.join(" ")
        }
    };

    let tol = 1e-8;
    let ds_linf_ok = ds.linf <= lasso.linf + tol;
    let lasso_rss_ok = lasso.rss <= ds.rss + tol;

    let mut out = RunManifest::new("compare")
        .entry("dataset", &d.label)
        .entry("std", std_label(args.std))
        .entry("s", s)
        .entry("digits", digits)
        .render();
    out.push_str(&format!("matched l1 budget: s = {}\n\n", sig(s, digits)));
    out.push_str(&format!(
        "{:>8} {:>14} {:>14} {:>12} {:>8}\n",
        "method", "linf_gradient", "rss", "mse", "nonzero"
    ));
    for (name, st, beta) in [
        ("lasso", &lasso, &lasso_beta),
        ("dantzig", &ds, &ds_sol.beta),
    ] {
        out.push_str(&format!(
            "{:>8} {:>14} {:>14} {:>12} {:>8}\n",
            name,
            sig(st.linf, digits),
            sig(st.rss, digits),
            sig(st.mse, digits),
            beta.iter().filter(|b| b.abs() > 1e-8).count()
        ));
    }
    out.push_str(&format!("\nlasso active:   {}\n", active(&lasso_beta)));
    out.push_str(&format!("dantzig active: {}\n\n", active(&ds_sol.beta)));
    out.push_str(&format!(
        "check dantzig linf <= lasso linf: {}\n",
        if ds_linf_ok { "PASS" } else { "FAIL" }
    ));
    out.push_str(&format!(
        "check lasso rss <= dantzig rss:   {}\n",
        if lasso_rss_ok { "PASS" } else { "FAIL" }
    ));
    print!("{out}");
    if ds_linf_ok && lasso_rss_ok {
        Ok(())
    } else {
        Err(CliError::Solver(
            "matched-budget dominance check failed".into(),
        ))
    }
}
