use std::path::PathBuf;

use grid_solver::{
    asymmetry_norm, field_to_csv, solve_dirichlet_nonlinear, GridDomain, SchemeParams, Shape,
};
use pucci_core::{Ellipticity, OpSign};
use serde::Deserialize;
use serde_json::json;

use crate::common::{load_config, print_json, write_json, write_manifest, RunError, RunResult};
use crate::fields::{FieldSpec, SourceTerm};

#[derive(clap::Args)]
pub struct Args {
    /// JSON config; see the config struct for the schema.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub shape: Shape,
    pub h: f64,
    pub n_dirs: usize,
    pub op: OpSign,
    pub lambda1: f64,
    pub lambda2: f64,
    #[serde(default)]
    pub gamma: f64,
    pub c: FieldSpec,
    pub g: FieldSpec,
    pub boundary: FieldSpec,
    #[serde(default)]
    pub f: SourceTerm,
    #[serde(default)]
    pub residual_tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Shared grid setup for solve and evolve configs.
pub fn build_domain(
    shape: Shape,
    h: f64,
    n_dirs: usize,
    lambda1: f64,
    lambda2: f64,
) -> Result<(GridDomain, Ellipticity), RunError> {
    let ell = Ellipticity::new(lambda1, lambda2)
        .map_err(|e| RunError::Config(format!("lambda1/lambda2: {e}")))?;
    let dom = GridDomain::new(shape, h, n_dirs)
        .map_err(|e| RunError::Config(format!("shape/h/n_dirs: {e}")))?;
    Ok((dom, ell))
}

pub fn run(a: Args) -> RunResult {
    let cfg: SolveConfig = load_config(&a.config)?;
    let (dom, ell) = build_domain(cfg.shape, cfg.h, cfg.n_dirs, cfg.lambda1, cfg.lambda2)?;
    let mut sp = SchemeParams {
        n_dirs: cfg.n_dirs,
        gamma: cfg.gamma,
        ..SchemeParams::default()
    };
    if let Some(t) = cfg.residual_tol {
        sp.residual_tol = t;
    }
    if let Some(m) = cfg.max_iter {
        sp.max_iter = m;
    }
    sp.validate().map_err(|e| RunError::Config(e.to_string()))?;

    let c = cfg.c.interior(&dom, cfg.seed)?;
    let g = cfg.g.interior(&dom, cfg.seed.wrapping_add(1 << 32))?;
    let boundary = cfg.boundary.boundary(&dom, cfg.seed.wrapping_add(2 << 32))?;
    let f = cfg.f.closure();

    write_manifest(
        &cfg.out_dir,
        "solve",
        Some(cfg.seed),
        json!({
            "shape": cfg.shape,
            "h": cfg.h,
            "n_dirs": cfg.n_dirs,
            "op": cfg.op,
            "lambda1": cfg.lambda1,
            "lambda2": cfg.lambda2,
            "gamma": cfg.gamma,
            "c": cfg.c,
            "g": cfg.g,
            "boundary": cfg.boundary,
            "f": cfg.f,
            "residual_tol": sp.residual_tol,
            "max_iter": sp.max_iter,
        }),
    )?;

    let (u, rep) = solve_dirichlet_nonlinear(&dom, ell, cfg.op, &sp, &c, &g, &boundary, f)
        .map_err(|e| RunError::Config(e.to_string()))?;

    let asym = asymmetry_norm(&u, &dom).map_err(|e| RunError::Numerical(e.to_string()))?;
    let report = json!({
        "converged": rep.converged,
        "outer_iterations": rep.outer_iterations,
        "linear_iterations": rep.linear_iterations,
        "fallback_sweeps": rep.fallback_sweeps,
        "final_residual": rep.final_residual,
        "residual_scale": rep.residual_scale,
        "nodes": dom.node_count(),
        "boundary_points": dom.boundary_count(),
        "min_u": u.min(),
        "max_u": u.max(),
        "asymmetry": asym,
    });
    print_json(&report);
    write_json(&cfg.out_dir.join("report.json"), &report)?;
    let csv = field_to_csv(&dom, &u).map_err(|e| RunError::Numerical(e.to_string()))?;
    artifact_io::atomic_write_str(&cfg.out_dir.join("solution.csv"), &csv)?;

    if rep.converged {
        Ok(())
    } else {
        Err(RunError::Numerical(format!(
            "dirichlet solve stopped at residual {:.3e} (target {:.3e}) after {} outer iterations",
            rep.final_residual,
            sp.residual_tol * rep.residual_scale,
            rep.outer_iterations,
        )))
    }
}
