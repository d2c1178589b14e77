use std::path::PathBuf;

use artifact_io::fmt_f64;
use grid_solver::{evolve_parabolic, field_to_csv, SchemeParams, Shape};
use pucci_core::OpSign;
use serde::Deserialize;
use serde_json::json;

use crate::cmd_solve::build_domain;
use crate::common::{config, load_config, print_json, write_json, write_manifest, RunError, RunResult};
use crate::fields::{FieldSpec, SourceTerm};

#[derive(clap::Args)]
pub struct Args {
    /// JSON config; see the config struct for the schema.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub shape: Shape,
    pub h: f64,
    pub n_dirs: usize,
    pub op: OpSign,
    pub lambda1: f64,
    pub lambda2: f64,
    #[serde(default)]
    pub gamma: f64,
    pub u0: FieldSpec,
    pub boundary: FieldSpec,
    #[serde(default)]
    pub f: SourceTerm,
    pub t_end: f64,
    /// Keep every k-th step as a solution snapshot (step 0 always kept).
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    #[serde(default)]
    pub cfl: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    pub out_dir: PathBuf,
}

fn default_stride() -> usize {
    1_000_000
}

fn metrics_csv(traj: &grid_solver::ParabolicTrajectory) -> String {
    let mut out = String::from("step,time,asymmetry,monotonicity_defect\n");
    for (i, t) in traj.times.iter().enumerate() {
        out.push_str(&format!(
            "{i},{},{},{}\n",
            fmt_f64(*t),
            fmt_f64(traj.asymmetry[i]),
            fmt_f64(traj.monotonicity_defect[i]),
        ));
    }
    out
}

pub fn run(a: Args) -> RunResult {
    let cfg: EvolveConfig = load_config(&a.config)?;
    if cfg.snapshot_stride == 0 {
        return config("snapshot_stride: must be at least 1");
    }
    let (dom, ell) = build_domain(cfg.shape, cfg.h, cfg.n_dirs, cfg.lambda1, cfg.lambda2)?;
    let mut sp = SchemeParams {
        n_dirs: cfg.n_dirs,
        gamma: cfg.gamma,
        ..SchemeParams::default()
    };
    if let Some(cfl) = cfg.cfl {
        sp.cfl = cfl;
    }
    sp.validate().map_err(|e| RunError::Config(e.to_string()))?;

    let u0 = cfg.u0.interior(&dom, cfg.seed)?;
    let boundary = cfg.boundary.boundary(&dom, cfg.seed.wrapping_add(2 << 32))?;
    let f = cfg.f.closure();

    write_manifest(
        &cfg.out_dir,
        "evolve",
        Some(cfg.seed),
        json!({
            "shape": cfg.shape,
            "h": cfg.h,
            "n_dirs": cfg.n_dirs,
            "op": cfg.op,
            "lambda1": cfg.lambda1,
            "lambda2": cfg.lambda2,
            "gamma": cfg.gamma,
            "u0": cfg.u0,
            "boundary": cfg.boundary,
            "f": cfg.f,
            "t_end": cfg.t_end,
            "snapshot_stride": cfg.snapshot_stride,
            "cfl": sp.cfl,
        }),
    )?;

    let traj = evolve_parabolic(
        &u0,
        &dom,
        ell,
        cfg.op,
        &sp,
        f,
        &boundary,
        cfg.t_end,
        cfg.snapshot_stride,
    )
    .map_err(|e| RunError::Config(e.to_string()))?;

    let worst_asym = traj.asymmetry.iter().cloned().fold(0.0f64, f64::max);
    let worst_defect = traj
        .monotonicity_defect
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    let report = json!({
        "steps_taken": traj.steps_taken,
        "dt": traj.dt,
        "blew_up": traj.blew_up,
        "final_time": traj.times.last(),
        "final_min": traj.final_field.min(),
        "final_max": traj.final_field.max(),
        "worst_asymmetry": worst_asym,
        "worst_monotonicity_defect": worst_defect,
        "snapshots": traj.snapshots.len(),
    });
    print_json(&report);
    write_json(&cfg.out_dir.join("report.json"), &report)?;
    artifact_io::atomic_write_str(&cfg.out_dir.join("metrics.csv"), &metrics_csv(&traj))?;
    let final_csv =
        field_to_csv(&dom, &traj.final_field).map_err(|e| RunError::Numerical(e.to_string()))?;
    artifact_io::atomic_write_str(&cfg.out_dir.join("final.csv"), &final_csv)?;
    for (step, field) in &traj.snapshots {
        let csv = field_to_csv(&dom, field).map_err(|e| RunError::Numerical(e.to_string()))?;
        artifact_io::atomic_write_str(
            &cfg.out_dir.join(format!("snap_{step:06}.csv")),
            &csv,
        )?;
    }

    if traj.blew_up {
        Err(RunError::Numerical(format!(
            "evolution blew up at step {} (sup norm past {:.1e})",
            traj.steps_taken,
            grid_solver::BLOWUP_CAP,
        )))
    } else {
        Ok(())
    }
}
