use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use artifact_io::fmt_f64;
use maxprin::{check_decay_at_infinity, radius_ladder, CoefficientSampler};
use pucci_core::Ellipticity;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use shooting::{shoot, trace_to_csv, OutcomeKind, ShootParams};

use crate::cmd_maxprin::parse_coefficient;
use crate::common::{config, load_config, parse_ell, parse_op, print_json, write_json, write_manifest, RunError, RunResult};

#[derive(clap::Args)]
pub struct Args {
    /// JSON config; see the config struct for the schema.
    #[arg(long)]
    config: PathBuf,
}

/// A cartesian sweep of one task. `base` holds the task's full parameter
/// object; every `grid` entry overrides one key with each listed value in
/// turn. All points are validated before anything is written.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// "shoot" or "maxprin_decay".
    pub task: String,
    pub base: Value,
    #[serde(default)]
    pub grid: BTreeMap<String, Vec<Value>>,
    #[serde(default)]
    pub seed: u64,
    pub out_dir: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShootPoint {
    op: String,
    n: usize,
    ell: String,
    p: f64,
    #[serde(default = "default_alpha")]
    alpha: f64,
    #[serde(default = "default_r_max")]
    r_max: f64,
}

fn default_alpha() -> f64 {
    1.0
}

fn default_r_max() -> f64 {
    100.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecayPoint {
    ell: String,
    n: usize,
    #[serde(default)]
    gamma: f64,
    q: f64,
    #[serde(default)]
    big_r: f64,
    r_lo: f64,
    r_hi: f64,
    c: String,
}

enum Job {
    Shoot(ShootParams),
    Decay {
        ell: Ellipticity,
        n: usize,
        gamma: f64,
        q: f64,
        big_r: f64,
        radii: Vec<f64>,
        sampler: CoefficientSampler,
    },
}

fn merge(base: &Value, keys: &[&String], choice: &[usize], grid: &BTreeMap<String, Vec<Value>>) -> Value {
    let mut point = base.clone();
    let obj = point.as_object_mut().expect("base checked as object");
    for (k, &ci) in keys.iter().zip(choice) {
        obj.insert((*k).clone(), grid[*k][ci].clone());
    }
    point
}

fn build_job(task: &str, merged: Value, index: usize) -> Result<Job, RunError> {
    let at = |msg: String| RunError::Config(format!("sweep point {index}: {msg}"));
    match task {
        "shoot" => {
            let p: ShootPoint =
                serde_json::from_value(merged).map_err(|e| at(e.to_string()))?;
            let op = parse_op(&p.op, "op").map_err(|e| at_err(e, index))?;
            let ell = parse_ell(&p.ell, "ell").map_err(|e| at_err(e, index))?;
            let mut params = ShootParams::new(p.n, ell, p.p, p.alpha, op)
                .map_err(|e| at(e.to_string()))?;
            params.r_max = p.r_max;
            params.validate().map_err(|e| at(e.to_string()))?;
            Ok(Job::Shoot(params))
        }
        "maxprin_decay" => {
            let p: DecayPoint =
                serde_json::from_value(merged).map_err(|e| at(e.to_string()))?;
            let ell = parse_ell(&p.ell, "ell").map_err(|e| at_err(e, index))?;
            if !(p.gamma >= 0.0 && p.gamma.is_finite()) {
                return Err(at(format!("gamma must be finite and >= 0, got {}", p.gamma)));
            }
            let radii = radius_ladder(p.r_lo, p.r_hi).map_err(|e| at(e.to_string()))?;
            let sampler =
                parse_coefficient(&p.c, p.r_lo, p.r_hi).map_err(|e| at_err(e, index))?;
            Ok(Job::Decay {
                ell,
                n: p.n,
                gamma: p.gamma,
                q: p.q,
                big_r: p.big_r,
                radii,
                sampler,
            })
        }
        other => Err(RunError::Config(format!(
            "task: expected shoot or maxprin_decay, got \"{other}\""
        ))),
    }
}

fn at_err(e: RunError, index: usize) -> RunError {
    match e {
        RunError::Config(m) => RunError::Config(format!("sweep point {index}: {m}")),
        other => other,
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs one prepared point, writing its artifacts under `dir`. Never
/// returns an error: failures land in the status cell so the sweep finishes.
fn run_point(job: &Job, dir: &Path, seed: u64, merged: &Value) -> (String, Vec<String>) {
    let write = |res: RunResult| -> Result<(), String> {
        res.map_err(|e| match e {
            RunError::Config(m) | RunError::Numerical(m) => m,
        })
    };
    let sub = match job {
        Job::Shoot(_) => "sweep-point-shoot",
        Job::Decay { .. } => "sweep-point-maxprin-decay",
    };
    if let Err(m) = write(write_manifest(dir, sub, Some(seed), merged.clone())) {
        return (format!("failed: {m}"), vec![String::new(), String::new()]);
    }
    match job {
        Job::Shoot(params) => match shoot(params) {
            Ok(outcome) => {
                let value = match &outcome.kind {
                    OutcomeKind::Crossing { r_cross } => fmt_f64(*r_cross),
                    OutcomeKind::SlowDecay { slope_est } | OutcomeKind::FastDecay { slope_est } => {
                        fmt_f64(*slope_est)
                    }
                    OutcomeKind::Inconclusive { .. } => String::new(),
                };
                let report = json!({
                    "kind": outcome.kind,
                    "trace_points": outcome.trace.len(),
                });
                if let Err(m) = write(write_json(&dir.join("outcome.json"), &report)) {
                    return (format!("failed: {m}"), vec![String::new(), String::new()]);
                }
                if let Err(e) =
                    artifact_io::atomic_write_str(&dir.join("trace.csv"), &trace_to_csv(&outcome))
                {
                    return (format!("failed: io: {e}"), vec![String::new(), String::new()]);
                }
                ("ok".into(), vec![outcome.kind.name().into(), value])
            }
            Err(e) => (format!("failed: {e}"), vec![String::new(), String::new()]),
        },
        Job::Decay {
            ell,
            n,
            gamma,
            q,
            big_r,
            radii,
            sampler,
        } => match check_decay_at_infinity(sampler, *q, *big_r, *ell, *gamma, *n, radii) {
            Ok(verdict) => {
                if let Err(m) = write(write_json(&dir.join("verdict.json"), &verdict)) {
                    return (format!("failed: {m}"), vec![String::new(), String::new()]);
                }
                (
                    "ok".into(),
                    vec![verdict.holds.to_string(), fmt_f64(verdict.margin)],
                )
            }
            Err(e) => {
                let _ = write_json(&dir.join("verdict.json"), &json!({"error": e.to_string()}));
                (format!("failed: {e}"), vec![String::new(), String::new()])
            }
        },
    }
}

pub fn run(a: Args) -> RunResult {
    let cfg: SweepConfig = load_config(&a.config)?;
    if !cfg.base.is_object() {
        return config("base: must be a JSON object");
    }
    let task_cols: &[&str] = match cfg.task.as_str() {
        "shoot" => &["kind", "value"],
        "maxprin_decay" => &["holds", "margin"],
        other => {
            return config(format!(
                "task: expected shoot or maxprin_decay, got \"{other}\""
            ))
        }
    };

    let keys: Vec<&String> = cfg.grid.keys().collect();
    let sizes: Vec<usize> = keys.iter().map(|k| cfg.grid[*k].len()).collect();
    let total: usize = if keys.is_empty() {
        0
    } else {
        sizes.iter().product()
    };

    // Validate every point before writing a single byte.
    let mut merged_points = Vec::with_capacity(total);
    let mut jobs = Vec::with_capacity(total);
    let mut choice = vec![0usize; keys.len()];
    for index in 0..total {
        let mut rem = index;
        for (slot, &size) in choice.iter_mut().zip(&sizes).rev() {
            let (slot, size): (&mut usize, usize) = (slot, size);
            *slot = rem % size;
            rem /= size;
        }
        let merged = merge(&cfg.base, &keys, &choice, &cfg.grid);
        jobs.push(build_job(&cfg.task, merged.clone(), index)?);
        merged_points.push(merged);
    }

    write_manifest(
        &cfg.out_dir,
        "sweep",
        Some(cfg.seed),
        json!({
            "task": cfg.task,
            "base": cfg.base,
            "grid": cfg.grid,
            "points": total,
            "threads": rayon::current_num_threads(),
        }),
    )?;

    let rows: Vec<(String, Vec<String>)> = jobs
        .par_iter()
        .enumerate()
        .map(|(index, job)| {
            let dir = cfg.out_dir.join("points").join(format!("p{index:05}"));
            run_point(
                job,
                &dir,
                cfg.seed.wrapping_add(index as u64),
                &merged_points[index],
            )
        })
        .collect();

    let mut index_csv = String::from("index");
    for k in &keys {
        index_csv.push(',');
        index_csv.push_str(&csv_escape(k));
    }
    index_csv.push_str(",status");
    for c in task_cols {
        index_csv.push(',');
        index_csv.push_str(c);
    }
    index_csv.push('\n');
    let mut failed = 0usize;
    for (index, (status, cells)) in rows.iter().enumerate() {
        if status != "ok" {
            failed += 1;
        }
        index_csv.push_str(&index.to_string());
        let point = merged_points[index]
            .as_object()
            .expect("merged points are objects");
        for k in &keys {
            index_csv.push(',');
            index_csv.push_str(&csv_escape(&point[*k].to_string()));
        }
        index_csv.push(',');
        index_csv.push_str(&csv_escape(status));
        for cell in cells {
            index_csv.push(',');
            index_csv.push_str(&csv_escape(cell));
        }
        index_csv.push('\n');
    }
    artifact_io::atomic_write_str(&cfg.out_dir.join("index.csv"), &index_csv)?;

    print_json(&json!({
        "task": cfg.task,
        "points": total,
        "failed": failed,
        "out_dir": cfg.out_dir.display().to_string(),
    }));

    if failed > 0 {
        Err(RunError::Numerical(format!(
            "{failed} of {total} sweep points failed; see index.csv"
        )))
    } else {
        Ok(())
    }
}
