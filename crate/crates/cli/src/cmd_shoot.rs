use std::path::PathBuf;

use serde_json::json;
use shooting::{shoot, trace_to_csv, ShootParams};

use crate::common::{parse_ell, parse_op, print_json, write_json, write_manifest, RunError, RunResult};

#[derive(clap::Args)]
pub struct Args {
    /// Extremal operator: plus | minus.
    #[arg(long)]
    op: String,
    /// Space dimension.
    #[arg(long)]
    n: usize,
    /// Ellipticity pair "lambda1,lambda2".
    #[arg(long)]
    ell: String,
    /// Nonlinearity exponent.
    #[arg(long)]
    p: f64,
    /// Center value u(0).
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 100.0)]
    r_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(a: Args) -> RunResult {
    let ell = parse_ell(&a.ell, "--ell")?;
    let op = parse_op(&a.op, "--op")?;
    let mut params = ShootParams::new(a.n, ell, a.p, a.alpha, op)
        .map_err(|e| RunError::Config(e.to_string()))?;
    params.r_max = a.r_max;
    params
        .validate()
        .map_err(|e| RunError::Config(format!("--r-max: {e}")))?;

    let outcome = shoot(&params).map_err(|e| RunError::Numerical(e.to_string()))?;
    let last = outcome.trace.last().copied();
    let result = json!({
        "params": params,
        "kind": outcome.kind,
        "trace_points": outcome.trace.len(),
        "last": last.map(|t| json!({"r": t.r, "u": t.u, "du": t.du})),
    });
    print_json(&result);
    if let Some(dir) = a.out {
        write_manifest(
            &dir,
            "shoot",
            None,
            json!({
                "op": a.op,
                "n": a.n,
                "ell": a.ell,
                "p": a.p,
                "alpha": a.alpha,
                "r_max": a.r_max,
            }),
        )?;
        write_json(&dir.join("outcome.json"), &result)?;
        artifact_io::atomic_write_str(&dir.join("trace.csv"), &trace_to_csv(&outcome))?;
    }
    Ok(())
}
