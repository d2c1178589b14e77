use std::path::PathBuf;

use serde_json::json;
use shooting::estimate_critical_p;

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
    /// Bisection endpoints; p_lo must cross, p_hi must decay.
    #[arg(long)]
    p_lo: f64,
    #[arg(long)]
    p_hi: f64,
    /// Bisection stops when the bracket is this tight.
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(a: Args) -> RunResult {
    let ell = parse_ell(&a.ell, "--ell")?;
    let op = parse_op(&a.op, "--op")?;

    let params = json!({
        "op": a.op,
        "n": a.n,
        "ell": a.ell,
        "p_lo": a.p_lo,
        "p_hi": a.p_hi,
        "tol": a.tol,
    });
    if let Some(dir) = &a.out {
        write_manifest(dir, "critical-p", None, params.clone())?;
    }

    match estimate_critical_p(a.n, ell, op, a.p_lo, a.p_hi, a.tol) {
        Ok(est) => {
            let result = json!({
                "params": params,
                "estimate": est,
            });
            print_json(&result);
            if let Some(dir) = &a.out {
                write_json(&dir.join("critical.json"), &result)?;
            }
            Ok(())
        }
        Err(e) => {
            // The failure still produces a readable report when an artifact
            // directory was requested.
            if let Some(dir) = &a.out {
                write_json(
                    &dir.join("critical.json"),
                    &json!({"params": params, "error": e.to_string()}),
                )?;
            }
            Err(RunError::Numerical(e.to_string()))
        }
    }
}
