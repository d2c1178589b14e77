use std::path::PathBuf;

use artifact_io::fmt_f64;
use pucci_core::OpSign;
use radial_core::{aux_bound, best_q, dim_numbers, AuxFunction};
use serde_json::json;

use crate::common::{config, parse_ell, print_json, write_json, write_manifest, RunError, RunResult};

#[derive(clap::Args)]
pub struct Args {
    /// Ellipticity pair "lambda1,lambda2".
    #[arg(long)]
    ell: String,
    /// Space dimension.
    #[arg(long)]
    n: usize,
    /// Gradient Lipschitz constant.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Auxiliary profile: "power:q" or "log:a".
    #[arg(long)]
    aux: String,
    #[arg(long, default_value_t = 0.1)]
    r_lo: f64,
    #[arg(long, default_value_t = 10.0)]
    r_hi: f64,
    /// Samples per decade of radius.
    #[arg(long, default_value_t = 32)]
    per_decade: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_aux(s: &str) -> Result<AuxFunction, RunError> {
    let bad = |msg: String| RunError::Config(format!("--aux: {msg}"));
    if let Some(q) = s.strip_prefix("power:") {
        let q: f64 = q
            .trim()
            .parse()
            .map_err(|_| bad(format!("\"{q}\" is not a number")))?;
        return AuxFunction::power_decay(q).map_err(|e| bad(e.to_string()));
    }
    if let Some(a) = s.strip_prefix("log:") {
        let a: f64 = a
            .trim()
            .parse()
            .map_err(|_| bad(format!("\"{a}\" is not a number")))?;
        return AuxFunction::log_power(a).map_err(|e| bad(e.to_string()));
    }
    Err(bad(format!("expected \"power:q\" or \"log:a\", got \"{s}\"")))
}

pub fn run(a: Args) -> RunResult {
    let ell = parse_ell(&a.ell, "--ell")?;
    let aux = parse_aux(&a.aux)?;
    if !(a.gamma >= 0.0 && a.gamma.is_finite()) {
        return config(format!("--gamma: must be finite and >= 0, got {}", a.gamma));
    }
    if !(a.r_lo > 0.0 && a.r_lo.is_finite() && a.r_hi > a.r_lo && a.r_hi.is_finite()) {
        return config(format!(
            "--r-lo/--r-hi: need 0 < r_lo < r_hi < inf, got r_lo = {}, r_hi = {}",
            a.r_lo, a.r_hi
        ));
    }
    if matches!(aux, AuxFunction::LogPower { .. }) && a.r_hi >= 1.0 {
        return config(format!(
            "--r-hi: the log profile lives on 0 < r < 1, got r_hi = {}",
            a.r_hi
        ));
    }
    if a.per_decade == 0 {
        return config("--per-decade: must be at least 1");
    }

    let dims = dim_numbers(a.n, ell).map_err(|e| RunError::Config(format!("--n: {e}")))?;
    // best_q only exists above the critical regime; report it when it does.
    let best = best_q(ell, a.n, a.gamma, 1.0).ok();

    let decades = (a.r_hi / a.r_lo).log10();
    let count = ((a.per_decade as f64) * decades).ceil() as usize + 1;
    let mut csv = String::from("r,psi,dpsi,d2psi,pucci_quot,aux_bound\n");
    for i in 0..count {
        let t = i as f64 / (count - 1).max(1) as f64;
        let r = a.r_lo * (a.r_hi / a.r_lo).powf(t);
        let psi = aux.value(r).map_err(|e| RunError::Numerical(e.to_string()))?;
        let dpsi = aux.deriv(r).map_err(|e| RunError::Numerical(e.to_string()))?;
        let d2psi = aux
            .second_deriv(r)
            .map_err(|e| RunError::Numerical(e.to_string()))?;
        // (M+(D^2 psi) + gamma|D psi|)/psi evaluated from the Hessian
        // spectrum; the closed form lands in the last column for comparison.
        let quot =
            (radial_core::pucci_on_radial(d2psi, dpsi / r, a.n, ell, OpSign::Plus)
                + a.gamma * dpsi.abs())
                / psi;
        let bound = aux_bound(r, aux, ell, a.gamma, a.n)
            .map_err(|e| RunError::Numerical(e.to_string()))?;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(r),
            fmt_f64(psi),
            fmt_f64(dpsi),
            fmt_f64(d2psi),
            fmt_f64(quot),
            fmt_f64(bound),
        ));
    }

    let result = json!({
        "n": a.n,
        "lambda1": ell.lambda1(),
        "lambda2": ell.lambda2(),
        "gamma": a.gamma,
        "aux": aux,
        "n_star": dims.n_star,
        "n_sub": dims.n_sub,
        "best_q_at_r1": best.map(|(q, margin)| json!({"q": q, "margin": margin})),
        "samples": count,
    });
    print_json(&result);
    if let Some(dir) = a.out {
        write_manifest(
            &dir,
            "radial",
            None,
            json!({
                "ell": a.ell,
                "n": a.n,
                "gamma": a.gamma,
                "aux": a.aux,
                "r_lo": a.r_lo,
                "r_hi": a.r_hi,
                "per_decade": a.per_decade,
            }),
        )?;
        write_json(&dir.join("radial.json"), &result)?;
        artifact_io::atomic_write_str(&dir.join("profile.csv"), &csv)?;
    }
    Ok(())
}
