use std::path::PathBuf;

use artifact_io::fmt_f64;
use maxprin::{
    check_decay_at_infinity, check_punctured, check_weighted_bound, radius_ladder, Branch,
    CoefficientSampler, PsiWeight,
};
use pucci_core::{Ellipticity, OpSign};
use radial_core::{aux_bound, pucci_on_radial, AuxFunction};
use serde_json::json;

use crate::common::{config, parse_ell, print_json, write_json, write_manifest, RunError, RunResult};

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    which: Which,
}

#[derive(clap::Subcommand)]
enum Which {
    /// Eigenvalue-weighted bound lambda_psi - gamma |D psi|/psi >= c.
    Weighted(WeightedArgs),
    /// Decay condition on c beyond a threshold radius.
    Decay(DecayArgs),
    /// Bound near an interior puncture (power or log branch).
    Punctured(PuncturedArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Ellipticity pair "lambda1,lambda2".
    #[arg(long)]
    ell: String,
    /// Space dimension.
    #[arg(long)]
    n: usize,
    /// Gradient Lipschitz constant.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Coefficient c: "const:v", "linear:a,b" (a + b r), "invsq:k", or
    /// "invpow:coeff,power".
    #[arg(long)]
    c: String,
    #[arg(long)]
    r_lo: f64,
    #[arg(long)]
    r_hi: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct WeightedArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Weight exponent: psi = r^{-q}.
    #[arg(long)]
    q: f64,
}

#[derive(clap::Args)]
struct DecayArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Decay exponent; admissible on (0, n* - 2).
    #[arg(long)]
    q: f64,
    /// Samples must sit beyond this radius.
    #[arg(long, default_value_t = 0.0)]
    big_r: f64,
}

#[derive(clap::Args)]
struct PuncturedArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Branch: "auto", "power:q", or "log".
    #[arg(long, default_value = "auto")]
    branch: String,
}

pub(crate) fn parse_coefficient(
    spec: &str,
    r_lo: f64,
    r_hi: f64,
) -> Result<CoefficientSampler, RunError> {
    let bad = |msg: String| RunError::Config(format!("--c: {msg}"));
    let num = |s: &str| -> Result<f64, RunError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("\"{s}\" is not a number")))
    };
    let pair = |s: &str| -> Result<(f64, f64), RunError> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(bad(format!("expected two numbers, got \"{s}\"")));
        }
        Ok((num(parts[0])?, num(parts[1])?))
    };
    let sampler = if let Some(v) = spec.strip_prefix("const:") {
        let v = num(v)?;
        CoefficientSampler::radial(r_lo, r_hi, false, move |_| v)
    } else if let Some(ab) = spec.strip_prefix("linear:") {
        let (a, b) = pair(ab)?;
        CoefficientSampler::radial(r_lo, r_hi, false, move |r| a + b * r)
    } else if let Some(k) = spec.strip_prefix("invsq:") {
        let k = num(k)?;
        CoefficientSampler::radial(r_lo, r_hi, true, move |r| k / (r * r))
    } else if let Some(cp) = spec.strip_prefix("invpow:") {
        let (coeff, power) = pair(cp)?;
        CoefficientSampler::radial(r_lo, r_hi, true, move |r| coeff * r.powf(-power))
    } else {
        return Err(bad(format!(
            "expected const:, linear:, invsq: or invpow:, got \"{spec}\""
        )));
    };
    sampler.map_err(|e| bad(e.to_string()))
}

fn parse_branch(s: &str) -> Result<Branch, RunError> {
    if s == "auto" {
        return Ok(Branch::Auto);
    }
    if s == "log" {
        return Ok(Branch::Log);
    }
    if let Some(q) = s.strip_prefix("power:") {
        let q: f64 = q
            .trim()
            .parse()
            .map_err(|_| RunError::Config(format!("--branch: \"{q}\" is not a number")))?;
        return Ok(Branch::Power { q });
    }
    config(format!(
        "--branch: expected auto, power:q or log, got \"{s}\""
    ))
}

struct Prepared {
    ell: Ellipticity,
    sampler: CoefficientSampler,
    radii: Vec<f64>,
    c_of_r: Box<dyn Fn(f64) -> f64>,
}

fn prepare(common: &CommonArgs) -> Result<Prepared, RunError> {
    let ell = parse_ell(&common.ell, "--ell")?;
    if !(common.gamma >= 0.0 && common.gamma.is_finite()) {
        return config(format!(
            "--gamma: must be finite and >= 0, got {}",
            common.gamma
        ));
    }
    let sampler = parse_coefficient(&common.c, common.r_lo, common.r_hi)?;
    let radii = radius_ladder(common.r_lo, common.r_hi)
        .map_err(|e| RunError::Config(format!("--r-lo/--r-hi: {e}")))?;
    // A second copy of the coefficient for the CSV columns; the sampler
    // itself is consumed by the checker.
    let c_of_r = parse_coefficient(&common.c, common.r_lo, common.r_hi)?;
    let n = common.n;
    let f = move |r: f64| {
        let mut x = vec![0.0; n.max(1)];
        x[0] = r;
        c_of_r.value_at(&x, 0).unwrap_or(f64::NAN)
    };
    Ok(Prepared {
        ell,
        sampler,
        radii,
        c_of_r: Box::new(f),
    })
}

/// Writes verdict.json + samples.csv + manifest.json when --out is given.
fn emit(
    common: &CommonArgs,
    sub: &str,
    extra_params: serde_json::Value,
    verdict: &maxprin::MaxPrinVerdict,
    rows: &[(f64, f64, f64)],
) -> RunResult {
    let result = json!({"verdict": verdict});
    print_json(&result);
    if let Some(dir) = &common.out {
        let mut params = json!({
            "ell": common.ell,
            "n": common.n,
            "gamma": common.gamma,
            "c": common.c,
            "r_lo": common.r_lo,
            "r_hi": common.r_hi,
        });
        if let (Some(obj), Some(extra)) = (params.as_object_mut(), extra_params.as_object()) {
            for (k, v) in extra {
                obj.insert(k.clone(), v.clone());
            }
        }
        write_manifest(dir, sub, None, params)?;
        write_json(&dir.join("verdict.json"), verdict)?;
        let mut csv = String::from("r,bound,c,margin\n");
        for (r, bound, cval) in rows {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(*r),
                fmt_f64(*bound),
                fmt_f64(*cval),
                fmt_f64(bound - cval),
            ));
        }
        artifact_io::atomic_write_str(&dir.join("samples.csv"), &csv)?;
    }
    Ok(())
}

fn run_weighted(a: WeightedArgs) -> RunResult {
    let prep = prepare(&a.common)?;
    if !(a.q > 0.0 && a.q.is_finite()) {
        return config(format!("--q: must be positive, got {}", a.q));
    }
    let aux = AuxFunction::PowerDecay { q: a.q };
    let (n, ell, gamma) = (a.common.n, prep.ell, a.common.gamma);
    if n < 2 {
        return config(format!("--n: must be at least 2, got {n}"));
    }
    // The weight's own eigenvalue: lambda(x) = -M+(D^2 psi)/psi at r = |x|.
    let lambda = move |x: &[f64]| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let d2 = aux.second_deriv(r).unwrap_or(f64::NAN);
        let d1 = aux.deriv(r).unwrap_or(f64::NAN);
        let psi = aux.value(r).unwrap_or(f64::NAN);
        -pucci_on_radial(d2, d1 / r, n, ell, OpSign::Plus) / psi
    };
    let samples: Vec<Vec<f64>> = prep
        .radii
        .iter()
        .map(|&r| {
            let mut x = vec![0.0; n];
            x[0] = r;
            x
        })
        .collect();
    let psi = PsiWeight::Aux(aux);
    let verdict = check_weighted_bound(&prep.sampler, lambda, &psi, gamma, &samples)
        .map_err(|e| RunError::Config(e.to_string()))?;
    let rows: Vec<(f64, f64, f64)> = prep
        .radii
        .iter()
        .map(|&r| {
            let mut x = vec![0.0; n];
            x[0] = r;
            let psi_val = aux.value(r).unwrap_or(f64::NAN);
            let grad = aux.deriv(r).map(f64::abs).unwrap_or(f64::NAN);
            let bound = lambda(&x) - gamma * grad / psi_val;
            (r, bound, (prep.c_of_r)(r))
        })
        .collect();
    emit(&a.common, "maxprin-weighted", json!({"q": a.q}), &verdict, &rows)
}

fn run_decay(a: DecayArgs) -> RunResult {
    let prep = prepare(&a.common)?;
    let (n, ell, gamma) = (a.common.n, prep.ell, a.common.gamma);
    let verdict = check_decay_at_infinity(
        &prep.sampler,
        a.q,
        a.big_r,
        ell,
        gamma,
        n,
        &prep.radii,
    )
    .map_err(|e| RunError::Config(e.to_string()))?;
    let aux = AuxFunction::PowerDecay { q: a.q };
    let rows: Vec<(f64, f64, f64)> = prep
        .radii
        .iter()
        .map(|&r| {
            let bound = aux_bound(r, aux, ell, gamma, n).map(|b| -b).unwrap_or(f64::NAN);
            (r, bound, (prep.c_of_r)(r))
        })
        .collect();
    emit(
        &a.common,
        "maxprin-decay",
        json!({"q": a.q, "big_r": a.big_r}),
        &verdict,
        &rows,
    )
}

fn run_punctured(a: PuncturedArgs) -> RunResult {
    let prep = prepare(&a.common)?;
    let branch = parse_branch(&a.branch)?;
    let (n, ell, gamma) = (a.common.n, prep.ell, a.common.gamma);
    let verdict = check_punctured(&prep.sampler, ell, gamma, n, branch, &prep.radii)
        .map_err(|e| RunError::Config(e.to_string()))?;
    // Rebuild the branch the checker resolved for the CSV bound column.
    let sel = &verdict.params["selected"];
    let aux = if sel["branch"] == "log" {
        AuxFunction::LogPower { a: 0.5 }
    } else {
        AuxFunction::PowerDecay {
            q: sel["q"].as_f64().unwrap_or(f64::NAN),
        }
    };
    let rows: Vec<(f64, f64, f64)> = prep
        .radii
        .iter()
        .map(|&r| {
            let bound = aux_bound(r, aux, ell, gamma, n).map(|b| -b).unwrap_or(f64::NAN);
            (r, bound, (prep.c_of_r)(r))
        })
        .collect();
    emit(
        &a.common,
        "maxprin-punctured",
        json!({"branch": a.branch}),
        &verdict,
        &rows,
    )
}

pub fn run(a: Args) -> RunResult {
    match a.which {
        Which::Weighted(w) => run_weighted(w),
        Which::Decay(d) => run_decay(d),
        Which::Punctured(p) => run_punctured(p),
    }
}
