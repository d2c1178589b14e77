use std::path::PathBuf;

use pucci_core::{
    check_structure, pucci, ControlPair, Ellipticity, FnOperator, IsaacsOperator, OpSign,
    PucciOperator, SecondOrderOperator, SymMatrix,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::common::{config, parse_ell, print_json, write_json, write_manifest, RunError, RunResult};

#[derive(clap::Args)]
pub struct Args {
    /// Operator family to test: pucci-plus | pucci-minus | bellman | isaacs | planted-bad.
    #[arg(long)]
    family: String,
    /// Ellipticity pair "lambda1,lambda2".
    #[arg(long)]
    ell: String,
    /// Gradient Lipschitz constant.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Space dimension.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Number of random argument samples per condition.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Row-major orthogonal matrix via modified Gram-Schmidt on a box sample.
fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut q: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut ok = true;
        for col in 0..n {
            for prev in 0..col {
                let mut dot = 0.0;
                for r in 0..n {
                    dot += q[r * n + col] * q[r * n + prev];
                }
                for r in 0..n {
                    q[r * n + col] -= dot * q[r * n + prev];
                }
            }
            let norm: f64 = (0..n)
                .map(|r| q[r * n + col] * q[r * n + col])
                .sum::<f64>()
                .sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for r in 0..n {
                q[r * n + col] /= norm;
            }
        }
        if ok {
            return q;
        }
    }
}

fn conjugated_diag(q: &[f64], d: &[f64]) -> SymMatrix {
    let n = d.len();
    SymMatrix::from_fn(n, |i, j| {
        let mut s = 0.0;
        for k in 0..n {
            s += q[i * n + k] * d[k] * q[j * n + k];
        }
        s
    })
}

/// Coefficient matrix with spectrum inside `[lambda1, lambda2]`.
fn random_admissible(rng: &mut ChaCha8Rng, n: usize, ell: Ellipticity) -> SymMatrix {
    let q = random_orthogonal(rng, n);
    let d: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(ell.lambda1()..=ell.lambda2()))
        .collect();
    conjugated_diag(&q, &d)
}

fn random_drift(rng: &mut ChaCha8Rng, n: usize, gamma: f64) -> Vec<f64> {
    if gamma == 0.0 {
        return vec![0.0; n];
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v.iter().map(|x| x * gamma).collect();
        }
    }
}

/// Seeded coefficient family closed under the axis-reflection group: each
/// base pair (A, b) enters with every sign pattern s applied as
/// A -> diag(s) A diag(s), b -> diag(s) b. Conjugation by a sign matrix
/// preserves the spectrum and |b|, so admissibility is untouched, and the
/// sup over the closed family is invariant under every single-axis
/// reflection, which is what the second structure condition demands.
fn seeded_family(
    rng: &mut ChaCha8Rng,
    n: usize,
    ell: Ellipticity,
    gamma: f64,
    pairs: usize,
) -> Result<Vec<ControlPair>, RunError> {
    let mut fam = Vec::new();
    for _ in 0..pairs {
        let a = random_admissible(rng, n, ell);
        let b = random_drift(rng, n, gamma);
        for mask in 0u32..(1 << n) {
            let sign = |i: usize| if mask & (1 << i) != 0 { -1.0 } else { 1.0 };
            let ar = SymMatrix::from_fn(n, |i, j| sign(i) * sign(j) * a.get(i, j));
            let br: Vec<f64> = b.iter().enumerate().map(|(i, x)| sign(i) * x).collect();
            fam.push(ControlPair::new(ar, br).map_err(|e| RunError::Config(e.to_string()))?);
        }
    }
    Ok(fam)
}

pub fn run(a: Args) -> RunResult {
    let ell = parse_ell(&a.ell, "--ell")?;
    if !(a.gamma >= 0.0 && a.gamma.is_finite()) {
        return config(format!("--gamma: must be finite and >= 0, got {}", a.gamma));
    }
    if a.dim == 0 {
        return config("--dim: must be at least 1");
    }
    if a.samples == 0 {
        return config("--samples: must be at least 1");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ 0x5eed_c0ef);
    let op: Box<dyn SecondOrderOperator> = match a.family.as_str() {
        "pucci-plus" => Box::new(PucciOperator {
            ell,
            sign: OpSign::Plus,
            dim: a.dim,
        }),
        "pucci-minus" => Box::new(PucciOperator {
            ell,
            sign: OpSign::Minus,
            dim: a.dim,
        }),
        "bellman" => {
            let fam = seeded_family(&mut rng, a.dim, ell, a.gamma, 5)?;
            Box::new(
                IsaacsOperator::bellman(a.gamma, fam)
                    .map_err(|e| RunError::Config(e.to_string()))?,
            )
        }
        "isaacs" => {
            let fams: Vec<_> = (0..3)
                .map(|_| seeded_family(&mut rng, a.dim, ell, a.gamma, 3))
                .collect::<Result<_, _>>()?;
            Box::new(
                IsaacsOperator::new(a.gamma, fams).map_err(|e| RunError::Config(e.to_string()))?,
            )
        }
        // Linear operator with an eigenvalue at 2*lambda2: violates the
        // upper (F1) bound, so the checker must find a witness.
        "planted-bad" => {
            let mut d = vec![ell.lambda1(); a.dim];
            d[0] = 2.0 * ell.lambda2();
            let bad = SymMatrix::diag(&d);
            Box::new(FnOperator::new(a.dim, move |_p, m| {
                bad.trace_product(m).unwrap_or(f64::NAN)
            }))
        }
        other => {
            return config(format!(
                "--family: expected pucci-plus, pucci-minus, bellman, isaacs or planted-bad, got \"{other}\""
            ))
        }
    };

    let report = check_structure(op.as_ref(), ell, a.gamma, a.samples, a.seed)
        .map_err(|e| RunError::Numerical(e.to_string()))?;

    // Spot reference values so the artifact can be eyeballed: the extremal
    // operators on the identity.
    let ident = SymMatrix::identity(a.dim);
    let result = json!({
        "family": a.family,
        "dim": a.dim,
        "gamma": a.gamma,
        "samples": a.samples,
        "m_plus_identity": pucci(&ident, ell, OpSign::Plus)
            .map_err(|e| RunError::Numerical(e.to_string()))?,
        "report": report,
    });
    print_json(&result);
    if let Some(dir) = a.out {
        write_manifest(
            &dir,
            "structure",
            Some(a.seed),
            json!({
                "family": a.family,
                "ell": a.ell,
                "gamma": a.gamma,
                "dim": a.dim,
                "samples": a.samples,
            }),
        )?;
        write_json(&dir.join("structure.json"), &result)?;
    }
    Ok(())
}
