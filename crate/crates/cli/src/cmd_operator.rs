use std::path::PathBuf;

use pucci_core::{eig_sym, pucci, OpSign, SymMatrix, DEFAULT_EIG_TOL};
use serde_json::json;

use crate::common::{config, parse_ell, print_json, write_json, write_manifest, RunResult, RunError};

#[derive(clap::Args)]
pub struct Args {
    /// Symmetric matrix: "diag:1,-1" or "rows:1,0.5;0.5,2".
    #[arg(long)]
    matrix: String,
    /// Ellipticity pair "lambda1,lambda2".
    #[arg(long)]
    ell: String,
    /// Optional artifact directory (manifest + result JSON).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, RunError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| RunError::Config(format!("--matrix: \"{t}\" is not a number")))
        })
        .collect()
}

fn parse_matrix(spec: &str) -> Result<SymMatrix, RunError> {
    if let Some(diag) = spec.strip_prefix("diag:") {
        let d = parse_numbers(diag)?;
        if d.is_empty() {
            return config("--matrix: empty diagonal");
        }
        return Ok(SymMatrix::diag(&d));
    }
    if let Some(rows) = spec.strip_prefix("rows:") {
        let rows: Vec<Vec<f64>> = rows
            .split(';')
            .map(parse_numbers)
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return config("--matrix: rows must form a square matrix");
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate().take(i) {
                if *v != rows[j][i] {
                    return config(format!(
                        "--matrix: entry ({i},{j}) = {v} differs from ({j},{i}) = {}",
                        rows[j][i]
                    ));
                }
            }
        }
        return Ok(SymMatrix::from_fn(n, |i, j| rows[i][j]));
    }
    config(format!(
        "--matrix: expected \"diag:...\" or \"rows:...\", got \"{spec}\""
    ))
}

pub fn run(a: Args) -> RunResult {
    let ell = parse_ell(&a.ell, "--ell")?;
    let m = parse_matrix(&a.matrix)?;
    let m_plus =
        pucci(&m, ell, OpSign::Plus).map_err(|e| RunError::Numerical(e.to_string()))?;
    let m_minus =
        pucci(&m, ell, OpSign::Minus).map_err(|e| RunError::Numerical(e.to_string()))?;
    let eigs =
        eig_sym(&m, DEFAULT_EIG_TOL).map_err(|e| RunError::Numerical(e.to_string()))?;
    let result = json!({
        "matrix": m,
        "lambda1": ell.lambda1(),
        "lambda2": ell.lambda2(),
        "eigenvalues": eigs,
        "m_plus": m_plus,
        "m_minus": m_minus,
    });
    print_json(&result);
    if let Some(dir) = a.out {
        write_manifest(
            &dir,
            "operator",
            None,
            json!({"matrix": a.matrix, "ell": a.ell}),
        )?;
        write_json(&dir.join("operator.json"), &result)?;
    }
    Ok(())
}
