use std::path::Path;

use pucci_core::{Ellipticity, OpSign};
use serde::Serialize;
use serde_json::json;

/// Failures split by exit code: configuration problems (exit 2, message
/// names the offending key) and numerical failures (exit 1, artifacts
/// already written).
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numerical(String),
}

pub type RunResult = Result<(), RunError>;

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Config(format!("io: {e}"))
    }
}

pub fn config<T>(msg: impl Into<String>) -> Result<T, RunError> {
    Err(RunError::Config(msg.into()))
}

/// "a,b" -> Ellipticity. The flag name lands in the error message.
pub fn parse_ell(s: &str, flag: &str) -> Result<Ellipticity, RunError> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || RunError::Config(format!("{flag}: expected \"lambda1,lambda2\", got \"{s}\""));
    if parts.len() != 2 {
        return Err(bad());
    }
    let l1: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let l2: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    Ellipticity::new(l1, l2).map_err(|e| RunError::Config(format!("{flag}: {e}")))
}

/// "plus" | "minus" -> OpSign.
pub fn parse_op(s: &str, flag: &str) -> Result<OpSign, RunError> {
    match s {
        "plus" => Ok(OpSign::Plus),
        "minus" => Ok(OpSign::Minus),
        other => config(format!("{flag}: expected plus or minus, got \"{other}\"")),
    }
}

/// Pretty JSON to stdout; the run's primary human-readable output. Write
/// errors (e.g. a closed pipe) are ignored so artifact writes still happen.
pub fn print_json(value: &impl Serialize) {
    use std::io::Write;
    match serde_json::to_string_pretty(value) {
        Ok(s) => {
            let mut out = std::io::stdout();
            let _ = writeln!(out, "{s}");
        }
        Err(e) => eprintln!("could not render output json: {e}"),
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> RunResult {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| RunError::Config(format!("render json for {}: {e}", path.display())))?;
    artifact_io::atomic_write_str(path, &text)?;
    Ok(())
}

/// Every artifact directory gets a manifest echoing the resolved run:
/// subcommand, seed, and the full parameter block.
pub fn write_manifest(
    dir: &Path,
    subcommand: &str,
    seed: Option<u64>,
    params: serde_json::Value,
) -> RunResult {
    let manifest = json!({
        "subcommand": subcommand,
        "seed": seed,
        "out_dir": dir.display().to_string(),
        "params": params,
    });
    write_json(&dir.join("manifest.json"), &manifest)
}

/// Reads and parses a JSON config file into a deny-unknown-fields type; the
/// serde message names any unknown or missing key.
pub fn load_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Config(format!("read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| RunError::Config(format!("parse {}: {e}", path.display())))
}
