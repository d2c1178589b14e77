//! Command-line front end for the laboratory: one subcommand per experiment
//! family, JSON configs in, CSV/JSON artifacts out.
//!
//! Exit codes: 0 success, 2 configuration error (the message names the
//! offending key or flag), 1 numerical failure (the report is still
//! written). Thread count for parallel sweeps follows RAYON_NUM_THREADS.

mod cmd_critical;
mod cmd_evolve;
mod cmd_maxprin;
mod cmd_operator;
mod cmd_radial;
mod cmd_shoot;
mod cmd_solve;
mod cmd_structure;
mod cmd_sweep;
mod common;
mod fields;

use clap::{Parser, Subcommand};

use common::RunError;

#[derive(Parser)]
#[command(
    name = "pucci-lab",
    version,
    about = "Numerical experiments around extremal elliptic operators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the extremal operators on one symmetric matrix.
    Operator(cmd_operator::Args),
    /// Probe the structure conditions on a built-in operator family.
    Structure(cmd_structure::Args),
    /// Radial reduction and auxiliary bounds on a radius ladder.
    Radial(cmd_radial::Args),
    /// Integrate one radial shot and classify its tail.
    Shoot(cmd_shoot::Args),
    /// Bisect for the critical exponent of the radial problem.
    #[command(name = "critical-p")]
    CriticalP(cmd_critical::Args),
    /// Solve a Dirichlet problem on a 2D grid from a JSON config.
    Solve(cmd_solve::Args),
    /// Check a maximum-principle hypothesis on sampled coefficients.
    Maxprin(cmd_maxprin::Args),
    /// Explicit parabolic evolution on a 2D grid from a JSON config.
    Evolve(cmd_evolve::Args),
    /// Cartesian parameter sweep of one subcommand from a JSON config.
    Sweep(cmd_sweep::Args),
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.cmd {
        Cmd::Operator(a) => cmd_operator::run(a),
        Cmd::Structure(a) => cmd_structure::run(a),
        Cmd::Radial(a) => cmd_radial::run(a),
        Cmd::Shoot(a) => cmd_shoot::run(a),
        Cmd::CriticalP(a) => cmd_critical::run(a),
        Cmd::Solve(a) => cmd_solve::run(a),
        Cmd::Maxprin(a) => cmd_maxprin::run(a),
        Cmd::Evolve(a) => cmd_evolve::run(a),
        Cmd::Sweep(a) => cmd_sweep::run(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(RunError::Config(msg)) => {
            eprintln!("config error: {msg}");
            2
        }
        Err(RunError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            1
        }
    }
}
