//! `relpush`: command-line front end for the relativistic particle pushers.
//!
//! Exit codes: 0 on success, 1 when a validation fails or a run cannot
//! complete (I/O, particle leaves a field grid), 2 on usage or parse errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "relpush",
    version,
    about = "Relativistic charged-particle propagation in electromagnetic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the field invariants and the field regime.
    Invariants(RunArgs),
    /// Propagate a 4-velocity exactly through a uniform field.
    Push(RunArgs),
    /// Integrate a trajectory with a splitting scheme and write it out.
    Traj(RunArgs),
    /// Run the randomized property suite.
    Validate(ValidateArgs),
    /// Measure the convergence order of a splitting scheme.
    Converge(ConvergeArgs),
}

/// Run flags. Each overrides the same key from `--config`.
#[derive(Debug, Args)]
struct RunArgs {
    /// `key = value` file applied before the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Charge in units of e (the core convention is -1)
    #[arg(long, allow_hyphen_values = true)]
    charge: Option<String>,
    #[arg(long)]
    mass: Option<String>,
    /// Speed of light in the chosen unit system
    #[arg(long)]
    c: Option<String>,
    /// Electric field, x,y,z
    #[arg(long, allow_hyphen_values = true)]
    efield: Option<String>,
    /// Magnetic field, x,y,z
    #[arg(long, allow_hyphen_values = true)]
    bfield: Option<String>,
    /// Jacobian of E for `--model gradient`, 9 values row-major
    #[arg(long, allow_hyphen_values = true)]
    grad_e: Option<String>,
    /// Jacobian of B for `--model gradient`, 9 values row-major
    #[arg(long, allow_hyphen_values = true)]
    grad_b: Option<String>,
    /// Initial u0 (defaults to the unit mass shell)
    #[arg(long)]
    u0: Option<String>,
    /// Initial spatial 4-velocity, x,y,z
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// Initial position, x,y,z
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Proper time to propagate
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    /// strang_kdk, strang_dkd, euler_split or forest_ruth
    #[arg(long)]
    scheme: Option<String>,
    /// uniform, gradient or grid:PATH
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random instances per check
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Tolerance for every deviation check
    #[arg(long, default_value_t = relpush::validate::DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 8)]
    min_steps: usize,
    #[arg(long, default_value_t = 4)]
    doublings: u32,
    /// RK4 steps for the reference solution of non-uniform models
    #[arg(long, default_value_t = 200_000)]
    ref_steps: usize,
}

pub enum CliError {
    Usage(anyhow::Error),
    Failure(anyhow::Error),
}

impl CliError {
    pub fn usage(e: impl Into<anyhow::Error>) -> Self {
        CliError::Usage(e.into())
    }

    pub fn failure(e: impl Into<anyhow::Error>) -> Self {
        CliError::Failure(e.into())
    }
}

impl RunArgs {
    fn to_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.load_file(path).map_err(CliError::usage)?;
        }
        let flags = [
            ("charge", &self.charge),
            ("mass", &self.mass),
            ("c", &self.c),
            ("efield", &self.efield),
            ("bfield", &self.bfield),
            ("grad_e", &self.grad_e),
            ("grad_b", &self.grad_b),
            ("u0", &self.u0),
            ("u", &self.u),
            ("x", &self.x),
            ("tau", &self.tau),
            ("steps", &self.steps),
            ("scheme", &self.scheme),
            ("model", &self.model),
            ("out", &self.out),
            ("format", &self.format),
            ("seed", &self.seed),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v).map_err(|e| {
                    CliError::usage(e.context(format!("--{}", key.replace('_', "-"))))
                })?;
            }
        }
        cfg.validate().map_err(CliError::usage)?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Invariants(args) => commands::invariants(&args.to_config()?),
        Command::Push(args) => commands::push(&args.to_config()?),
        Command::Traj(args) => commands::traj(&args.to_config()?),
        Command::Validate(args) => commands::validate(args.seed, args.count, args.tol),
        Command::Converge(args) => commands::converge(
            &args.run.to_config()?,
            args.min_steps,
            args.doublings,
            args.ref_steps,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
