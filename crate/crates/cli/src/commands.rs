use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{anyhow, Context};

use relpush::convergence::{converge_constant, converge_nonuniform, ConvergenceTable};
use relpush::validate::{run_suite, SuiteConfig};
use relpush::{
    displacement_constant, field_invariants, integrate, minkowski_norm, push_constant,
    rk_final_state, FieldRegime, ParticleState,
};

use crate::config::{Format, ModelSpec, RunConfig};
use crate::output::{write_csv, write_json, Record};
use crate::CliError;

pub fn invariants(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let field = cfg.field();
    let inv = field_invariants(&field);
    println!("kappa1 = {}", inv.kappa1);
    println!("kappa2 = {}", inv.kappa2);
    println!("kappa  = {}", inv.kappa);
    println!("E'     = {}", inv.e_prime);
    println!("B'     = {}", inv.b_prime);
    println!("regime = {}", FieldRegime::classify(&field));
    Ok(ExitCode::SUCCESS)
}

pub fn push(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    if cfg.model != ModelSpec::Uniform {
        return Err(CliError::usage(anyhow!(
            "push propagates through a uniform field only; use `relpush traj` for non-uniform models"
        )));
    }
    let u = cfg.initial_velocity();
    let xi = cfg.xi_end();
    let out = push_constant(u, &cfg.field(), xi);
    let norm_err = (minkowski_norm(out) - minkowski_norm(u)).abs();

    // position in units of c·τ along the same motion, then scaled by c
    let dx = displacement_constant(u, &cfg.field().scaled(cfg.xi_per_tau()), cfg.tau_end);
    let x0 = cfg.c * dx.x0;
    let x = cfg.x + dx.x * cfg.c;

    println!("tau      = {}", cfg.tau_end);
    println!("xi       = {xi}");
    println!("u0       = {}", out.u0);
    println!("u        = {},{},{}", out.u.x, out.u.y, out.u.z);
    println!("x0       = {x0}");
    println!("x        = {},{},{}", x.x, x.y, x.z);
    println!("norm_err = {norm_err:e}");
    Ok(ExitCode::SUCCESS)
}

pub fn trajectory_records(cfg: &RunConfig) -> anyhow::Result<Vec<Record>> {
    let model = cfg.core_model()?;
    let u_init = cfg.initial_velocity();
    let start = ParticleState::new(cfg.initial_position(), u_init);
    let scheme = cfg.scheme()?;
    let states = integrate(start, &model, cfg.tau_end, cfg.steps, &scheme)?;
    let n0 = minkowski_norm(u_init);
    let dtau = cfg.tau_end / cfg.steps as f64;
    Ok(states
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let tau = k as f64 * dtau;
            Record {
                tau,
                xi: cfg.xi_per_tau() * tau,
                x0: cfg.c * s.x.x0,
                x1: cfg.c * s.x.x.x,
                x2: cfg.c * s.x.x.y,
                x3: cfg.c * s.x.x.z,
                u0: s.u.u0,
                u1: s.u.u.x,
                u2: s.u.u.y,
                u3: s.u.u.z,
                norm_err: (minkowski_norm(s.u) - n0).abs(),
            }
        })
        .collect())
}

pub fn traj(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let records = trajectory_records(cfg).map_err(CliError::failure)?;
    let format = cfg.output_format();
    let write = |w: &mut dyn Write| -> io::Result<()> {
        match format {
            Format::Csv => write_csv(w, &records),
            Format::Json => write_json(w, &records),
        }
    };
    match &cfg.out {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("creating {}", path.display()))
                .map_err(CliError::failure)?;
            let mut w = BufWriter::new(file);
            write(&mut w)
                .and_then(|_| w.flush())
                .with_context(|| format!("writing {}", path.display()))
                .map_err(CliError::failure)?;
            let last = records.last().expect("at least two samples");
            eprintln!(
                "wrote {} samples to {}; final u = ({}, {}, {}, {})",
                records.len(),
                path.display(),
                last.u0,
                last.u1,
                last.u2,
                last.u3
            );
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
                .context("writing to stdout")
                .map_err(CliError::failure)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn validate(seed: u64, count: usize, tol: f64) -> Result<ExitCode, CliError> {
    if count == 0 {
        return Err(CliError::usage(anyhow!("--count must be at least 1")));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::usage(anyhow!("--tol must be non-negative")));
    }
    let mut cfg = SuiteConfig::new(seed, count);
    cfg.tolerance = tol;
    let report = run_suite(&cfg);
    println!("seed {seed}, {count} instances per check");
    for c in &report.checks {
        let relation = if c.must_exceed { ">" } else { "<=" };
        println!(
            "{:<6} {:<36} {:>12.3e} {relation} {:.1e}",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
    if report.passed() {
        println!("all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("validation FAILED");
        Ok(ExitCode::from(1))
    }
}

fn print_table(table: &ConvergenceTable) {
    println!(
        "scheme {} (design order {})",
        table.scheme, table.design_order
    );
    println!("{:>10} {:>14} {:>8}", "steps", "error", "slope");
    for row in &table.rows {
        let slope = row
            .slope
            .map(|s| format!("{s:.3}"))
            .unwrap_or_else(|| "-".into());
        println!("{:>10} {:>14.6e} {:>8}", row.steps, row.error, slope);
    }
    println!("fitted order = {:.3}", table.fitted_order());
}

pub fn converge(
    cfg: &RunConfig,
    min_steps: usize,
    doublings: u32,
    ref_steps: usize,
) -> Result<ExitCode, CliError> {
    let scheme = cfg.scheme().map_err(CliError::usage)?;
    if doublings < 2 {
        return Err(CliError::usage(anyhow!("--doublings must be at least 2")));
    }
    if min_steps == 0 || ref_steps == 0 {
        return Err(CliError::usage(anyhow!("step counts must be at least 1")));
    }
    let u = cfg.initial_velocity();
    let table = match cfg.model {
        ModelSpec::Uniform => {
            converge_constant(u, &cfg.field(), cfg.xi_end(), &scheme, min_steps, doublings)
                .map_err(CliError::failure)?
        }
        _ => {
            let model = cfg.core_model().map_err(CliError::failure)?;
            let start = cfg.initial_position();
            let reference = rk_final_state(start, u, &model, cfg.tau_end, ref_steps)
                .map_err(CliError::failure)?;
            converge_nonuniform(
                ParticleState::new(start, u),
                &model,
                cfg.tau_end,
                &scheme,
                min_steps,
                doublings,
                &reference,
            )
            .map_err(CliError::failure)?
        }
    };
    print_table(&table);
    Ok(ExitCode::SUCCESS)
}
