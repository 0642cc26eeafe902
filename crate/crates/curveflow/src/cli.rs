use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use curveflow_core::{
    run_with, unit_gradient_deviation, BoundaryGeometry, CurveScheme, ErrorAccumulator,
    ErrorConvention, Example, SimConfig, SimState,
};

use crate::compare::compare_against_reference;
use crate::config::{load_config, parse_time_rule};
use crate::error::AppError;
use crate::output::{
    eoc_csv, eoc_markdown, write_json, write_snapshots, ErrorSummary, NewtonSummary, RunSummary,
};
use crate::reference::TableId;
use crate::study::parallel_study;

/// Deviation of `|∇F|` from one on the boundary above which `run` warns.
pub const GRADIENT_WARN_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "curveflow",
    version,
    about = "Forced curve shortening flow with orthogonal boundary contact"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation from a TOML configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Convergence study over mesh refinements.
    Converge {
        #[arg(long)]
        example: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value = "newton")]
        scheme: String,
        #[arg(long, value_delimiter = ',', default_values_t = [10, 20, 40, 80])]
        levels: Vec<usize>,
        #[arg(long, default_value = "h2")]
        dt_rule: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Reproduce a published table; exits 1 if any cell is out of tolerance.
    Compare {
        #[arg(long)]
        table: String,
        /// Relative tolerance on error cells.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Curve and field polylines at selected times, as CSV.
    Snapshots {
        #[arg(long)]
        example: String,
        #[arg(long, value_delimiter = ',')]
        times: Vec<f64>,
        #[arg(long = "J", default_value_t = 20)]
        elements: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse arguments and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn config_err(e: curveflow_core::Error) -> AppError {
    AppError::Config(e.to_string())
}

fn create_dir(dir: &Path) -> Result<(), AppError> {
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))
}

pub fn execute(command: Command) -> Result<i32, AppError> {
    match command {
        Command::Run { config, out } => cmd_run(&config, &out),
        Command::Converge {
            example,
            alpha,
            scheme,
            levels,
            dt_rule,
            out,
        } => {
            let example: Example = example.parse().map_err(config_err)?;
            let scheme: CurveScheme = scheme.parse().map_err(config_err)?;
            let rule = parse_time_rule(&dt_rule)?;
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(AppError::Config(format!(
                    "alpha must lie in (0, 1], got {alpha}"
                )));
            }
            let table = parallel_study(example, alpha, scheme, rule, &levels)?;
            create_dir(&out)?;
            let csv_path = out.join("eoc.csv");
            fs::write(&csv_path, eoc_csv(&table)?).map_err(|e| AppError::io(&csv_path, e))?;
            let md = eoc_markdown(&table);
            let md_path = out.join("eoc.md");
            fs::write(&md_path, &md).map_err(|e| AppError::io(&md_path, e))?;
            print!("{md}");
            Ok(if table.rows.iter().any(|r| r.failure.is_some()) {
                1
            } else {
                0
            })
        }
        Command::Compare { table, tol, out } => {
            let id: TableId = table.parse()?;
            let (_, report) = compare_against_reference(id, tol)?;
            create_dir(&out)?;
            write_json(&out.join("compare.json"), &report)?;
            for c in &report.cells {
                println!(
                    "{} J={:<3} {:<5} reference {:.4e} computed {} deviation {} {}",
                    report.table,
                    c.elements,
                    c.quantity,
                    c.reference,
                    c.computed
                        .map(|v| format!("{v:.4e}"))
                        .unwrap_or_else(|| "-".into()),
                    c.deviation
                        .map(|v| format!("{v:.2e}"))
                        .unwrap_or_else(|| "-".into()),
                    if c.pass { "ok" } else { "FAIL" }
                );
            }
            for f in &report.level_failures {
                println!("{} {f}", report.table);
            }
            println!(
                "{} {}",
                report.table,
                if report.pass { "PASS" } else { "FAIL" }
            );
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Snapshots {
            example,
            times,
            elements,
            alpha,
            out,
        } => {
            let example: Example = example.parse().map_err(config_err)?;
            let config = SimConfig::for_example(example, elements, alpha, CurveScheme::Newton);
            let text = snapshots_csv(&config, example.has_field(), &times)?;
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| AppError::io(&path, e))?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
            Ok(0)
        }
    }
}

/// States of `config` at the requested times, which must be time levels.
pub fn snapshots_csv(
    config: &SimConfig,
    with_field: bool,
    times: &[f64],
) -> Result<String, AppError> {
    if times.is_empty() {
        return Err(AppError::Config("--times needs at least one value".into()));
    }
    let steps = config.steps().map_err(config_err)?;
    let dt = config.dt().map_err(config_err)?;
    let mut wanted = Vec::with_capacity(times.len());
    for &t in times {
        let n = (t / dt).round();
        if !(0.0..=steps as f64).contains(&n) || (n * dt - t).abs() > 1e-9 {
            return Err(AppError::Config(format!(
                "time {t} is not a time level of Δt = {dt} in [0, {}]",
                config.final_time
            )));
        }
        wanted.push(n as usize);
    }
    let mut picked: Vec<SimState> = Vec::new();
    let mut config = config.clone();
    config.snapshot_stride = usize::MAX;
    run_with(&config, |s| {
        if wanted.contains(&s.step) {
            picked.push(s.clone());
        }
    })
    .map_err(|f| AppError::Simulation(f.error))?;
    let ordered: Vec<&SimState> = wanted
        .iter()
        .filter_map(|n| picked.iter().find(|s| s.step == *n))
        .collect();
    let mut buf = Vec::new();
    write_snapshots(&mut buf, &ordered, with_field)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

fn cmd_run(config_path: &Path, out: &Path) -> Result<i32, AppError> {
    let run = load_config(config_path)?;
    let sim = &run.sim;
    let deviation = unit_gradient_deviation(&sim.domain, 256);
    if deviation > GRADIENT_WARN_TOL {
        eprintln!("warning: |∇F| deviates from 1 by {deviation:e} on the boundary; contact conditions assume a unit gradient");
    }
    let steps = sim.steps().map_err(config_err)?;
    let dt = sim.dt().map_err(config_err)?;
    let with_field = sim.has_field();
    let mut accumulator = match run.exact {
        Some(ex) => Some(
            ErrorAccumulator::new(
                ex,
                dt,
                steps,
                with_field && ex.has_field(),
                ErrorConvention::REFERENCE,
            )
            .map_err(config_err)?,
        ),
        None => None,
    };
    let mut accumulate_error = None;
    let started = Instant::now();
    let outcome = run_with(sim, |s| {
        if let Some(acc) = accumulator.as_mut() {
            if let Err(e) = acc.observe(s) {
                accumulate_error.get_or_insert(e);
            }
        }
    });
    let elapsed = started.elapsed().as_secs_f64();
    create_dir(out)?;
    let (traj, failure) = match outcome {
        Ok(t) => (t, None),
        Err(f) => match f.partial {
            Some(t) => (t, Some(f.error)),
            None => return Err(config_err(f.error)),
        },
    };

    let mut states: Vec<&SimState> = traj.snapshots.iter().collect();
    if states.last().map(|s| s.step) != Some(traj.terminal.step) {
        states.push(&traj.terminal);
    }
    let path = out.join("snapshots.csv");
    let file = fs::File::create(&path).map_err(|e| AppError::io(&path, e))?;
    write_snapshots(io::BufWriter::new(file), &states, with_field)?;

    let terminal = &traj.terminal.curve;
    let terminal_violation = sim
        .domain
        .value(terminal.first())
        .abs()
        .max(sim.domain.value(terminal.last()).abs());
    let errors = match (&accumulator, &accumulate_error, &failure) {
        (Some(acc), None, None) => Some(ErrorSummary::from(&acc.finish(sim))),
        _ => None,
    };
    let summary = RunSummary {
        config: run.raw.clone(),
        steps,
        dt,
        terminal_time: traj.terminal.time(),
        terminal_constraint_violation: terminal_violation,
        newton: NewtonSummary {
            max_iterations: traj.max_newton_iterations(),
            mean_iterations: traj.mean_newton_iterations(),
            all_converged: traj.reports.iter().all(|r| r.converged),
            max_constraint_violation: traj
                .reports
                .iter()
                .map(|r| r.final_constraint_violation)
                .fold(0.0, f64::max),
        },
        errors,
        wall_clock_seconds: elapsed,
    };
    write_json(&out.join("summary.json"), &summary)?;

    if let Some(e) = failure {
        eprintln!("error: {e}; partial results written to {}", out.display());
        return Ok(1);
    }
    if let Some(e) = accumulate_error {
        return Err(AppError::Simulation(e));
    }
    println!(
        "{} steps to t = {} in {:.3} s, mean Newton iterations {:.2}",
        steps,
        traj.terminal.time(),
        elapsed,
        summary.newton.mean_iterations
    );
    if let Some(e) = &summary.errors {
        println!("E1 = {:.4e}  E2 = {:.4e}  E3 = {:.4e}", e.e1, e.e2, e.e3);
        if let (Some(e4), Some(e5)) = (e.e4, e.e5) {
            println!("E4 = {e4:.4e}  E5 = {e5:.4e}");
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(main_with_args(["curveflow", "frobnicate"]), 2);
        assert_eq!(main_with_args(["curveflow", "compare", "--table", "t9"]), 2);
        assert_eq!(
            main_with_args([
                "curveflow",
                "converge",
                "--example",
                "semicircle",
                "--dt-rule",
                "h9"
            ]),
            2
        );
        assert_eq!(
            main_with_args([
                "curveflow",
                "snapshots",
                "--example",
                "semicircle",
                "--times",
                "0.01234"
            ]),
            2
        );
    }

    #[test]
    fn snapshot_times_must_be_time_levels() {
        let config = SimConfig::for_example(Example::Semicircle, 10, 1.0, CurveScheme::Newton);
        let text = snapshots_csv(&config, false, &[0.0, 0.08, 0.4]).unwrap();
        assert_eq!(text.lines().count(), 1 + 3 * 11);
        assert!(snapshots_csv(&config, false, &[0.5]).is_err());
    }
}
