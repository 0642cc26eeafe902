//! CSV, JSON and Markdown writers.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use curveflow_core::{EocTable, ErrorReport, SimState};
use serde::Serialize;

use crate::config::RawConfig;
use crate::error::AppError;

/// Round-trip representation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub const SNAPSHOT_HEADER: [&str; 7] = ["n", "t", "j", "rho", "x", "y", "w"];

/// One row per node per state; `w` is left empty for curve-only runs.
pub fn write_snapshots<W: Write>(
    out: W,
    states: &[&SimState],
    with_field: bool,
) -> Result<(), AppError> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(SNAPSHOT_HEADER)?;
    for s in states {
        let grid = s.curve.grid;
        for (j, x) in s.curve.nodes.iter().enumerate() {
            let w = if with_field {
                fmt_f64(s.field.values[j])
            } else {
                String::new()
            };
            wtr.write_record([
                s.step.to_string(),
                fmt_f64(s.time()),
                j.to_string(),
                fmt_f64(grid.rho(j)),
                fmt_f64(x.x),
                fmt_f64(x.y),
                w,
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: Option<f64>,
    pub e5: Option<f64>,
}

impl From<&ErrorReport> for ErrorSummary {
    fn from(r: &ErrorReport) -> Self {
        ErrorSummary {
            e1: r.e1,
            e2: r.e2,
            e3: r.e3,
            e4: r.e4,
            e5: r.e5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonSummary {
    pub max_iterations: usize,
    pub mean_iterations: f64,
    pub all_converged: bool,
    pub max_constraint_violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub config: RawConfig,
    pub steps: usize,
    pub dt: f64,
    pub terminal_time: f64,
    /// `max(|F(X_0)|, |F(X_J)|)` at the final time.
    pub terminal_constraint_violation: f64,
    pub newton: NewtonSummary,
    /// Errors against the configured closed-form solution, if any.
    pub errors: Option<ErrorSummary>,
    pub wall_clock_seconds: f64,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), AppError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| AppError::io(path, e))
}

fn error_columns(table: &EocTable) -> Vec<usize> {
    (1..=5)
        .filter(|&i| table.rows.iter().any(|r| r.error(i).is_some()))
        .collect()
}

pub fn eoc_csv(table: &EocTable) -> Result<String, AppError> {
    let cols = error_columns(table);
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["J".to_string(), "N".to_string()];
    for i in &cols {
        header.push(format!("E{i}"));
        header.push(format!("eoc{i}"));
    }
    header.push("failure".into());
    wtr.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![
            row.elements.to_string(),
            row.steps.map(|n| n.to_string()).unwrap_or_default(),
        ];
        for &i in &cols {
            rec.push(row.error(i).map(fmt_f64).unwrap_or_default());
            rec.push(row.eoc(i).map(|e| format!("{e:.2}")).unwrap_or_default());
        }
        rec.push(row.failure.clone().unwrap_or_default());
        wtr.write_record(&rec)?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| AppError::Write(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn eoc_markdown(table: &EocTable) -> String {
    let cols = error_columns(table);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}, alpha = {}, {} scheme\n",
        table.example.name(),
        table.alpha,
        table.scheme.name()
    );
    let mut header = String::from("| J | N |");
    let mut rule = String::from("|---|---|");
    for i in &cols {
        let _ = write!(header, " E{i} | eoc{i} |");
        rule.push_str("---|---|");
    }
    let _ = writeln!(s, "{header}\n{rule}");
    for row in &table.rows {
        let _ = write!(
            s,
            "| {} | {} |",
            row.elements,
            row.steps
                .map(|n| n.to_string())
                .unwrap_or_else(|| "-".into())
        );
        for &i in &cols {
            let e = row
                .error(i)
                .map(|e| format!("{e:.4e}"))
                .unwrap_or_else(|| "-".into());
            let r = row
                .eoc(i)
                .map(|e| format!("{e:.2}"))
                .unwrap_or_else(|| "-".into());
            let _ = write!(s, " {e} | {r} |");
        }
        s.push('\n');
    }
    for row in table.rows.iter().filter(|r| r.failure.is_some()) {
        let _ = writeln!(
            s,
            "\nJ = {} failed: {}",
            row.elements,
            row.failure.as_deref().unwrap_or_default()
        );
    }
    s
}
