//! Cell-by-cell comparison of a convergence study with a published table.

use curveflow_core::EocTable;
use serde::Serialize;

use crate::error::AppError;
use crate::reference::{ReferenceTable, TableId, Tolerance};
use crate::study::parallel_study;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellComparison {
    #[serde(rename = "J")]
    pub elements: usize,
    /// `E<i>` or `eoc<i>`.
    pub quantity: String,
    pub reference: f64,
    pub computed: Option<f64>,
    /// Relative deviation for errors, absolute for eocs.
    pub deviation: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub table: String,
    pub example: String,
    pub alpha: f64,
    pub scheme: String,
    pub relative_tolerance: f64,
    pub eoc_tolerance: f64,
    pub level_failures: Vec<String>,
    pub cells: Vec<CellComparison>,
    pub pass: bool,
}

impl CompareReport {
    pub fn failed_cells(&self) -> impl Iterator<Item = &CellComparison> {
        self.cells.iter().filter(|c| !c.pass)
    }
}

fn cell(
    elements: usize,
    quantity: String,
    reference: f64,
    computed: Option<f64>,
    relative: bool,
    tolerance: f64,
) -> CellComparison {
    let deviation = computed.map(|c| {
        if relative {
            (c - reference).abs() / reference.abs()
        } else {
            (c - reference).abs()
        }
    });
    CellComparison {
        elements,
        quantity,
        reference,
        computed,
        deviation,
        tolerance,
        pass: deviation.is_some_and(|d| d <= tolerance),
    }
}

/// Compare a computed study against reference rows with the same levels.
pub fn compare_tables(
    reference: &ReferenceTable,
    computed: &EocTable,
    tol: Tolerance,
) -> CompareReport {
    let mut cells = Vec::new();
    let mut level_failures = Vec::new();
    for r in reference.rows {
        let row = computed.rows.iter().find(|c| c.elements == r.elements);
        if let Some(msg) = row.and_then(|c| c.failure.as_ref()) {
            level_failures.push(format!("J = {}: {msg}", r.elements));
        }
        if row.is_none() {
            level_failures.push(format!("J = {}: level not computed", r.elements));
        }
        for i in 1..=5 {
            if let Some(e) = r.errors[i - 1] {
                let got = row.and_then(|c| c.error(i));
                cells.push(cell(
                    r.elements,
                    format!("E{i}"),
                    e,
                    got,
                    true,
                    tol.relative,
                ));
            }
            if let Some(e) = r.eocs[i - 1] {
                let got = row.and_then(|c| c.eoc(i));
                cells.push(cell(r.elements, format!("eoc{i}"), e, got, false, tol.eoc));
            }
        }
    }
    let pass = level_failures.is_empty() && cells.iter().all(|c| c.pass);
    CompareReport {
        table: reference.id.name().to_string(),
        example: reference.example.name().to_string(),
        alpha: reference.alpha,
        scheme: reference.scheme.name().to_string(),
        relative_tolerance: tol.relative,
        eoc_tolerance: tol.eoc,
        level_failures,
        cells,
        pass,
    }
}

/// Run the study behind `id` and compare it with the published values.
pub fn compare_against_reference(
    id: TableId,
    relative: Option<f64>,
) -> Result<(EocTable, CompareReport), AppError> {
    let mut tol = id.default_tolerance();
    if let Some(r) = relative {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(AppError::Config(format!(
                "tolerance must be a non-negative number, got {r}"
            )));
        }
        tol.relative = r;
    }
    let reference = id.reference();
    let computed = parallel_study(
        reference.example,
        reference.alpha,
        reference.scheme,
        reference.time_rule(),
        &reference.levels(),
    )?;
    let report = compare_tables(&reference, &computed, tol);
    Ok((computed, report))
}
