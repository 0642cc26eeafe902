//! Convergence studies with one thread per refinement level.

use std::thread;

use curveflow_core::{
    check_levels, study_level, CurveScheme, EocTable, Example, LevelOutcome, TimeRule,
};

use crate::error::AppError;

/// Run all levels concurrently; rows are assembled in level order.
pub fn parallel_study(
    example: Example,
    alpha: f64,
    scheme: CurveScheme,
    time_rule: TimeRule,
    levels: &[usize],
) -> Result<EocTable, AppError> {
    check_levels(levels).map_err(|e| AppError::Config(e.to_string()))?;
    let outcomes: Vec<LevelOutcome> = thread::scope(|scope| {
        let handles: Vec<_> = levels
            .iter()
            .map(|&j| scope.spawn(move || study_level(example, alpha, scheme, time_rule, j)))
            .collect();
        handles
            .into_iter()
            .zip(levels)
            .map(|(h, &j)| {
                h.join().unwrap_or_else(|_| LevelOutcome {
                    elements: j,
                    steps: None,
                    result: Err("level panicked".into()),
                })
            })
            .collect()
    });
    Ok(EocTable::from_levels(example, alpha, scheme, outcomes))
}
