//! Error functionals against the closed-form solutions, experimental orders of
//! convergence, and convergence studies over mesh refinements.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::boundary::BoundaryGeometry;
use crate::error::{Error, Result};
use crate::evolver::CurveScheme;
use crate::exact::Example;
use crate::linalg::Vec2;
use crate::mesh::{
    l2_norm_sq_elementwise, l2_norm_sq_elementwise_vec, l2_norm_sq_mixed, l2_norm_sq_mixed_vec,
    l2_norm_sq_pwlinear, l2_norm_sq_pwlinear_vec,
};
use crate::sim::{run_with, SimConfig, SimState, TimeRule, Trajectory};

/// How the derivative errors `E_1` and `E_5` compare exact and discrete derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMeasure {
    /// `‖(I^h u)_ρ − U_ρ‖²`: derivative of the interpolant, elementwise constant.
    OfInterpolant,
    /// `‖I^h(u_ρ) − U_ρ‖²`: interpolant of the exact derivative, piecewise linear.
    InterpolatedDerivative,
}

/// Conventions under which the error functionals are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErrorConvention {
    pub derivative: DerivativeMeasure,
    /// Whether the state at `t_N` enters the sups and sums.
    pub include_final_step: bool,
}

impl ErrorConvention {
    /// The convention under which the published reference tables were produced:
    /// derivative of the interpolant, time levels `0..N−1`.
    pub const REFERENCE: ErrorConvention = ErrorConvention {
        derivative: DerivativeMeasure::OfInterpolant,
        include_final_step: false,
    };

    /// Interpolated exact derivative over all time levels `0..N`.
    pub const FULL: ErrorConvention = ErrorConvention {
        derivative: DerivativeMeasure::InterpolatedDerivative,
        include_final_step: true,
    };
}

impl Default for ErrorConvention {
    fn default() -> Self {
        ErrorConvention::REFERENCE
    }
}

/// Squared-norm errors of one run.
///
/// * `e1`: `sup_n ‖x_ρ − X_ρ‖²` (see [`DerivativeMeasure`])
/// * `e2`: `Σ_n Δt ‖D_t(I^h x − X)‖²`
/// * `e3`: `sup_n max(|F(X_0)|, |F(X_J)|)`
/// * `e4`: `sup_n ‖I^h w − W‖²`
/// * `e5`: `Σ_n Δt ‖w_ρ − W_ρ‖²`
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: Option<f64>,
    pub e5: Option<f64>,
    pub elements: usize,
    pub steps: usize,
    pub alpha: f64,
    pub scheme: CurveScheme,
}

impl ErrorReport {
    /// Error `E_i` for `i ∈ 1..=5`.
    pub fn get(&self, index: usize) -> Option<f64> {
        match index {
            1 => Some(self.e1),
            2 => Some(self.e2),
            3 => Some(self.e3),
            4 => self.e4,
            5 => self.e5,
            _ => None,
        }
    }
}

/// Streaming accumulation of [`ErrorReport`] over consecutive states.
#[derive(Clone, Debug)]
pub struct ErrorAccumulator {
    example: Example,
    with_field: bool,
    convention: ErrorConvention,
    dt: f64,
    steps: usize,
    prev_error: Option<Vec<Vec2>>,
    e1: f64,
    e2: f64,
    e3: f64,
    e4: f64,
    e5: f64,
    last_step: Option<usize>,
}

impl ErrorAccumulator {
    pub fn new(
        example: Example,
        dt: f64,
        steps: usize,
        with_field: bool,
        convention: ErrorConvention,
    ) -> Result<Self> {
        if with_field && example.w(0.0, 0.0).is_none() {
            return Err(Error::MissingExactField);
        }
        Ok(ErrorAccumulator {
            example,
            with_field,
            convention,
            dt,
            steps,
            prev_error: None,
            e1: 0.0,
            e2: 0.0,
            e3: 0.0,
            e4: 0.0,
            e5: 0.0,
            last_step: None,
        })
    }

    /// Feed the next state; states must arrive at consecutive steps starting from the initial one.
    pub fn observe(&mut self, state: &SimState) -> Result<()> {
        let expected = self.last_step.map_or(0, |s| s + 1);
        if state.step != expected {
            return Err(Error::ConfigInvalid(alloc::format!(
                "error accumulation needs every step: expected step {expected}, got {}",
                state.step
            )));
        }
        self.last_step = Some(state.step);
        if state.step == self.steps && !self.convention.include_final_step {
            return Ok(());
        }
        let grid = state.curve.grid;
        let t = state.time();
        let ex = self.example;

        let error: Vec<Vec2> = grid
            .rhos()
            .zip(&state.curve.nodes)
            .map(|(r, x)| ex.x(r, t) - *x)
            .collect();
        let e1 = match self.convention.derivative {
            DerivativeMeasure::OfInterpolant => {
                let inv_h = grid.elements() as f64;
                let d: Vec<Vec2> = error.windows(2).map(|w| (w[1] - w[0]) * inv_h).collect();
                l2_norm_sq_elementwise_vec(&d, grid)?
            }
            DerivativeMeasure::InterpolatedDerivative => {
                let exact: Vec<Vec2> = grid.rhos().map(|r| ex.x_rho(r, t)).collect();
                l2_norm_sq_mixed_vec(&exact, &state.curve.derivative(), grid)?
            }
        };
        self.e1 = self.e1.max(e1);

        if let Some(prev) = &self.prev_error {
            let diff: Vec<Vec2> = error.iter().zip(prev).map(|(a, b)| *a - *b).collect();
            self.e2 += l2_norm_sq_pwlinear_vec(&diff, grid)? / self.dt;
        }
        self.prev_error = Some(error);

        let domain = ex.domain();
        let e3 = libm::fmax(
            libm::fabs(domain.value(state.curve.first())),
            libm::fabs(domain.value(state.curve.last())),
        );
        self.e3 = self.e3.max(e3);

        if self.with_field {
            let w_err: Vec<f64> = grid
                .rhos()
                .zip(&state.field.values)
                .map(|(r, w)| ex.w(r, t).expect("checked") - w)
                .collect();
            self.e4 = self.e4.max(l2_norm_sq_pwlinear(&w_err, grid)?);
            if state.step > 0 {
                let e5 = match self.convention.derivative {
                    DerivativeMeasure::OfInterpolant => {
                        let inv_h = grid.elements() as f64;
                        let d: Vec<f64> = w_err.windows(2).map(|w| (w[1] - w[0]) * inv_h).collect();
                        l2_norm_sq_elementwise(&d, grid)?
                    }
                    DerivativeMeasure::InterpolatedDerivative => {
                        let w_rho: Vec<f64> = grid
                            .rhos()
                            .map(|r| ex.w_rho(r, t).expect("checked"))
                            .collect();
                        l2_norm_sq_mixed(&w_rho, &state.field.derivative(), grid)?
                    }
                };
                self.e5 += self.dt * e5;
            }
        }
        Ok(())
    }

    pub fn finish(&self, config: &SimConfig) -> ErrorReport {
        ErrorReport {
            e1: self.e1,
            e2: self.e2,
            e3: self.e3,
            e4: self.with_field.then_some(self.e4),
            e5: self.with_field.then_some(self.e5),
            elements: config.elements,
            steps: self.steps,
            alpha: config.alpha,
            scheme: config.scheme,
        }
    }
}

/// Errors of a trajectory that stored every step.
pub fn error_accumulate(
    traj: &Trajectory,
    config: &SimConfig,
    exact: Example,
    with_field: bool,
    convention: ErrorConvention,
) -> Result<ErrorReport> {
    if traj.snapshots.len() != traj.steps + 1 {
        return Err(Error::ConfigInvalid(
            "error accumulation needs a trajectory with snapshot_stride = 1".into(),
        ));
    }
    let mut acc = ErrorAccumulator::new(exact, traj.dt, traj.steps, with_field, convention)?;
    for s in &traj.snapshots {
        acc.observe(s)?;
    }
    Ok(acc.finish(config))
}

/// Experimental order of convergence between two `(h, E)` pairs.
pub fn eoc(prev: (f64, f64), curr: (f64, f64)) -> Result<f64> {
    let (h0, e0) = prev;
    let (h1, e1) = curr;
    if e0 == 0.0 || e1 == 0.0 {
        return Err(Error::ZeroError);
    }
    if h0 == h1 || !(h0 > 0.0 && h1 > 0.0) || !(e0 > 0.0 && e1 > 0.0) {
        return Err(Error::ConfigInvalid(
            "eoc needs distinct positive h and positive errors".into(),
        ));
    }
    Ok(libm::log(e0 / e1) / libm::log(h0 / h1))
}

/// Run one verification problem and accumulate its errors without storing the trajectory.
pub fn run_level(
    example: Example,
    elements: usize,
    alpha: f64,
    scheme: CurveScheme,
    time_rule: TimeRule,
) -> Result<(SimConfig, ErrorReport)> {
    let mut config = SimConfig::for_example(example, elements, alpha, scheme);
    config.time_rule = time_rule;
    run_config(example, config, ErrorConvention::REFERENCE)
}

/// Like [`run_level`] for a caller-built configuration of `example`.
pub fn run_config(
    example: Example,
    mut config: SimConfig,
    convention: ErrorConvention,
) -> Result<(SimConfig, ErrorReport)> {
    config.snapshot_stride = usize::MAX;
    let mut acc = ErrorAccumulator::new(
        example,
        config.dt()?,
        config.steps()?,
        example.has_field(),
        convention,
    )?;
    let mut observe_err = None;
    let outcome = run_with(&config, |s| {
        if observe_err.is_none() {
            if let Err(e) = acc.observe(s) {
                observe_err = Some(e);
            }
        }
    });
    outcome.map_err(|f| f.error)?;
    if let Some(e) = observe_err {
        return Err(e);
    }
    let report = acc.finish(&config);
    Ok((config, report))
}

/// Outcome of one refinement level.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelOutcome {
    pub elements: usize,
    pub steps: Option<usize>,
    pub result: core::result::Result<ErrorReport, String>,
}

/// One table row: errors `E_1..E_5` and eocs against the previous row.
///
/// The constraint drift `E_3` is a time-stepping error, so its eoc is taken
/// with respect to `Δt`; all other eocs are with respect to `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct EocRow {
    pub elements: usize,
    pub steps: Option<usize>,
    pub errors: [Option<f64>; 5],
    pub eocs: [Option<f64>; 5],
    pub failure: Option<String>,
}

impl EocRow {
    pub fn error(&self, index: usize) -> Option<f64> {
        self.errors.get(index.wrapping_sub(1)).copied().flatten()
    }

    pub fn eoc(&self, index: usize) -> Option<f64> {
        self.eocs.get(index.wrapping_sub(1)).copied().flatten()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EocTable {
    pub example: Example,
    pub alpha: f64,
    pub scheme: CurveScheme,
    pub rows: Vec<EocRow>,
}

impl EocTable {
    /// Assemble rows in level order; eocs are computed between consecutive successful levels.
    pub fn from_levels(
        example: Example,
        alpha: f64,
        scheme: CurveScheme,
        levels: Vec<LevelOutcome>,
    ) -> Self {
        let mut rows: Vec<EocRow> = Vec::with_capacity(levels.len());
        for level in levels {
            let (errors, failure) = match &level.result {
                Ok(r) => ([1, 2, 3, 4, 5].map(|i| r.get(i)), None),
                Err(msg) => ([None; 5], Some(msg.clone())),
            };
            let mut eocs = [None; 5];
            if let Some(prev) = rows.last() {
                let h = (1.0 / prev.elements as f64, 1.0 / level.elements as f64);
                let dt = prev
                    .steps
                    .zip(level.steps)
                    .map(|(n0, n1)| (1.0 / n0 as f64, 1.0 / n1 as f64));
                for i in 0..5 {
                    let (s0, s1) = if i == 2 {
                        match dt {
                            Some(d) => d,
                            None => continue,
                        }
                    } else {
                        h
                    };
                    if let (Some(a), Some(b)) = (prev.errors[i], errors[i]) {
                        eocs[i] = eoc((s0, a), (s1, b)).ok();
                    }
                }
            }
            rows.push(EocRow {
                elements: level.elements,
                steps: level.steps,
                errors,
                eocs,
                failure,
            });
        }
        EocTable {
            example,
            alpha,
            scheme,
            rows,
        }
    }
}

/// Default refinement levels.
pub const DEFAULT_LEVELS: [usize; 4] = [10, 20, 40, 80];

/// Run every level in order; failures are recorded in the table.
pub fn convergence_study(
    example: Example,
    alpha: f64,
    scheme: CurveScheme,
    time_rule: TimeRule,
    levels: &[usize],
) -> Result<EocTable> {
    check_levels(levels)?;
    let outcomes = levels
        .iter()
        .map(|&j| study_level(example, alpha, scheme, time_rule, j))
        .collect();
    Ok(EocTable::from_levels(example, alpha, scheme, outcomes))
}

pub fn check_levels(levels: &[usize]) -> Result<()> {
    if levels.is_empty() || levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ConfigInvalid(
            "levels must be non-empty and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// One level of a study, with failures turned into row content.
pub fn study_level(
    example: Example,
    alpha: f64,
    scheme: CurveScheme,
    time_rule: TimeRule,
    elements: usize,
) -> LevelOutcome {
    match run_level(example, elements, alpha, scheme, time_rule) {
        Ok((config, report)) => LevelOutcome {
            elements,
            steps: config.steps().ok(),
            result: Ok(report),
        },
        Err(e) => {
            let mut config = SimConfig::for_example(example, elements, alpha, scheme);
            config.time_rule = time_rule;
            LevelOutcome {
                elements,
                steps: config.steps().ok(),
                result: Err(e.to_string()),
            }
        }
    }
}
