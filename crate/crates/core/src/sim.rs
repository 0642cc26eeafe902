//! The coupled time loop: each step advances the curve with the lagged field,
//! then advances the field on the accepted curve.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::boundary::{BoundaryGeometry, Domain};
use crate::error::{Error, Result};
use crate::evolver::{curve_step, CurveScheme, CurveStepParams, ForcingTime, NewtonReport};
use crate::exact::Example;
use crate::forcing::{CurveForcing, FieldSource};
use crate::linalg::Vec2;
use crate::mesh::{CurveState, FieldState, ParameterGrid, DEFAULT_MIN_LENGTH};
use crate::surface::{field_step, FieldStepParams};

/// Initial endpoints must satisfy `|F| ≤` this.
pub const INITIAL_CONSTRAINT_TOL: f64 = 1e-12;

/// How the uniform time step follows from the element width `h = 1/J`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeRule {
    /// `Δt = h²`.
    HSquared,
    /// `Δt = c·h`.
    ProportionalToH(f64),
    /// `N` steps of `Δt = T/N`.
    Steps(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCurve {
    /// Unit semicircle `(cos πρ, sin πρ)`.
    Semicircle,
    /// Diameter of the unit disc along the direction `(1, 1)`.
    Diameter,
    Nodes(Vec<Vec2>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialField {
    Constant(f64),
    /// `ρ(ρ − 1)`.
    Parabola,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub domain: Domain,
    pub alpha: f64,
    pub elements: usize,
    pub final_time: f64,
    pub time_rule: TimeRule,
    pub scheme: CurveScheme,
    pub forcing: CurveForcing,
    pub forcing_time: ForcingTime,
    pub source: FieldSource,
    pub source_time: ForcingTime,
    pub boundary_value: f64,
    pub initial_curve: InitialCurve,
    pub initial_field: InitialField,
    pub newton_tol: f64,
    pub increment_tol: f64,
    pub newton_max_iter: usize,
    pub snapshot_stride: usize,
}

impl SimConfig {
    /// Configuration of a verification problem at resolution `J` with `Δt = h²`.
    pub fn for_example(example: Example, elements: usize, alpha: f64, scheme: CurveScheme) -> Self {
        let (initial_curve, initial_field) = match example {
            Example::Semicircle => (InitialCurve::Semicircle, InitialField::Constant(0.0)),
            Example::Diameter => (InitialCurve::Diameter, InitialField::Constant(0.0)),
            Example::Coupled => (InitialCurve::Diameter, InitialField::Parabola),
        };
        SimConfig {
            domain: example.domain(),
            alpha,
            elements,
            final_time: example.final_time(),
            time_rule: TimeRule::HSquared,
            scheme,
            forcing: example.forcing(),
            forcing_time: ForcingTime::Previous,
            source: example.source(),
            source_time: ForcingTime::Previous,
            boundary_value: 0.0,
            initial_curve,
            initial_field,
            newton_tol: 1e-12,
            increment_tol: 1e-12,
            newton_max_iter: 25,
            snapshot_stride: 1,
        }
    }

    pub fn grid(&self) -> Result<ParameterGrid> {
        ParameterGrid::new(self.elements)
    }

    /// Number of time steps `N = T/Δt`, which must be a positive integer.
    pub fn steps(&self) -> Result<usize> {
        if !(self.final_time > 0.0 && self.final_time.is_finite()) {
            return Err(Error::ConfigInvalid("T must be positive".into()));
        }
        if self.elements < 2 {
            return Err(Error::ConfigInvalid("J must be ≥ 2".into()));
        }
        let h = 1.0 / self.elements as f64;
        let dt = match self.time_rule {
            TimeRule::Steps(0) => {
                return Err(Error::ConfigInvalid(
                    "number of time steps must be positive".into(),
                ))
            }
            TimeRule::Steps(n) => return Ok(n),
            TimeRule::HSquared => h * h,
            TimeRule::ProportionalToH(c) if c > 0.0 && c.is_finite() => c * h,
            TimeRule::ProportionalToH(c) => {
                return Err(Error::ConfigInvalid(format!(
                    "time step factor must be positive, got {c}"
                )))
            }
        };
        let ratio = self.final_time / dt;
        let n = libm::round(ratio);
        if n < 1.0 || libm::fabs(ratio - n) > 1e-9 * n {
            return Err(Error::ConfigInvalid(format!(
                "T/Δt = {ratio} is not a positive integer"
            )));
        }
        Ok(n as usize)
    }

    /// Uniform time step `T/N`.
    pub fn dt(&self) -> Result<f64> {
        Ok(self.final_time / self.steps()? as f64)
    }

    /// `t_n`, computed without accumulation so that `t_N = T` exactly.
    pub fn time_at(&self, n: usize, steps: usize) -> f64 {
        if n == steps {
            self.final_time
        } else {
            self.final_time * n as f64 / steps as f64
        }
    }

    /// Whether the field can differ from zero.
    pub fn has_field(&self) -> bool {
        !self.source.is_zero()
            || self.initial_field != InitialField::Constant(0.0)
            || self.boundary_value != 0.0
    }

    pub fn validate(&self) -> Result<()> {
        self.steps()?;
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::ConfigInvalid(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::ConfigInvalid(
                "snapshot_stride must be positive".into(),
            ));
        }
        if !(self.newton_tol > 0.0 && self.increment_tol > 0.0) || self.newton_max_iter == 0 {
            return Err(Error::ConfigInvalid(
                "Newton tolerances and iteration cap must be positive".into(),
            ));
        }
        if !self.boundary_value.is_finite() {
            return Err(Error::ConfigInvalid("w_b must be finite".into()));
        }
        if let InitialCurve::Nodes(nodes) = &self.initial_curve {
            if nodes.len() != self.elements + 1 {
                return Err(Error::ConfigInvalid(format!(
                    "custom initial curve has {} nodes, J = {} needs {}",
                    nodes.len(),
                    self.elements,
                    self.elements + 1
                )));
            }
        }
        Ok(())
    }

    pub fn curve_params(&self) -> Result<CurveStepParams> {
        Ok(CurveStepParams {
            alpha: self.alpha,
            dt: self.dt()?,
            forcing: self.forcing,
            forcing_time: self.forcing_time,
            scheme: self.scheme,
            newton_tol: self.newton_tol,
            increment_tol: self.increment_tol,
            newton_max_iter: self.newton_max_iter,
            min_length: DEFAULT_MIN_LENGTH,
        })
    }

    pub fn field_params(&self) -> Result<FieldStepParams> {
        Ok(FieldStepParams {
            source: self.source,
            boundary_value: self.boundary_value,
            dt: self.dt()?,
            source_time: self.source_time,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub step: usize,
    pub curve: CurveState,
    pub field: FieldState,
}

impl SimState {
    pub fn time(&self) -> f64 {
        self.curve.time
    }
}

/// Nodal interpolants of the initial data, with the contact constraint checked.
pub fn initialize(config: &SimConfig) -> Result<SimState> {
    config.validate()?;
    let grid = config.grid()?;
    let curve = match &config.initial_curve {
        InitialCurve::Semicircle => CurveState::interpolate(grid, 0.0, |r| {
            Vec2::new(libm::cos(PI * r), libm::sin(PI * r))
        }),
        InitialCurve::Diameter => CurveState::interpolate(grid, 0.0, |r| {
            Vec2::new(1.0, 1.0) * (core::f64::consts::SQRT_2 * (r - 0.5))
        }),
        InitialCurve::Nodes(nodes) => CurveState::new(grid, nodes.clone(), 0.0)?,
    };
    for (node, p) in [(0, curve.first()), (grid.elements(), curve.last())] {
        let violation = libm::fabs(config.domain.value(p));
        if !(violation <= INITIAL_CONSTRAINT_TOL) {
            return Err(Error::ConstraintViolatedAtStart { node, violation });
        }
    }
    curve.frames()?;
    let field = match config.initial_field {
        InitialField::Constant(c) => FieldState::constant(grid, 0.0, c),
        InitialField::Parabola => FieldState::interpolate(grid, 0.0, |r| r * (r - 1.0)),
    };
    Ok(SimState {
        step: 0,
        curve,
        field,
    })
}

/// One coupled step from `t_{n−1}` to `t_n`.
pub fn advance(state: &SimState, config: &SimConfig) -> Result<(SimState, NewtonReport)> {
    let steps = config.steps()?;
    let step = state.step + 1;
    let t = config.time_at(step, steps);
    let inner = || -> Result<(SimState, NewtonReport)> {
        let cp = config.curve_params()?;
        let (mut curve, report) = curve_step(&state.curve, &state.field, &config.domain, &cp)?;
        curve.time = t;
        let field = if config.has_field() {
            field_step(&state.curve, &curve, &state.field, &config.field_params()?)?
        } else {
            let mut f = state.field.clone();
            f.time = t;
            f
        };
        Ok((SimState { step, curve, field }, report))
    };
    inner().map_err(|e| e.at_step(step))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// States at every `snapshot_stride`-th step, starting with the initial data.
    pub snapshots: Vec<SimState>,
    pub terminal: SimState,
    /// One report per completed step.
    pub reports: Vec<NewtonReport>,
    pub dt: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn max_newton_iterations(&self) -> usize {
        self.reports.iter().map(|r| r.iterations).max().unwrap_or(0)
    }

    pub fn mean_newton_iterations(&self) -> f64 {
        if self.reports.is_empty() {
            return 0.0;
        }
        self.reports
            .iter()
            .map(|r| r.iterations as f64)
            .sum::<f64>()
            / self.reports.len() as f64
    }
}

/// A run that stopped early, with everything computed before the failure.
///
/// `partial` is `None` when the configuration or initial data were rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct RunFailure {
    pub partial: Option<Trajectory>,
    pub error: Error,
}

/// Run to the final time, calling `observe` on every state including the initial one.
pub fn run_with<F: FnMut(&SimState)>(
    config: &SimConfig,
    mut observe: F,
) -> Result<Trajectory, RunFailure> {
    let empty = |error: Error| RunFailure {
        partial: None,
        error,
    };
    let steps = config.steps().map_err(empty)?;
    let dt = config.dt().map_err(empty)?;
    let mut state = initialize(config).map_err(empty)?;
    observe(&state);
    let mut snapshots = Vec::with_capacity(steps / config.snapshot_stride + 2);
    snapshots.push(state.clone());
    let mut reports = Vec::with_capacity(steps);
    for _ in 0..steps {
        match advance(&state, config) {
            Ok((next, report)) => {
                observe(&next);
                if next.step % config.snapshot_stride == 0 {
                    snapshots.push(next.clone());
                }
                reports.push(report);
                state = next;
            }
            Err(error) => {
                return Err(RunFailure {
                    partial: Some(Trajectory {
                        snapshots,
                        terminal: state,
                        reports,
                        dt,
                        steps,
                    }),
                    error,
                })
            }
        }
    }
    Ok(Trajectory {
        snapshots,
        terminal: state,
        reports,
        dt,
        steps,
    })
}

pub fn run(config: &SimConfig) -> Result<Trajectory, RunFailure> {
    run_with(config, |_| {})
}
