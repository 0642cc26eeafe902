//! One time step of the curve: the mass-lumped parametric scheme with
//! orthogonal contact, solved by Newton's method, or the linearized
//! variant that only enforces the time derivative of the contact constraint.
//!
//! Residuals are scaled by the element width `h`, so the interior rows read
//! `½(q_{j−1}M_j + q_j M_{j+1}) D_tX_j − (X_{j−1} − 2X_j + X_{j+1}) − forcing`.
//! Boundary nodes carry two scalar equations packed into a [`Vec2`]:
//! `x` is the tangential equation tested with `∇⊥F(X)`, `y` is the constraint `F(X)`.

use alloc::vec::Vec;

use crate::block::BlockTridiagonalSystem;
use crate::boundary::BoundaryGeometry;
use crate::error::{Error, Result};
use crate::forcing::CurveForcing;
use crate::linalg::{Mat2, Vec2};
use crate::mesh::{element_frames, CurveState, FieldState, DEFAULT_MIN_LENGTH};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveScheme {
    /// Fully implicit contact conditions, solved by Newton's method.
    Newton,
    /// One linear solve per step with boundary directions frozen at the previous time level.
    Linear,
}

impl CurveScheme {
    pub fn name(&self) -> &'static str {
        match self {
            CurveScheme::Newton => "newton",
            CurveScheme::Linear => "linear",
        }
    }
}

impl core::str::FromStr for CurveScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "newton" => Ok(CurveScheme::Newton),
            "linear" => Ok(CurveScheme::Linear),
            other => Err(Error::ConfigInvalid(alloc::format!(
                "unknown scheme '{other}' (expected newton or linear)"
            ))),
        }
    }
}

/// Time level at which the explicit `t` dependence of the curve forcing is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ForcingTime {
    #[default]
    Previous,
    Current,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveStepParams {
    pub alpha: f64,
    pub dt: f64,
    pub forcing: CurveForcing,
    pub forcing_time: ForcingTime,
    pub scheme: CurveScheme,
    /// Bound on `max |F(X_0)|, |F(X_J)|`.
    pub newton_tol: f64,
    /// Bound on the max-norm of the last Newton increment.
    pub increment_tol: f64,
    pub newton_max_iter: usize,
    pub min_length: f64,
}

impl CurveStepParams {
    pub fn new(alpha: f64, dt: f64) -> Self {
        CurveStepParams {
            alpha,
            dt,
            forcing: CurveForcing::Zero,
            forcing_time: ForcingTime::Previous,
            scheme: CurveScheme::Newton,
            newton_tol: 1e-12,
            increment_tol: 1e-12,
            newton_max_iter: 25,
            min_length: DEFAULT_MIN_LENGTH,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::ConfigInvalid(alloc::format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::ConfigInvalid("time step must be positive".into()));
        }
        if !(self.newton_tol > 0.0 && self.increment_tol > 0.0) {
            return Err(Error::ConfigInvalid(
                "Newton tolerances must be positive".into(),
            ));
        }
        if self.newton_max_iter == 0 {
            return Err(Error::ConfigInvalid(
                "newton_max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    /// `max |F(X_j)|` over the two endpoints of the returned curve.
    pub final_constraint_violation: f64,
    pub converged: bool,
}

/// Data lagged from the previous time level: per-node mass blocks and forcing vectors.
#[derive(Clone, Debug)]
struct Lagged {
    /// `½ Σ q_σ M_σ` over the elements adjacent to each node.
    mass: Vec<Mat2>,
    /// `½ f_j Σ q_σ N_σ` over the elements adjacent to each node.
    forcing: Vec<Vec2>,
}

impl Lagged {
    fn new(prev: &CurveState, prev_field: &FieldState, p: &CurveStepParams) -> Result<Self> {
        let frames = element_frames(prev, p.min_length)?;
        let grid = prev.grid;
        let n = grid.nodes();
        if prev_field.values.len() != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                actual: prev_field.values.len(),
            });
        }
        let t_f = match p.forcing_time {
            ForcingTime::Previous => prev.time,
            ForcingTime::Current => prev.time + p.dt,
        };
        let elem_mass: Vec<Mat2> = frames
            .iter()
            .map(|fr| {
                let m = Mat2::IDENTITY * p.alpha + fr.normal.outer(fr.normal) * (1.0 - p.alpha);
                m * (0.5 * fr.chord_sq)
            })
            .collect();
        let elem_force: Vec<Vec2> = frames
            .iter()
            .map(|fr| fr.normal * (0.5 * fr.chord_sq))
            .collect();

        let mut mass = Vec::with_capacity(n);
        let mut forcing = Vec::with_capacity(n);
        for j in 0..n {
            let mut m = Mat2::ZERO;
            let mut b = Vec2::ZERO;
            if j > 0 {
                m = m + elem_mass[j - 1];
                b += elem_force[j - 1];
            }
            if j + 1 < n {
                m = m + elem_mass[j];
                b += elem_force[j];
            }
            let f = if p.forcing.is_zero() {
                0.0
            } else {
                p.forcing.eval(grid.rho(j), t_f, prev_field.values[j])
            };
            if !f.is_finite() {
                return Err(Error::NonFinite("curve forcing"));
            }
            mass.push(m);
            forcing.push(b * f);
        }
        Ok(Lagged { mass, forcing })
    }
}

/// How the boundary rows treat the contact geometry.
#[derive(Clone, Copy, PartialEq, Eq)]
enum BoundaryRows {
    /// Directions and constraint at the candidate, differentiated exactly.
    Exact,
    /// Directions at the previous time level; constraint linearized there.
    Frozen,
}

fn check_pair(prev: &CurveState, cand: &CurveState) -> Result<()> {
    if prev.grid != cand.grid || cand.nodes.len() != prev.nodes.len() {
        return Err(Error::ShapeMismatch {
            expected: prev.nodes.len(),
            actual: cand.nodes.len(),
        });
    }
    Ok(())
}

/// Nodal momentum balance `B_j D_tX_j − stiffness_j − b_j`.
///
/// At the ends the stiffness term is the one-sided difference towards the neighbour.
fn nodal_balance(lag: &Lagged, prev: &CurveState, cand: &CurveState, dt: f64, j: usize) -> Vec2 {
    let x = &cand.nodes;
    let last = x.len() - 1;
    let velocity = (x[j] - prev.nodes[j]) * (1.0 / dt);
    let stiffness = if j == 0 {
        x[1] - x[0]
    } else if j == last {
        x[last - 1] - x[last]
    } else {
        x[j - 1] - x[j] * 2.0 + x[j + 1]
    };
    lag.mass[j] * velocity - stiffness - lag.forcing[j]
}

fn assemble<G: BoundaryGeometry + ?Sized>(
    prev: &CurveState,
    lag: &Lagged,
    cand: &CurveState,
    geom: &G,
    dt: f64,
    rows: BoundaryRows,
    with_jacobian: bool,
) -> Result<(Vec<Vec2>, Option<BlockTridiagonalSystem>)> {
    let n = cand.nodes.len();
    let last = n - 1;
    let inv_dt = 1.0 / dt;
    let mut residual = Vec::with_capacity(n);
    let mut sys = with_jacobian.then(|| BlockTridiagonalSystem::zeros(n));

    for j in 0..n {
        let balance = nodal_balance(lag, prev, cand, dt, j);
        if j != 0 && j != last {
            residual.push(balance);
            if let Some(s) = sys.as_mut() {
                s.lower[j] = Mat2::IDENTITY * -1.0;
                s.upper[j] = Mat2::IDENTITY * -1.0;
                s.diag[j] = lag.mass[j] * inv_dt + Mat2::IDENTITY * 2.0;
                s.rhs[j] = -balance;
            }
            continue;
        }

        let at = match rows {
            BoundaryRows::Exact => cand.nodes[j],
            BoundaryRows::Frozen => prev.nodes[j],
        };
        let tangent_dir = geom.gradient_perp(at);
        let normal_dir = geom.gradient(at);
        let tangential = balance.dot(tangent_dir);
        let constraint = match rows {
            BoundaryRows::Exact => geom.value(cand.nodes[j]),
            BoundaryRows::Frozen => (cand.nodes[j] - prev.nodes[j]).dot(normal_dir),
        };
        let r = Vec2::new(tangential, constraint);
        if !r.is_finite() {
            return Err(Error::NonFinite("boundary residual"));
        }
        residual.push(r);

        if let Some(s) = sys.as_mut() {
            // d/dX_j of ⟨balance, ∇⊥F(X_j)⟩, as a row vector.
            let own = (lag.mass[j] * inv_dt + Mat2::IDENTITY).transpose() * tangent_dir;
            let own = match rows {
                BoundaryRows::Exact => own + geom.d2perp(at).transpose() * balance,
                BoundaryRows::Frozen => own,
            };
            s.diag[j] = Mat2::from_rows(own, normal_dir);
            let coupling = Mat2::from_rows(-tangent_dir, Vec2::ZERO);
            if j == 0 {
                s.upper[0] = coupling;
            } else {
                s.lower[last] = coupling;
            }
            s.rhs[j] = -r;
        }
    }
    if residual.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite("residual"));
    }
    Ok((residual, sys))
}

/// Scaled residual of the nonlinear step equations at a candidate curve.
pub fn assemble_residual<G: BoundaryGeometry + ?Sized>(
    prev: &CurveState,
    prev_field: &FieldState,
    cand: &CurveState,
    geom: &G,
    p: &CurveStepParams,
) -> Result<Vec<Vec2>> {
    check_pair(prev, cand)?;
    let lag = Lagged::new(prev, prev_field, p)?;
    Ok(assemble(prev, &lag, cand, geom, p.dt, BoundaryRows::Exact, false)?.0)
}

/// Newton system at a candidate curve: the Jacobian of [`assemble_residual`]
/// with right-hand side equal to the negated residual.
pub fn assemble_newton_system<G: BoundaryGeometry + ?Sized>(
    prev: &CurveState,
    prev_field: &FieldState,
    cand: &CurveState,
    geom: &G,
    p: &CurveStepParams,
) -> Result<BlockTridiagonalSystem> {
    check_pair(prev, cand)?;
    let lag = Lagged::new(prev, prev_field, p)?;
    let (_, sys) = assemble(prev, &lag, cand, geom, p.dt, BoundaryRows::Exact, true)?;
    Ok(sys.expect("jacobian requested"))
}

fn constraint_violation<G: BoundaryGeometry + ?Sized>(geom: &G, curve: &CurveState) -> f64 {
    libm::fmax(
        libm::fabs(geom.value(curve.first())),
        libm::fabs(geom.value(curve.last())),
    )
}

/// Advance the curve by one step with Newton's method, starting from the previous curve.
pub fn newton_step<G: BoundaryGeometry + ?Sized>(
    prev: &CurveState,
    prev_field: &FieldState,
    geom: &G,
    p: &CurveStepParams,
) -> Result<(CurveState, NewtonReport)> {
    p.validate()?;
    let lag = Lagged::new(prev, prev_field, p)?;
    let mut cand = prev.clone();
    cand.time = prev.time + p.dt;
    let mut violation = constraint_violation(geom, &cand);
    for iteration in 1..=p.newton_max_iter {
        let (_, sys) = assemble(prev, &lag, &cand, geom, p.dt, BoundaryRows::Exact, true)?;
        let delta = sys.expect("jacobian requested").solve()?;
        let mut increment = 0.0f64;
        for (x, d) in cand.nodes.iter_mut().zip(&delta) {
            *x += *d;
            increment = increment.max(d.max_abs());
        }
        element_frames(&cand, p.min_length)?;
        violation = constraint_violation(geom, &cand);
        if !violation.is_finite() {
            return Err(Error::NonFinite("Newton iterate"));
        }
        if violation <= p.newton_tol && increment <= p.increment_tol {
            return Ok((
                cand,
                NewtonReport {
                    iterations: iteration,
                    final_constraint_violation: violation,
                    converged: true,
                },
            ));
        }
    }
    Err(Error::NewtonDiverged {
        iterations: p.newton_max_iter,
        violation,
    })
}

/// Advance the curve by one linear solve; the endpoints move tangentially to the
/// boundary level set through the previous endpoints, so `F(X_0) = 0` is not enforced.
pub fn linear_scheme_step<G: BoundaryGeometry + ?Sized>(
    prev: &CurveState,
    prev_field: &FieldState,
    geom: &G,
    p: &CurveStepParams,
) -> Result<CurveState> {
    p.validate()?;
    let lag = Lagged::new(prev, prev_field, p)?;
    let (_, sys) = assemble(prev, &lag, prev, geom, p.dt, BoundaryRows::Frozen, true)?;
    let delta = sys.expect("jacobian requested").solve()?;
    let mut next = prev.clone();
    next.time = prev.time + p.dt;
    for (x, d) in next.nodes.iter_mut().zip(&delta) {
        *x += *d;
    }
    element_frames(&next, p.min_length)?;
    Ok(next)
}

/// Dispatch on [`CurveStepParams::scheme`]. The linear scheme reports a single iteration.
pub fn curve_step<G: BoundaryGeometry + ?Sized>(
    prev: &CurveState,
    prev_field: &FieldState,
    geom: &G,
    p: &CurveStepParams,
) -> Result<(CurveState, NewtonReport)> {
    match p.scheme {
        CurveScheme::Newton => newton_step(prev, prev_field, geom, p),
        CurveScheme::Linear => {
            let next = linear_scheme_step(prev, prev_field, geom, p)?;
            let violation = constraint_violation(geom, &next);
            Ok((
                next,
                NewtonReport {
                    iterations: 1,
                    final_constraint_violation: violation,
                    converged: true,
                },
            ))
        }
    }
}
