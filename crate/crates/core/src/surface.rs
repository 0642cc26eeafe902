//! Reaction-diffusion of the scalar field on the evolving curve.

use alloc::vec;
use alloc::vec::Vec;

use crate::block::solve_tridiagonal;
use crate::error::{Error, Result};
use crate::evolver::ForcingTime;
use crate::forcing::FieldSource;
use crate::mesh::{element_frames, CurveState, FieldState, DEFAULT_MIN_LENGTH};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldStepParams {
    pub source: FieldSource,
    /// Dirichlet value at both curve endpoints.
    pub boundary_value: f64,
    pub dt: f64,
    /// Time level of the explicit `t` argument of the source.
    pub source_time: ForcingTime,
}

/// Tangential and normal components of the nodal velocity in each element's frame.
///
/// Index `[k]` of each pair refers to the element's left (`k = 0`) and right (`k = 1`) node.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementVelocities {
    pub tangential: Vec<[f64; 2]>,
    pub normal: Vec<[f64; 2]>,
}

/// Decompose `(X^n − X^{n−1})/Δt` at each element's end nodes in the time-`n` element frame.
pub fn element_velocities(
    prev: &CurveState,
    curr: &CurveState,
    dt: f64,
) -> Result<ElementVelocities> {
    if prev.grid != curr.grid {
        return Err(Error::ShapeMismatch {
            expected: curr.nodes.len(),
            actual: prev.nodes.len(),
        });
    }
    let frames = element_frames(curr, DEFAULT_MIN_LENGTH)?;
    let inv_dt = 1.0 / dt;
    let velocity: Vec<_> = curr
        .nodes
        .iter()
        .zip(&prev.nodes)
        .map(|(a, b)| (*a - *b) * inv_dt)
        .collect();
    let mut tangential = Vec::with_capacity(frames.len());
    let mut normal = Vec::with_capacity(frames.len());
    for (e, fr) in frames.iter().enumerate() {
        let (left, right) = (velocity[e], velocity[e + 1]);
        tangential.push([left.dot(fr.tangent), right.dot(fr.tangent)]);
        normal.push([left.dot(fr.normal), right.dot(fr.normal)]);
    }
    Ok(ElementVelocities { tangential, normal })
}

/// Solve for the field at `t_n` on the accepted curve `curr`. The field argument
/// of the source is lagged to `t_{n−1}`; its explicit time follows `source_time`.
pub fn field_step(
    prev_curve: &CurveState,
    curr_curve: &CurveState,
    prev_field: &FieldState,
    p: &FieldStepParams,
) -> Result<FieldState> {
    if !(p.dt > 0.0) {
        return Err(Error::ConfigInvalid("time step must be positive".into()));
    }
    let grid = curr_curve.grid;
    let n = grid.nodes();
    if prev_field.values.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            actual: prev_field.values.len(),
        });
    }
    let old_len = element_frames(prev_curve, DEFAULT_MIN_LENGTH)?;
    let new_len = element_frames(curr_curve, DEFAULT_MIN_LENGTH)?;
    let vel = element_velocities(prev_curve, curr_curve, p.dt)?;
    let t = curr_curve.time;
    let t_source = match p.source_time {
        ForcingTime::Current => t,
        ForcingTime::Previous => prev_curve.time,
    };
    let w_old = &prev_field.values;
    let wb = p.boundary_value;

    let mut values = vec![wb; n];
    if n > 2 {
        let m = n - 2;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for j in 1..n - 1 {
            // Elements σ_j and σ_{j+1} have indices j − 1 and j.
            let (el, er) = (j - 1, j);
            let (l_left, l_right) = (new_len[el].length, new_len[er].length);
            let old_mass = 0.5 * (old_len[el].length + old_len[er].length);
            let psi_l = vel.tangential[el];
            let psi_r = vel.tangential[er];

            let coef_left = -1.0 / l_left + 0.5 * psi_l[0];
            let coef_right = -1.0 / l_right - 0.5 * psi_r[1];
            let coef_own = 0.5 * (l_left + l_right) / p.dt
                + 1.0 / l_left
                + 1.0 / l_right
                + 0.5 * (psi_l[1] - psi_r[0]);

            let rho = grid.rho(j);
            let source = if p.source.is_zero() {
                0.0
            } else {
                0.5 * (l_left * p.source.eval(rho, t_source, vel.normal[el][1], w_old[j])
                    + l_right * p.source.eval(rho, t_source, vel.normal[er][0], w_old[j]))
            };
            let mut r = old_mass * w_old[j] / p.dt + source;

            let k = j - 1;
            if j == 1 {
                r -= coef_left * wb;
            } else {
                lower[k] = coef_left;
            }
            if j == n - 2 {
                r -= coef_right * wb;
            } else {
                upper[k] = coef_right;
            }
            diag[k] = coef_own;
            rhs[k] = r;
        }
        let interior = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;
        values[1..n - 1].copy_from_slice(&interior);
    }
    Ok(FieldState {
        grid,
        values,
        time: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vec2;
    use crate::mesh::ParameterGrid;

    fn segment(j: usize, shift: f64) -> CurveState {
        let g = ParameterGrid::new(j).unwrap();
        CurveState::interpolate(g, 0.0, |r| Vec2::new(r, shift))
    }

    #[test]
    fn static_curve_has_no_velocity() {
        let c = segment(5, 0.0);
        let v = element_velocities(&c, &c, 0.1).unwrap();
        assert!(v
            .tangential
            .iter()
            .chain(&v.normal)
            .all(|p| p[0] == 0.0 && p[1] == 0.0));
    }

    #[test]
    fn vertical_translation_is_normal_motion() {
        let dt = 0.01;
        let c = 3.0;
        let a = segment(4, 0.0);
        let b = segment(4, c * dt);
        let v = element_velocities(&a, &b, dt).unwrap();
        for (t, nrm) in v.tangential.iter().zip(&v.normal) {
            assert!(t[0].abs() < 1e-13 && t[1].abs() < 1e-13);
            assert!((nrm[0] - c).abs() < 1e-12 && (nrm[1] - c).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let c = segment(8, 0.0);
        let mut w = FieldState::constant(c.grid, 0.0, 0.0);
        let p = FieldStepParams {
            source: FieldSource::Zero,
            boundary_value: 0.0,
            dt: 0.01,
            source_time: ForcingTime::Current,
        };
        for _ in 0..5 {
            w = field_step(&c, &c, &w, &p).unwrap();
            assert!(w.values.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn boundary_values_are_exact() {
        let c = segment(6, 0.0);
        let w = FieldState::interpolate(c.grid, 0.0, |r| r * (1.0 - r));
        let p = FieldStepParams {
            source: FieldSource::Zero,
            boundary_value: 0.25,
            dt: 0.05,
            source_time: ForcingTime::Current,
        };
        let next = field_step(&c, &c, &w, &p).unwrap();
        assert_eq!(next.values[0], 0.25);
        assert_eq!(next.values[6], 0.25);
    }

    #[test]
    fn two_node_grid_is_pure_dirichlet() {
        let c = segment(1, 0.0);
        let w = FieldState::constant(c.grid, 0.0, 2.0);
        let p = FieldStepParams {
            source: FieldSource::Zero,
            boundary_value: -1.0,
            dt: 0.05,
            source_time: ForcingTime::Current,
        };
        assert_eq!(field_step(&c, &c, &w, &p).unwrap().values, vec![-1.0, -1.0]);
    }
}
