//! Polygonal curves over a uniform partition of the unit parameter interval,
//! element geometry, and the discrete inner products and norms used on them.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Vec2;

/// Element lengths at or below this are treated as collapsed.
pub const DEFAULT_MIN_LENGTH: f64 = 1e-14;

/// Uniform partition `0 = ρ_0 < ρ_1 < … < ρ_J = 1` with `J` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParameterGrid {
    elements: usize,
}

impl ParameterGrid {
    pub fn new(elements: usize) -> Result<Self> {
        if elements == 0 {
            return Err(Error::ConfigInvalid(
                "grid needs at least one element".into(),
            ));
        }
        Ok(ParameterGrid { elements })
    }

    /// Number of elements `J`.
    #[inline]
    pub fn elements(&self) -> usize {
        self.elements
    }

    /// Number of nodes `J + 1`.
    #[inline]
    pub fn nodes(&self) -> usize {
        self.elements + 1
    }

    /// Element width `h = 1/J`.
    #[inline]
    pub fn h(&self) -> f64 {
        1.0 / self.elements as f64
    }

    /// Parameter value of node `j`.
    #[inline]
    pub fn rho(&self, j: usize) -> f64 {
        if j == self.elements {
            1.0
        } else {
            j as f64 / self.elements as f64
        }
    }

    pub fn rhos(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes()).map(move |j| self.rho(j))
    }

    fn check_nodal(&self, len: usize) -> Result<()> {
        if len != self.nodes() {
            return Err(Error::ShapeMismatch {
                expected: self.nodes(),
                actual: len,
            });
        }
        Ok(())
    }

    fn check_elemental(&self, len: usize) -> Result<()> {
        if len != self.elements {
            return Err(Error::ShapeMismatch {
                expected: self.elements,
                actual: len,
            });
        }
        Ok(())
    }
}

/// Nodal positions of a piecewise-linear curve at one time level.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveState {
    pub grid: ParameterGrid,
    pub nodes: Vec<Vec2>,
    pub time: f64,
}

impl CurveState {
    pub fn new(grid: ParameterGrid, nodes: Vec<Vec2>, time: f64) -> Result<Self> {
        grid.check_nodal(nodes.len())?;
        Ok(CurveState { grid, nodes, time })
    }

    /// Nodal interpolant of a parametrization `x(ρ)`.
    pub fn interpolate(grid: ParameterGrid, time: f64, x: impl Fn(f64) -> Vec2) -> Self {
        let nodes = grid.rhos().map(x).collect();
        CurveState { grid, nodes, time }
    }

    #[inline]
    pub fn first(&self) -> Vec2 {
        self.nodes[0]
    }

    #[inline]
    pub fn last(&self) -> Vec2 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Constant parametric derivative `(X_j − X_{j−1})/h` on each element.
    pub fn derivative(&self) -> Vec<Vec2> {
        let inv_h = self.grid.elements() as f64;
        self.nodes
            .windows(2)
            .map(|w| (w[1] - w[0]) * inv_h)
            .collect()
    }

    pub fn element_lengths(&self) -> Vec<f64> {
        self.nodes
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .collect()
    }

    pub fn frames(&self) -> Result<Vec<ElementFrame>> {
        element_frames(self, DEFAULT_MIN_LENGTH)
    }
}

/// Geometry of one element `σ_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementFrame {
    pub length: f64,
    /// Squared chord `|X_j − X_{j−1}|²`.
    pub chord_sq: f64,
    pub tangent: Vec2,
    /// `tangent.perp()`.
    pub normal: Vec2,
}

/// Lengths, squared chords, unit tangents and unit normals of every element.
pub fn element_frames(curve: &CurveState, min_length: f64) -> Result<Vec<ElementFrame>> {
    curve
        .nodes
        .windows(2)
        .enumerate()
        .map(|(e, w)| {
            let chord = w[1] - w[0];
            let chord_sq = chord.norm_sq();
            let length = libm::sqrt(chord_sq);
            if !length.is_finite() {
                return Err(Error::NonFinite("element length"));
            }
            if length <= min_length {
                return Err(Error::DegenerateElement {
                    element: e + 1,
                    length,
                });
            }
            let tangent = chord * (1.0 / length);
            Ok(ElementFrame {
                length,
                chord_sq,
                tangent,
                normal: tangent.perp(),
            })
        })
        .collect()
}

/// Nodal values of the scalar field on the curve at one time level.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub grid: ParameterGrid,
    pub values: Vec<f64>,
    pub time: f64,
}

impl FieldState {
    pub fn new(grid: ParameterGrid, values: Vec<f64>, time: f64) -> Result<Self> {
        grid.check_nodal(values.len())?;
        Ok(FieldState { grid, values, time })
    }

    pub fn interpolate(grid: ParameterGrid, time: f64, w: impl Fn(f64) -> f64) -> Self {
        FieldState {
            grid,
            values: grid.rhos().map(w).collect(),
            time,
        }
    }

    pub fn constant(grid: ParameterGrid, time: f64, value: f64) -> Self {
        Self::interpolate(grid, time, |_| value)
    }

    /// Constant parametric derivative on each element.
    pub fn derivative(&self) -> Vec<f64> {
        let inv_h = self.grid.elements() as f64;
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]) * inv_h)
            .collect()
    }
}

/// Mass-lumped product `(a, b)^h`: the integral of the elementwise interpolant of `a·b`.
pub fn lumped_inner_product(a: &[f64], b: &[f64], grid: ParameterGrid) -> Result<f64> {
    grid.check_nodal(a.len())?;
    grid.check_nodal(b.len())?;
    let half_h = 0.5 * grid.h();
    Ok((1..grid.nodes())
        .map(|j| half_h * (a[j - 1] * b[j - 1] + a[j] * b[j]))
        .sum())
}

/// Exact squared `L²(0,1)` norm of a piecewise-linear function given by nodal values.
pub fn l2_norm_sq_pwlinear(e: &[f64], grid: ParameterGrid) -> Result<f64> {
    grid.check_nodal(e.len())?;
    let third_h = grid.h() / 3.0;
    Ok(e.windows(2)
        .map(|w| third_h * (w[0] * w[0] + w[0] * w[1] + w[1] * w[1]))
        .sum())
}

/// Vector-valued [`l2_norm_sq_pwlinear`], summed over components.
pub fn l2_norm_sq_pwlinear_vec(e: &[Vec2], grid: ParameterGrid) -> Result<f64> {
    grid.check_nodal(e.len())?;
    let third_h = grid.h() / 3.0;
    Ok(e.windows(2)
        .map(|w| third_h * (w[0].norm_sq() + w[0].dot(w[1]) + w[1].norm_sq()))
        .sum())
}

/// Exact squared `L²` norm of (piecewise-linear nodal function) − (elementwise constant).
pub fn l2_norm_sq_mixed(linear: &[f64], constant: &[f64], grid: ParameterGrid) -> Result<f64> {
    grid.check_nodal(linear.len())?;
    grid.check_elemental(constant.len())?;
    let third_h = grid.h() / 3.0;
    Ok(constant
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let a = linear[k] - c;
            let b = linear[k + 1] - c;
            third_h * (a * a + a * b + b * b)
        })
        .sum())
}

/// Vector-valued [`l2_norm_sq_mixed`], summed over components.
pub fn l2_norm_sq_mixed_vec(
    linear: &[Vec2],
    constant: &[Vec2],
    grid: ParameterGrid,
) -> Result<f64> {
    grid.check_nodal(linear.len())?;
    grid.check_elemental(constant.len())?;
    let third_h = grid.h() / 3.0;
    Ok(constant
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let a = linear[k] - c;
            let b = linear[k + 1] - c;
            third_h * (a.norm_sq() + a.dot(b) + b.norm_sq())
        })
        .sum())
}

/// Exact squared `L²` norm of an elementwise constant vector function.
pub fn l2_norm_sq_elementwise_vec(values: &[Vec2], grid: ParameterGrid) -> Result<f64> {
    grid.check_elemental(values.len())?;
    Ok(grid.h() * values.iter().map(|v| v.norm_sq()).sum::<f64>())
}

/// Exact squared `L²` norm of an elementwise constant scalar function.
pub fn l2_norm_sq_elementwise(values: &[f64], grid: ParameterGrid) -> Result<f64> {
    grid.check_elemental(values.len())?;
    Ok(grid.h() * values.iter().map(|v| v * v).sum::<f64>())
}
