//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use curveflow_core::*;
use nalgebra::{DMatrix, DVector};

pub fn flatten(v: &[Vec2]) -> DVector<f64> {
    DVector::from_iterator(2 * v.len(), v.iter().flat_map(|p| [p.x, p.y]))
}

pub fn unflatten(v: &DVector<f64>) -> Vec<Vec2> {
    v.as_slice()
        .chunks(2)
        .map(|c| Vec2::new(c[0], c[1]))
        .collect()
}

/// Dense copy of a block tridiagonal system.
pub fn dense(sys: &BlockTridiagonalSystem) -> (DMatrix<f64>, DVector<f64>) {
    let n = sys.len();
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    let mut put = |row: usize, col: usize, m: Mat2| {
        a[(2 * row, 2 * col)] = m.a;
        a[(2 * row, 2 * col + 1)] = m.b;
        a[(2 * row + 1, 2 * col)] = m.c;
        a[(2 * row + 1, 2 * col + 1)] = m.d;
    };
    for j in 0..n {
        put(j, j, sys.diag[j]);
        if j > 0 {
            put(j, j - 1, sys.lower[j]);
        }
        if j + 1 < n {
            put(j, j + 1, sys.upper[j]);
        }
    }
    (a, flatten(&sys.rhs))
}

pub fn dense_solve(a: DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    a.lu().solve(b).expect("dense oracle matrix is singular")
}

/// Lumped weak form of the curve step tested with each hat function, assembled
/// element by element and scaled by `h`.
pub fn weak_form_balance(
    prev: &CurveState,
    prev_field: &FieldState,
    cand: &CurveState,
    alpha: f64,
    dt: f64,
    forcing: CurveForcing,
    forcing_time: f64,
) -> Vec<Vec2> {
    let grid = prev.grid;
    let h = grid.h();
    let n = grid.nodes();
    let mut rows = vec![Vec2::ZERO; n];
    for e in 0..grid.elements() {
        let chord = prev.nodes[e + 1] - prev.nodes[e];
        let q2 = chord.norm_sq() / (h * h);
        let normal = chord.perp() * (1.0 / chord.norm());
        let mass = Mat2::IDENTITY * alpha + normal.outer(normal) * (1.0 - alpha);
        let slope = (cand.nodes[e + 1] - cand.nodes[e]) * (1.0 / h);
        for (local, node) in [(0usize, e), (1, e + 1)] {
            let dchi = if local == 0 { -1.0 / h } else { 1.0 / h };
            let velocity = (cand.nodes[node] - prev.nodes[node]) * (1.0 / dt);
            let f = forcing.eval(grid.rho(node), forcing_time, prev_field.values[node]);
            // Trapezoidal rule on the element: only the test node contributes.
            let lumped = (mass * velocity - normal * f) * (0.5 * h * q2);
            rows[node] += lumped + slope * (h * dchi);
        }
    }
    for r in rows.iter_mut() {
        *r = *r * h;
    }
    rows
}

/// Weak-form rows with the endpoint rows replaced by the tangential component
/// and the constraint at the candidate.
pub fn weak_form_residual(
    prev: &CurveState,
    prev_field: &FieldState,
    cand: &CurveState,
    geom: &Domain,
    p: &CurveStepParams,
) -> Vec<Vec2> {
    let mut rows = weak_form_balance(prev, prev_field, cand, p.alpha, p.dt, p.forcing, prev.time);
    let last = rows.len() - 1;
    for j in [0, last] {
        let x = cand.nodes[j];
        rows[j] = Vec2::new(rows[j].dot(geom.gradient_perp(x)), geom.value(x));
    }
    rows
}

/// Weak-form rows with endpoint rows frozen at the previous curve: tangential
/// component along `∇⊥F(X^{n−1})` and displacement orthogonal to `∇F(X^{n−1})`.
pub fn frozen_weak_form_residual(
    prev: &CurveState,
    prev_field: &FieldState,
    cand: &CurveState,
    geom: &Domain,
    p: &CurveStepParams,
) -> Vec<Vec2> {
    let mut rows = weak_form_balance(prev, prev_field, cand, p.alpha, p.dt, p.forcing, prev.time);
    let last = rows.len() - 1;
    for j in [0, last] {
        let x = prev.nodes[j];
        let moved = cand.nodes[j] - x;
        rows[j] = Vec2::new(
            rows[j].dot(geom.gradient_perp(x)),
            moved.dot(geom.gradient(x)),
        );
    }
    rows
}

/// Central finite-difference Jacobian of a nodal residual.
pub fn fd_jacobian(
    residual: &impl Fn(&CurveState) -> Vec<Vec2>,
    at: &CurveState,
    step: f64,
) -> DMatrix<f64> {
    let m = 2 * at.nodes.len();
    let mut jac = DMatrix::zeros(m, m);
    for col in 0..m {
        let mut plus = at.clone();
        let mut minus = at.clone();
        let (node, comp) = (col / 2, col % 2);
        if comp == 0 {
            plus.nodes[node].x += step;
            minus.nodes[node].x -= step;
        } else {
            plus.nodes[node].y += step;
            minus.nodes[node].y -= step;
        }
        let diff = flatten(&residual(&plus)) - flatten(&residual(&minus));
        jac.set_column(col, &(diff / (2.0 * step)));
    }
    jac
}

/// Dense Newton iteration with a finite-difference Jacobian, from `start` until the increment vanishes.
pub fn dense_newton(
    residual: impl Fn(&CurveState) -> Vec<Vec2>,
    start: &CurveState,
    max_iter: usize,
) -> CurveState {
    let mut cand = start.clone();
    for _ in 0..max_iter {
        let r = flatten(&residual(&cand));
        let delta = dense_solve(fd_jacobian(&residual, &cand, 1e-7), &(-r));
        for (x, d) in cand.nodes.iter_mut().zip(unflatten(&delta)) {
            *x += d;
        }
        if delta.amax() < 1e-15 {
            break;
        }
    }
    cand
}

/// Field step assembled element by element into a dense matrix.
pub fn dense_field_step(
    prev_curve: &CurveState,
    curr_curve: &CurveState,
    prev_field: &FieldState,
    source: FieldSource,
    source_time: f64,
    boundary_value: f64,
    dt: f64,
) -> Vec<f64> {
    let n = curr_curve.nodes.len();
    let mut a = DMatrix::zeros(n, n);
    let mut b = DVector::zeros(n);
    for e in 0..n - 1 {
        let nodes = [e, e + 1];
        let chord = curr_curve.nodes[e + 1] - curr_curve.nodes[e];
        let len = chord.norm();
        let tangent = chord * (1.0 / len);
        let normal = tangent.perp();
        let old_len = (prev_curve.nodes[e + 1] - prev_curve.nodes[e]).norm();
        let vel: Vec<Vec2> = nodes
            .iter()
            .map(|&k| (curr_curve.nodes[k] - prev_curve.nodes[k]) * (1.0 / dt))
            .collect();
        let dchi = [-1.0 / len, 1.0 / len];
        for (li, &i) in nodes.iter().enumerate() {
            a[(i, i)] += 0.5 * len / dt;
            b[i] += 0.5 * old_len * prev_field.values[i] / dt;
            let v = vel[li].dot(normal);
            let rho = curr_curve.grid.rho(i);
            b[i] += 0.5 * len * source.eval(rho, source_time, v, prev_field.values[i]);
            for (lk, &k) in nodes.iter().enumerate() {
                a[(i, k)] += len * dchi[lk] * dchi[li];
                // Trapezoidal rule for ∫ Ψ W ∂_s χ_i over the element.
                a[(i, k)] += 0.5 * len * vel[lk].dot(tangent) * dchi[li];
            }
        }
    }
    for j in [0, n - 1] {
        a.row_mut(j).fill(0.0);
        a[(j, j)] = 1.0;
        b[j] = boundary_value;
    }
    dense_solve(a, &b).as_slice().to_vec()
}

/// Composite five-point Gauss–Legendre rule on `[0, 1]`; `f(e, s)` gets the cell and the local coordinate.
pub fn gauss_integrate(elements: usize, f: impl Fn(usize, f64) -> f64) -> f64 {
    let nodes = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let h = 1.0 / elements as f64;
    let mut sum = 0.0;
    for e in 0..elements {
        for &(x, w) in &nodes {
            let local = 0.5 * (x + 1.0);
            sum += 0.5 * h * w * f(e, local);
        }
    }
    sum
}

pub fn perturbed(curve: &CurveState, amplitude: f64, seed: u64) -> CurveState {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = curve.clone();
    for x in out.nodes.iter_mut() {
        *x += Vec2::new(
            rng.gen_range(-amplitude..amplitude),
            rng.gen_range(-amplitude..amplitude),
        );
    }
    out
}

pub fn semicircle(elements: usize) -> CurveState {
    let grid = ParameterGrid::new(elements).unwrap();
    CurveState::interpolate(grid, 0.0, |r| Example::Semicircle.x(r, 0.0))
}

pub fn tilted_diameter(elements: usize) -> CurveState {
    let grid = ParameterGrid::new(elements).unwrap();
    CurveState::interpolate(grid, 0.0, |r| Example::Diameter.x(r, 0.0))
}
