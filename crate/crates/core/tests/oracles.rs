mod common;

use common::*;
use curveflow_core::*;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mat(rng: &mut ChaCha8Rng) -> Mat2 {
    Mat2::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

fn random_system(n: usize, seed: u64) -> BlockTridiagonalSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sys = BlockTridiagonalSystem::zeros(n);
    for j in 0..n {
        sys.lower[j] = if j > 0 {
            random_mat(&mut rng)
        } else {
            Mat2::ZERO
        };
        sys.upper[j] = if j + 1 < n {
            random_mat(&mut rng)
        } else {
            Mat2::ZERO
        };
        sys.diag[j] = random_mat(&mut rng) + Mat2::IDENTITY * 5.0;
        sys.rhs[j] = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    sys
}

fn max_abs_diff(a: &[Vec2], b: &[Vec2]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (*p - *q).max_abs())
        .fold(0.0, f64::max)
}

#[test]
fn block_thomas_matches_dense_lu() {
    for (n, seed) in [(1, 1), (2, 2), (9, 3), (9, 4), (33, 5)] {
        let sys = random_system(n, seed);
        let fast = sys.solve().unwrap();
        let (a, b) = dense(&sys);
        let reference = unflatten(&dense_solve(a, &b));
        assert!(max_abs_diff(&fast, &reference) < 1e-12, "n = {n}");
    }
}

#[test]
fn block_thomas_matches_dense_lu_on_newton_systems() {
    let prev = semicircle(8);
    let w = FieldState::constant(prev.grid, 0.0, 0.0);
    let cand = perturbed(&prev, 0.02, 7);
    let p = CurveStepParams::new(0.5, 1.0 / 64.0);
    let sys = assemble_newton_system(&prev, &w, &cand, &Domain::UpperHalfPlane, &p).unwrap();
    let (a, b) = dense(&sys);
    let reference = unflatten(&dense_solve(a, &b));
    assert!(max_abs_diff(&sys.solve().unwrap(), &reference) < 1e-12);
}

#[test]
fn scalar_thomas_matches_dense_lu() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 12;
    let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let diag: Vec<f64> = (0..n).map(|_| 3.0 + rng.gen_range(0.0..1.0)).collect();
    let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let x = solve_tridiagonal(&lower, &diag, &upper, &rhs).unwrap();
    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        a[(j, j)] = diag[j];
        if j > 0 {
            a[(j, j - 1)] = lower[j];
        }
        if j + 1 < n {
            a[(j, j + 1)] = upper[j];
        }
    }
    let reference = dense_solve(a, &nalgebra::DVector::from_vec(rhs));
    for (u, v) in x.iter().zip(reference.iter()) {
        assert!((u - v).abs() < 1e-13);
    }
}

struct StepCase {
    name: &'static str,
    prev: CurveState,
    field: FieldState,
    geom: Domain,
    params: CurveStepParams,
}

fn step_cases(elements: usize) -> Vec<StepCase> {
    let mut cases = Vec::new();
    for alpha in [0.5, 1.0] {
        let prev = semicircle(elements);
        let field = FieldState::constant(prev.grid, 0.0, 0.0);
        cases.push(StepCase {
            name: "semicircle",
            prev,
            field,
            geom: Domain::UpperHalfPlane,
            params: CurveStepParams::new(alpha, 0.01),
        });

        let mut prev = tilted_diameter(elements);
        prev.time = 0.1;
        let field = FieldState::interpolate(prev.grid, 0.1, |r| {
            Example::Coupled.w(r, 0.1).unwrap() + 0.01 * r
        });
        let mut params = CurveStepParams::new(alpha, 0.02);
        params.forcing = CurveForcing::CoupledParabola;
        cases.push(StepCase {
            name: "forced diameter",
            prev,
            field,
            geom: Domain::UnitDisc,
            params,
        });
    }
    cases
}

#[test]
fn residual_matches_weak_form() {
    for case in step_cases(7) {
        for seed in 0..3 {
            let cand = perturbed(&case.prev, 0.05, seed);
            let fast = assemble_residual(&case.prev, &case.field, &cand, &case.geom, &case.params)
                .unwrap();
            let reference =
                weak_form_residual(&case.prev, &case.field, &cand, &case.geom, &case.params);
            assert!(
                max_abs_diff(&fast, &reference) < 1e-12,
                "{} α = {}",
                case.name,
                case.params.alpha
            );
        }
    }
}

#[test]
fn newton_jacobian_matches_finite_differences() {
    for case in step_cases(6) {
        for seed in 10..13 {
            let cand = perturbed(&case.prev, 0.05, seed);
            let sys =
                assemble_newton_system(&case.prev, &case.field, &cand, &case.geom, &case.params)
                    .unwrap();
            let (analytic, rhs) = dense(&sys);
            let residual = |c: &CurveState| {
                assemble_residual(&case.prev, &case.field, c, &case.geom, &case.params).unwrap()
            };
            let numeric = fd_jacobian(&residual, &cand, 1e-7);
            let scale = analytic.amax();
            let rel = (&analytic - &numeric).amax() / scale;
            assert!(rel < 1e-6, "{}: relative Jacobian error {rel:e}", case.name);
            let r = flatten(&residual(&cand));
            assert!((rhs + r).amax() < 1e-14);
        }
    }
}

#[test]
fn newton_step_matches_dense_weak_form_newton() {
    for elements in [2, 4, 8] {
        for case in step_cases(elements) {
            let (fast, report) =
                newton_step(&case.prev, &case.field, &case.geom, &case.params).unwrap();
            assert!(report.converged);
            let residual = |c: &CurveState| {
                weak_form_residual(&case.prev, &case.field, c, &case.geom, &case.params)
            };
            let reference = dense_newton(residual, &case.prev, 40);
            let diff = max_abs_diff(&fast.nodes, &reference.nodes);
            assert!(diff < 1e-10, "{} J = {elements}: {diff:e}", case.name);
        }
    }
}

#[test]
fn linear_scheme_matches_dense_frozen_solve() {
    for elements in [3, 8] {
        for case in step_cases(elements) {
            let fast =
                linear_scheme_step(&case.prev, &case.field, &case.geom, &case.params).unwrap();
            let residual = |c: &CurveState| {
                frozen_weak_form_residual(&case.prev, &case.field, c, &case.geom, &case.params)
            };
            let reference = dense_newton(residual, &case.prev, 3);
            let diff = max_abs_diff(&fast.nodes, &reference.nodes);
            assert!(diff < 1e-10, "{} J = {elements}: {diff:e}", case.name);
        }
    }
}

fn moving_pair(elements: usize, seed: u64) -> (CurveState, CurveState) {
    let prev = perturbed(&semicircle(elements), 0.02, seed);
    let mut curr = perturbed(&prev, 0.01, seed + 100);
    curr.time = prev.time + 0.01;
    (prev, curr)
}

#[test]
fn field_step_matches_dense_weak_form() {
    let sources = [
        FieldSource::Zero,
        FieldSource::CoupledParabola,
        FieldSource::Custom(|rho, t, v, w| rho * t - 0.3 * v + w * w),
    ];
    for elements in [2, 5, 8] {
        for (k, source) in sources.into_iter().enumerate() {
            let (prev, curr) = moving_pair(elements, k as u64);
            let w = FieldState::interpolate(prev.grid, prev.time, |r| (3.0 * r).sin() - 0.2);
            for (source_time, at) in [
                (ForcingTime::Current, curr.time),
                (ForcingTime::Previous, prev.time),
            ] {
                let p = FieldStepParams {
                    source,
                    boundary_value: -0.2,
                    dt: 0.01,
                    source_time,
                };
                let fast = field_step(&prev, &curr, &w, &p).unwrap();
                let reference = dense_field_step(&prev, &curr, &w, source, at, -0.2, 0.01);
                let diff = fast
                    .values
                    .iter()
                    .zip(&reference)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(diff < 1e-12, "J = {elements}, {source:?}: {diff:e}");
            }
        }
    }
}

fn random_values(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

#[test]
fn norms_match_gauss_quadrature() {
    for elements in [1, 3, 10, 40] {
        let grid = ParameterGrid::new(elements).unwrap();
        let n = grid.nodes();
        let a = random_values(n, elements as u64);
        let b = random_values(n, 1000 + elements as u64);
        let c = random_values(elements, 2000 + elements as u64);
        let d = random_values(elements, 3000 + elements as u64);
        let lin = |v: &[f64], e: usize, s: f64| v[e] * (1.0 - s) + v[e + 1] * s;

        let exact = gauss_integrate(elements, |e, s| lin(&a, e, s).powi(2));
        assert!(rel_close(
            l2_norm_sq_pwlinear(&a, grid).unwrap(),
            exact,
            1e-13
        ));

        let exact = gauss_integrate(elements, |e, s| (lin(&a, e, s) - c[e]).powi(2));
        assert!(rel_close(
            l2_norm_sq_mixed(&a, &c, grid).unwrap(),
            exact,
            1e-13
        ));

        let exact = gauss_integrate(elements, |e, _| c[e] * c[e]);
        assert!(rel_close(
            l2_norm_sq_elementwise(&c, grid).unwrap(),
            exact,
            1e-13
        ));

        let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let exact = gauss_integrate(elements, |e, s| lin(&ab, e, s));
        assert!(rel_close(
            lumped_inner_product(&a, &b, grid).unwrap(),
            exact,
            1e-13
        ));

        let va: Vec<Vec2> = a.iter().zip(&b).map(|(x, y)| Vec2::new(*x, *y)).collect();
        let vc: Vec<Vec2> = c.iter().zip(&d).map(|(x, y)| Vec2::new(*x, *y)).collect();
        let exact = gauss_integrate(elements, |e, s| {
            lin(&a, e, s).powi(2) + lin(&b, e, s).powi(2)
        });
        assert!(rel_close(
            l2_norm_sq_pwlinear_vec(&va, grid).unwrap(),
            exact,
            1e-13
        ));
        let exact = gauss_integrate(elements, |e, s| {
            (lin(&a, e, s) - c[e]).powi(2) + (lin(&b, e, s) - d[e]).powi(2)
        });
        assert!(rel_close(
            l2_norm_sq_mixed_vec(&va, &vc, grid).unwrap(),
            exact,
            1e-13
        ));
        let exact = gauss_integrate(elements, |e, _| c[e] * c[e] + d[e] * d[e]);
        assert!(rel_close(
            l2_norm_sq_elementwise_vec(&vc, grid).unwrap(),
            exact,
            1e-13
        ));
    }
}

#[test]
fn exact_derivatives_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let step = 1e-5;
    for example in Example::ALL {
        let t_max = example.final_time() * 0.9;
        for _ in 0..100 {
            let rho = rng.gen_range(step..1.0 - step);
            let t = rng.gen_range(0.0..t_max);
            let fd = (example.x(rho + step, t) - example.x(rho - step, t)) * (0.5 / step);
            assert!((fd - example.x_rho(rho, t)).max_abs() < 1e-8, "{example:?}");
            if let (Some(wp), Some(wm), Some(wr)) = (
                example.w(rho + step, t),
                example.w(rho - step, t),
                example.w_rho(rho, t),
            ) {
                assert!(((wp - wm) * (0.5 / step) - wr).abs() < 1e-8);
            }
            for end in [0.0, 1.0] {
                assert!(
                    example.domain().value(example.x(end, t)).abs() < 1e-12,
                    "{example:?} endpoint"
                );
            }
        }
    }
}
