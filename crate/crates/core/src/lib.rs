//! Parametric finite element scheme for a curve moving by forced curve
//! shortening flow inside a fixed domain, meeting the boundary at a right
//! angle, coupled to a reaction-diffusion equation posed on the curve.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the
//! command line and reference data live in the `curveflow` crate.

#![no_std]

extern crate alloc;

pub mod block;
pub mod boundary;
pub mod error;
pub mod evolver;
pub mod exact;
pub mod forcing;
pub mod linalg;
pub mod mesh;
pub mod sim;
pub mod surface;
pub mod verify;

pub use block::{solve_block_tridiagonal, solve_tridiagonal, BlockTridiagonalSystem};
pub use boundary::{
    eval_all, unit_gradient_deviation, BoundaryEval, BoundaryGeometry, Domain, Hessian,
};
pub use error::{Error, Result};
pub use evolver::{
    assemble_newton_system, assemble_residual, curve_step, linear_scheme_step, newton_step,
    CurveScheme, CurveStepParams, ForcingTime, NewtonReport,
};
pub use exact::Example;
pub use forcing::{CurveForcing, FieldSource};
pub use linalg::{Mat2, Vec2};
pub use mesh::{
    element_frames, l2_norm_sq_elementwise, l2_norm_sq_elementwise_vec, l2_norm_sq_mixed,
    l2_norm_sq_mixed_vec, l2_norm_sq_pwlinear, l2_norm_sq_pwlinear_vec, lumped_inner_product,
    CurveState, ElementFrame, FieldState, ParameterGrid,
};
pub use sim::{
    advance, initialize, run, run_with, InitialCurve, InitialField, RunFailure, SimConfig,
    SimState, TimeRule, Trajectory,
};
pub use surface::{element_velocities, field_step, ElementVelocities, FieldStepParams};
pub use verify::{
    check_levels, convergence_study, eoc, error_accumulate, run_config, run_level, study_level,
    DerivativeMeasure, EocRow, EocTable, ErrorAccumulator, ErrorConvention, ErrorReport,
    LevelOutcome, DEFAULT_LEVELS,
};
