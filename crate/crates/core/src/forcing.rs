//! Named forcing terms: `f(ρ, t, w)` in the curve velocity and `g(ρ, t, v, w)` in the field equation.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Normal forcing of the curve.
#[derive(Clone, Copy)]
pub enum CurveForcing {
    Zero,
    /// `4(ρ − ½)/((1 − 2t)² + 1)`: turns the diameter of the unit disc.
    RotatingDiameter,
    /// `4(ρ² − w/(1 − t) − ½)/((1 − 2t)² + 1)`: the coupled diameter/parabola solution.
    CoupledParabola,
    Custom(fn(f64, f64, f64) -> f64),
}

impl CurveForcing {
    pub fn eval(&self, rho: f64, t: f64, w: f64) -> f64 {
        match self {
            CurveForcing::Zero => 0.0,
            CurveForcing::RotatingDiameter => 4.0 * (rho - 0.5) / rotation_denominator(t),
            CurveForcing::CoupledParabola => {
                4.0 * (rho * rho - w / (1.0 - t) - 0.5) / rotation_denominator(t)
            }
            CurveForcing::Custom(f) => f(rho, t, w),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CurveForcing::Zero)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveForcing::Zero => "none",
            CurveForcing::RotatingDiameter => "example2",
            CurveForcing::CoupledParabola => "example3-f",
            CurveForcing::Custom(_) => "custom",
        }
    }
}

impl PartialEq for CurveForcing {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CurveForcing::Custom(a), CurveForcing::Custom(b)) => core::ptr::fn_addr_eq(*a, *b),
            (a, b) => core::mem::discriminant(a) == core::mem::discriminant(b),
        }
    }
}

impl fmt::Debug for CurveForcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveForcing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(CurveForcing::Zero),
            "example2" => Ok(CurveForcing::RotatingDiameter),
            "example3-f" => Ok(CurveForcing::CoupledParabola),
            other => Err(Error::ConfigInvalid(alloc::format!(
                "unknown curve forcing '{other}' (expected none, example2 or example3-f)"
            ))),
        }
    }
}

/// Source term of the field equation.
#[derive(Clone, Copy)]
pub enum FieldSource {
    Zero,
    /// `(t − 1)/2 − w/(1 − t)`.
    CoupledParabola,
    Custom(fn(f64, f64, f64, f64) -> f64),
}

impl FieldSource {
    pub fn eval(&self, rho: f64, t: f64, v: f64, w: f64) -> f64 {
        match self {
            FieldSource::Zero => 0.0,
            FieldSource::CoupledParabola => 0.5 * (t - 1.0) - w / (1.0 - t),
            FieldSource::Custom(g) => g(rho, t, v, w),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FieldSource::Zero)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldSource::Zero => "none",
            FieldSource::CoupledParabola => "example3-g",
            FieldSource::Custom(_) => "custom",
        }
    }
}

impl PartialEq for FieldSource {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldSource::Custom(a), FieldSource::Custom(b)) => core::ptr::fn_addr_eq(*a, *b),
            (a, b) => core::mem::discriminant(a) == core::mem::discriminant(b),
        }
    }
}

impl fmt::Debug for FieldSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(FieldSource::Zero),
            "example3-g" => Ok(FieldSource::CoupledParabola),
            other => Err(Error::ConfigInvalid(alloc::format!(
                "unknown field source '{other}' (expected none or example3-g)"
            ))),
        }
    }
}

fn rotation_denominator(t: f64) -> f64 {
    let a = 1.0 - 2.0 * t;
    a * a + 1.0
}
