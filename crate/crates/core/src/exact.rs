//! Closed-form solutions used to measure discretization errors.

use core::f64::consts::PI;
use core::str::FromStr;

use crate::boundary::Domain;
use crate::error::{Error, Result};
use crate::forcing::{CurveForcing, FieldSource};
use crate::linalg::Vec2;

/// The three verification problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Example {
    /// Semicircle shrinking in the upper half-plane, `T = 0.4`.
    Semicircle,
    /// Diameter of the unit disc rotated by a normal forcing, `T = 0.5`.
    Diameter,
    /// Rotating diameter carrying a shrinking parabolic field, `T = 0.5`.
    Coupled,
}

impl Example {
    pub const ALL: [Example; 3] = [Example::Semicircle, Example::Diameter, Example::Coupled];

    pub fn name(&self) -> &'static str {
        match self {
            Example::Semicircle => "semicircle",
            Example::Diameter => "diameter",
            Example::Coupled => "coupled",
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Example::Semicircle => Domain::UpperHalfPlane,
            Example::Diameter | Example::Coupled => Domain::UnitDisc,
        }
    }

    pub fn final_time(&self) -> f64 {
        match self {
            Example::Semicircle => 0.4,
            Example::Diameter | Example::Coupled => 0.5,
        }
    }

    pub fn forcing(&self) -> CurveForcing {
        match self {
            Example::Semicircle => CurveForcing::Zero,
            Example::Diameter => CurveForcing::RotatingDiameter,
            Example::Coupled => CurveForcing::CoupledParabola,
        }
    }

    pub fn source(&self) -> FieldSource {
        match self {
            Example::Coupled => FieldSource::CoupledParabola,
            _ => FieldSource::Zero,
        }
    }

    pub fn has_field(&self) -> bool {
        matches!(self, Example::Coupled)
    }

    pub fn x(&self, rho: f64, t: f64) -> Vec2 {
        match self {
            Example::Semicircle => {
                let r = libm::sqrt(1.0 - 2.0 * t);
                Vec2::new(r * libm::cos(PI * rho), r * libm::sin(PI * rho))
            }
            Example::Diameter | Example::Coupled => {
                let a = 1.0 - 2.0 * t;
                let s = 2.0 * (rho - 0.5) / libm::sqrt(a * a + 1.0);
                Vec2::new(s * a, s)
            }
        }
    }

    pub fn x_rho(&self, rho: f64, t: f64) -> Vec2 {
        match self {
            Example::Semicircle => {
                let r = PI * libm::sqrt(1.0 - 2.0 * t);
                Vec2::new(-r * libm::sin(PI * rho), r * libm::cos(PI * rho))
            }
            Example::Diameter | Example::Coupled => {
                let a = 1.0 - 2.0 * t;
                let s = 2.0 / libm::sqrt(a * a + 1.0);
                Vec2::new(s * a, s)
            }
        }
    }

    /// The field, where the example has one.
    pub fn w(&self, rho: f64, t: f64) -> Option<f64> {
        match self {
            Example::Coupled => Some((1.0 - t) * rho * (rho - 1.0)),
            _ => None,
        }
    }

    pub fn w_rho(&self, rho: f64, t: f64) -> Option<f64> {
        match self {
            Example::Coupled => Some((1.0 - t) * (2.0 * rho - 1.0)),
            _ => None,
        }
    }
}

impl FromStr for Example {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semicircle" | "example1" => Ok(Example::Semicircle),
            "diameter" | "example2" => Ok(Example::Diameter),
            "coupled" | "example3" => Ok(Example::Coupled),
            other => Err(Error::ConfigInvalid(alloc::format!(
                "unknown example '{other}' (expected semicircle, diameter or coupled)"
            ))),
        }
    }
}
