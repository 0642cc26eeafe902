//! The fixed domain boundary, given as the zero level set of a smooth function `F`.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};

/// Symmetric Hessian `(∂²xx, ∂²xy, ∂²yy)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Hessian {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Hessian {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.xx, self.xy, self.xy, self.yy)
    }
}

/// Level-set description of `∂Ω = {F = 0}` with analytic derivatives.
///
/// The contact conditions assume `|∇F| = 1` on the zero level set.
pub trait BoundaryGeometry {
    fn value(&self, p: Vec2) -> f64;
    fn gradient(&self, p: Vec2) -> Vec2;
    fn hessian(&self, p: Vec2) -> Hessian;

    /// A point of the zero level set for `s ∈ [0, 1]`, used to validate the geometry.
    fn boundary_point(&self, s: f64) -> Vec2;

    /// `∇⊥F = (−∂y F, ∂x F)`.
    fn gradient_perp(&self, p: Vec2) -> Vec2 {
        self.gradient(p).perp()
    }

    /// Jacobian of `∇⊥F`: `[[−∂²xy, −∂²yy], [∂²xx, ∂²xy]]`.
    fn d2perp(&self, p: Vec2) -> Mat2 {
        let h = self.hessian(p);
        Mat2::new(-h.xy, -h.yy, h.xx, h.xy)
    }
}

/// All derivative data of `F` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryEval {
    pub value: f64,
    pub gradient: Vec2,
    pub gradient_perp: Vec2,
    pub hessian: Hessian,
    pub d2perp: Mat2,
}

pub fn eval_all<G: BoundaryGeometry + ?Sized>(geom: &G, p: Vec2) -> Result<BoundaryEval> {
    if !p.is_finite() {
        return Err(Error::NonFinite("boundary evaluation point"));
    }
    let value = geom.value(p);
    let gradient = geom.gradient(p);
    let hessian = geom.hessian(p);
    let d2perp = geom.d2perp(p);
    if !value.is_finite()
        || !gradient.is_finite()
        || !(hessian.xx.is_finite() && hessian.xy.is_finite() && hessian.yy.is_finite())
    {
        return Err(Error::NonFinite("boundary function"));
    }
    Ok(BoundaryEval {
        value,
        gradient,
        gradient_perp: geom.gradient_perp(p),
        hessian,
        d2perp,
    })
}

/// Largest deviation of `|∇F|` from one over `samples` points of the zero level set.
pub fn unit_gradient_deviation<G: BoundaryGeometry + ?Sized>(geom: &G, samples: usize) -> f64 {
    let n = samples.max(2);
    (0..n)
        .map(|k| {
            let p = geom.boundary_point(k as f64 / (n - 1) as f64);
            libm::fabs(geom.gradient(p).norm() - 1.0)
        })
        .fold(0.0, libm::fmax)
}

/// Built-in domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `F(x, y) = y`.
    UpperHalfPlane,
    /// `F(x, y) = ½(x² + y² − 1)`.
    UnitDisc,
}

impl Domain {
    pub const ALL: [Domain; 2] = [Domain::UpperHalfPlane, Domain::UnitDisc];

    pub fn name(&self) -> &'static str {
        match self {
            Domain::UpperHalfPlane => "half-plane",
            Domain::UnitDisc => "unit-disc",
        }
    }

    /// Points sampled uniformly on the zero level set.
    pub fn sample_boundary(&self, n: usize) -> Vec<Vec2> {
        let n = n.max(2);
        (0..n)
            .map(|k| self.boundary_point(k as f64 / (n - 1) as f64))
            .collect()
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half-plane" => Ok(Domain::UpperHalfPlane),
            "unit-disc" => Ok(Domain::UnitDisc),
            other => Err(Error::ConfigInvalid(alloc::format!(
                "unknown geometry '{other}' (expected half-plane or unit-disc)"
            ))),
        }
    }
}

impl BoundaryGeometry for Domain {
    fn value(&self, p: Vec2) -> f64 {
        match self {
            Domain::UpperHalfPlane => p.y,
            Domain::UnitDisc => 0.5 * (p.x * p.x + p.y * p.y - 1.0),
        }
    }

    fn gradient(&self, p: Vec2) -> Vec2 {
        match self {
            Domain::UpperHalfPlane => Vec2::new(0.0, 1.0),
            Domain::UnitDisc => p,
        }
    }

    fn hessian(&self, _p: Vec2) -> Hessian {
        match self {
            Domain::UpperHalfPlane => Hessian::default(),
            Domain::UnitDisc => Hessian {
                xx: 1.0,
                xy: 0.0,
                yy: 1.0,
            },
        }
    }

    fn boundary_point(&self, s: f64) -> Vec2 {
        match self {
            Domain::UpperHalfPlane => Vec2::new(20.0 * (s - 0.5), 0.0),
            Domain::UnitDisc => Vec2::new(libm::cos(TAU * s), libm::sin(TAU * s)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_plane_values() {
        let e = eval_all(&Domain::UpperHalfPlane, Vec2::new(3.0, 2.0)).unwrap();
        assert_eq!(e.value, 2.0);
        assert_eq!(e.gradient, Vec2::new(0.0, 1.0));
        assert_eq!(e.gradient_perp, Vec2::new(-1.0, 0.0));
        assert_eq!(e.d2perp.max_abs(), 0.0);
    }

    #[test]
    fn unit_disc_values() {
        let e = eval_all(&Domain::UnitDisc, Vec2::new(1.0, 0.0)).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.gradient, Vec2::new(1.0, 0.0));
        assert_eq!(e.gradient_perp, Vec2::new(0.0, 1.0));
        assert_eq!(e.d2perp, Mat2::new(0.0, -1.0, 1.0, 0.0));

        let c = eval_all(&Domain::UnitDisc, Vec2::ZERO).unwrap();
        assert_eq!(c.value, -0.5);
        assert_eq!(c.gradient, Vec2::ZERO);
    }

    #[test]
    fn non_finite_point_is_rejected() {
        assert!(eval_all(&Domain::UnitDisc, Vec2::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn builtins_have_unit_gradient_on_boundary() {
        for d in Domain::ALL {
            assert!(unit_gradient_deviation(&d, 257) < 1e-12, "{}", d.name());
            for p in d.sample_boundary(33) {
                assert!(libm::fabs(d.value(p)) < 1e-15);
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for d in Domain::ALL {
            assert_eq!(d.name().parse::<Domain>().unwrap(), d);
        }
        assert!("strip".parse::<Domain>().is_err());
    }
}
