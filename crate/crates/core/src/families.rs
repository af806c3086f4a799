//! The bundled test functions.

use crate::error::{Error, Result};
use crate::spectral::{GridFunction, Interpolation, Smoothness};
use std::f64::consts::PI;

/// A named even test function with bounded support.
#[derive(Debug, Clone, Copy)]
pub struct FamilyMember {
    pub name: &'static str,
    pub support: f64,
    pub smoothness: Smoothness,
    pub interpolation: Interpolation,
    /// Sampling spacing that defines the member, overriding the caller's.
    pub native_spacing: Option<f64>,
    profile: fn(f64) -> f64,
}

impl FamilyMember {
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        if x > self.support {
            0.0
        } else {
            (self.profile)(x)
        }
    }

    /// Samples on the lattice k·spacing over [0, support].
    pub fn sample(&self, spacing: f64) -> Result<GridFunction> {
        let h = self.native_spacing.unwrap_or(spacing);
        GridFunction::from_fn(|x| self.eval(x), self.support, h, self.smoothness)?
            .with_interpolation(self.interpolation)
    }
}

fn gaussian_wide(x: f64) -> f64 {
    (-(x / 0.5).powi(2)).exp()
}

fn gaussian_narrow(x: f64) -> f64 {
    (-(x / 0.3).powi(2)).exp()
}

const COSINE_RADIUS: f64 = 1.5;

/// cos⁴(πx/2r): three continuous derivatives at the edge of its support.
fn cosine_bump(x: f64) -> f64 {
    (PI * x / (2.0 * COSINE_RADIUS)).cos().powi(4)
}

const TENT_RADIUS: f64 = 1.2;

/// Cubic B-spline on [−r, r] scaled to peak 1; twice continuously differentiable.
fn spline_tent(x: f64) -> f64 {
    let u = 2.0 * x / TENT_RADIUS;
    let b = if u <= 1.0 {
        2.0 / 3.0 - u * u + 0.5 * u * u * u
    } else {
        (2.0 - u).powi(3) / 6.0
    };
    1.5 * b
}

const PLATEAU: f64 = 1.0;
const BLUR: f64 = 0.25;

/// Indicator of [−1, 1] convolved with a Gaussian of width 0.25.
fn mollified_indicator(x: f64) -> f64 {
    0.5 * (libm::erf((x + PLATEAU) / BLUR) - libm::erf((x - PLATEAU) / BLUR))
}

const STEP_EDGE: f64 = 1.0;

fn step(x: f64) -> f64 {
    if x < STEP_EDGE {
        1.0
    } else {
        0.0
    }
}

/// The five smooth members used by the transform and inequality checks.
pub fn bundled_family() -> Vec<FamilyMember> {
    vec![
        FamilyMember {
            name: "gaussian_wide",
            support: 3.0,
            smoothness: Smoothness::BumpInfinitelySmooth,
            interpolation: Interpolation::Cubic,
            native_spacing: None,
            profile: gaussian_wide,
        },
        FamilyMember {
            name: "gaussian_narrow",
            support: 1.8,
            smoothness: Smoothness::BumpInfinitelySmooth,
            interpolation: Interpolation::Cubic,
            native_spacing: None,
            profile: gaussian_narrow,
        },
        FamilyMember {
            name: "cosine_bump",
            support: COSINE_RADIUS,
            smoothness: Smoothness::Lipschitz,
            interpolation: Interpolation::Cubic,
            native_spacing: None,
            profile: cosine_bump,
        },
        FamilyMember {
            name: "spline_tent",
            support: TENT_RADIUS,
            smoothness: Smoothness::Lipschitz,
            interpolation: Interpolation::Cubic,
            native_spacing: None,
            profile: spline_tent,
        },
        FamilyMember {
            name: "mollified_indicator",
            support: PLATEAU + 7.0 * BLUR,
            smoothness: Smoothness::BumpInfinitelySmooth,
            interpolation: Interpolation::Cubic,
            native_spacing: None,
            profile: mollified_indicator,
        },
    ]
}

/// Spacing of the step samples; the jump becomes a ramp over one cell.
const STEP_SPACING: f64 = 0.125;

/// Unit plateau with a jump at x = 1, sampled every 1/8 and linearly
/// interpolated between samples.
pub fn step_profile() -> FamilyMember {
    FamilyMember {
        name: "step_profile",
        support: STEP_EDGE,
        smoothness: Smoothness::PiecewiseConstant,
        interpolation: Interpolation::Linear,
        native_spacing: Some(STEP_SPACING),
        profile: step,
    }
}

pub fn by_name(name: &str) -> Result<FamilyMember> {
    bundled_family()
        .into_iter()
        .chain(std::iter::once(step_profile()))
        .find(|m| m.name == name)
        .ok_or_else(|| Error::Config(format!("unknown function '{name}'")))
}

pub fn names() -> Vec<&'static str> {
    bundled_family().iter().map(|m| m.name).chain(std::iter::once("step_profile")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_vanish_at_support_edge() {
        for m in bundled_family() {
            assert!(m.eval(m.support).abs() < 1e-12, "{}", m.name);
            // the mollified indicator peaks at erf(4) = 1 − 1.5e-8
            assert!((m.eval(0.0) - 1.0).abs() < 2e-8, "{}", m.name);
        }
    }

    #[test]
    fn tent_is_c2_at_inner_knot() {
        let r = TENT_RADIUS / 2.0;
        let h = 1e-4;
        let d2 = |x: f64| (spline_tent(x + h) - 2.0 * spline_tent(x) + spline_tent(x - h)) / (h * h);
        assert!((d2(r - 2.0 * h) - d2(r + 2.0 * h)).abs() < 1e-2);
    }

    #[test]
    fn lookup() {
        assert!(by_name("cosine_bump").is_ok());
        assert!(matches!(by_name("nope"), Err(Error::Config(_))));
        assert_eq!(names().len(), 6);
    }
}
