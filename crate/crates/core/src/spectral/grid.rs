//! Sampled even functions on [0, ∞) and sampled spectra.

use crate::error::{Error, Result};
use crate::interp::{linear_eval, CubicSpline};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    BumpInfinitelySmooth,
    Lipschitz,
    PiecewiseConstant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    Cubic,
    Linear,
}

impl Smoothness {
    pub fn default_interpolation(self) -> Interpolation {
        match self {
            Smoothness::BumpInfinitelySmooth => Interpolation::Cubic,
            Smoothness::Lipschitz | Smoothness::PiecewiseConstant => Interpolation::Linear,
        }
    }
}

/// Samples of an even function on a grid starting at 0.
///
/// Between samples the function is interpolated (clamped cubic spline with
/// zero slope at the origin, or linear). It is zero beyond the support radius
/// and beyond the last sample; negative arguments are reflected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GridFunctionData", into = "GridFunctionData")]
pub struct GridFunction {
    x_grid: Vec<f64>,
    values: Vec<f64>,
    support_radius: Option<f64>,
    smoothness: Smoothness,
    interpolation: Interpolation,
    spline: Option<CubicSpline>,
}

#[derive(Serialize, Deserialize)]
struct GridFunctionData {
    x_grid: Vec<f64>,
    values: Vec<f64>,
    /// `null` means unbounded support.
    support_radius: Option<f64>,
    smoothness: Smoothness,
    interpolation: Interpolation,
}

impl TryFrom<GridFunctionData> for GridFunction {
    type Error = Error;
    fn try_from(d: GridFunctionData) -> Result<Self> {
        GridFunction::new(d.x_grid, d.values, d.support_radius, d.smoothness)?.with_interpolation(d.interpolation)
    }
}

impl From<GridFunction> for GridFunctionData {
    fn from(g: GridFunction) -> Self {
        GridFunctionData {
            x_grid: g.x_grid,
            values: g.values,
            support_radius: g.support_radius,
            smoothness: g.smoothness,
            interpolation: g.interpolation,
        }
    }
}

impl GridFunction {
    pub fn new(x_grid: Vec<f64>, values: Vec<f64>, support_radius: Option<f64>, smoothness: Smoothness) -> Result<Self> {
        if x_grid.len() < 2 || values.len() != x_grid.len() {
            return Err(Error::Domain("grid function needs at least two samples of matching length".into()));
        }
        if x_grid[0] != 0.0 {
            return Err(Error::Domain("grid function samples must start at x = 0".into()));
        }
        if x_grid.windows(2).any(|w| !(w[1] > w[0])) || x_grid.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid must be strictly increasing and all samples finite".into()));
        }
        if let Some(r) = support_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Domain(format!("support radius must be positive, got {r}")));
            }
            let last = *x_grid.last().unwrap();
            if last < r * (1.0 - 1e-12) {
                return Err(Error::Domain(format!("grid ends at {last}, before the support radius {r}")));
            }
        }
        let mut g = Self {
            x_grid,
            values,
            support_radius,
            smoothness,
            interpolation: smoothness.default_interpolation(),
            spline: None,
        };
        g.rebuild();
        Ok(g)
    }

    pub fn with_interpolation(mut self, interpolation: Interpolation) -> Result<Self> {
        self.interpolation = interpolation;
        self.rebuild();
        Ok(self)
    }

    fn rebuild(&mut self) {
        self.spline = match self.interpolation {
            Interpolation::Linear => None,
            Interpolation::Cubic => {
                let n = self.x_grid.len();
                let right = (self.values[n - 1] - self.values[n - 2]) / (self.x_grid[n - 1] - self.x_grid[n - 2]);
                Some(CubicSpline::clamped(&self.x_grid, &self.values, 0.0, right))
            }
        };
    }

    /// Samples `f` on the lattice k·spacing covering [0, support].
    pub fn from_fn(f: impl Fn(f64) -> f64, support: f64, spacing: f64, smoothness: Smoothness) -> Result<Self> {
        if !(support > 0.0 && spacing > 0.0 && support.is_finite()) {
            return Err(Error::Domain("support and spacing must be positive".into()));
        }
        let n = (support / spacing - 1e-9).ceil().max(1.0) as usize;
        let x: Vec<f64> = (0..=n).map(|k| k as f64 * spacing).collect();
        let v = x.iter().map(|&t| if t <= support { f(t) } else { 0.0 }).collect();
        Self::new(x, v, Some(support), smoothness)
    }

    pub fn zero(support: f64, spacing: f64) -> Result<Self> {
        Self::from_fn(|_| 0.0, support, spacing, Smoothness::BumpInfinitelySmooth)
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }
    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Right end of the region where the function may be nonzero.
    pub fn extent(&self) -> f64 {
        self.support_radius.unwrap_or(*self.x_grid.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        if let Some(r) = self.support_radius {
            if x > r {
                return 0.0;
            }
        }
        if x > *self.x_grid.last().unwrap() {
            return 0.0;
        }
        match &self.spline {
            Some(s) => s.eval(x),
            None => linear_eval(&self.x_grid, &self.values, x),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut g = self.clone();
        g.values.iter_mut().for_each(|v| *v *= c);
        g.rebuild();
        g
    }

    /// self − other, sampled on this function's grid (extended to cover the
    /// other's extent when needed).
    pub fn difference(&self, other: &GridFunction) -> Result<Self> {
        let same = self.x_grid == other.x_grid;
        let values: Vec<f64> = if same {
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()
        } else {
            self.x_grid.iter().map(|&x| self.eval(x) - other.eval(x)).collect()
        };
        let support = match (self.support_radius, other.support_radius) {
            (Some(a), Some(b)) if a.max(b) <= *self.x_grid.last().unwrap() => Some(a.max(b)),
            _ => None,
        };
        GridFunction::new(self.x_grid.clone(), values, support, self.smoothness)
    }

    /// x ↦ f(a·x) on a grid of the same spacing.
    pub fn dilated(&self, a: f64, spacing: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain("dilation factor must be positive".into()));
        }
        let r = self.extent() / a;
        Self::from_fn(|x| self.eval(a * x), r, spacing, self.smoothness)?.with_interpolation(self.interpolation)
    }
}

/// Transform values on a λ-grid, optionally with the Plancherel density at
/// the same points attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub lambda_grid: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn new(lambda_grid: Vec<f64>, values: Vec<f64>, density: Option<Vec<f64>>) -> Result<Self> {
        if lambda_grid.is_empty() || lambda_grid.len() != values.len() {
            return Err(Error::Domain("spectrum grid and values must be nonempty and of equal length".into()));
        }
        if let Some(d) = &density {
            if d.len() != lambda_grid.len() {
                return Err(Error::Domain("density length differs from the grid".into()));
            }
        }
        if lambda_grid[0] <= 0.0 || lambda_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("spectrum grid must be positive and strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("spectrum values must be finite".into()));
        }
        Ok(Self {
            lambda_grid,
            values,
            density,
        })
    }

    pub fn density_attached(&self) -> bool {
        self.density.is_some()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Spectrum {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }
}
