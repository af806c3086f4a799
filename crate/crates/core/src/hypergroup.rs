//! The Jacobi hypergroup instance: parameters, weight, and Plancherel density.

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// The pair (α, β) with ρ = α + β + 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
    rho: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for JacobiParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        JacobiParams::new(raw.alpha, raw.beta)
    }
}

impl From<JacobiParams> for RawParams {
    fn from(p: JacobiParams) -> Self {
        RawParams {
            alpha: p.alpha,
            beta: p.beta,
        }
    }
}

impl JacobiParams {
    /// Requires α ≥ β ≥ −1/2 and α ≠ −1/2.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Domain("alpha and beta must be finite".into()));
        }
        if !(alpha >= beta && beta >= -0.5 && alpha != -0.5) {
            return Err(Error::Domain(format!(
                "need alpha >= beta >= -1/2 and alpha != -1/2, got ({alpha}, {beta})"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            rho: alpha + beta + 1.0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Bit-exact identity, usable as a hash key.
    pub fn key(&self) -> (u64, u64) {
        (self.alpha.to_bits(), self.beta.to_bits())
    }
}

/// Parameters plus the regime threshold k, as read from configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergroupConfig {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "default_k_threshold")]
    pub k_threshold: f64,
}

fn default_k_threshold() -> f64 {
    1.0
}

impl HypergroupConfig {
    pub fn params(&self) -> Result<JacobiParams> {
        if !(self.k_threshold > 0.0 && self.k_threshold.is_finite()) {
            return Err(Error::Config("k_threshold must be positive".into()));
        }
        JacobiParams::new(self.alpha, self.beta)
    }
}

/// What a dependent module needs from a weight on [0, ∞).
/// Only the Jacobi family implements it here.
pub trait ChebliTrimecheWeight {
    fn weight(&self, x: f64) -> Result<f64>;
    fn log_derivative(&self, x: f64) -> Result<f64>;
    fn density(&self, lambda: f64) -> Result<f64>;
    fn rho(&self) -> f64;
}

impl ChebliTrimecheWeight for JacobiParams {
    fn weight(&self, x: f64) -> Result<f64> {
        weight_a(self, x)
    }
    fn log_derivative(&self, x: f64) -> Result<f64> {
        log_derivative_a(self, x)
    }
    fn density(&self, lambda: f64) -> Result<f64> {
        plancherel_density(self, lambda)
    }
    fn rho(&self) -> f64 {
        self.rho
    }
}

/// A(x) = 2^{2ρ} sinh^{2α+1}(x) cosh^{2β+1}(x).
pub fn weight_a(params: &JacobiParams, x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain(format!("weight needs finite x >= 0, got {x}")));
    }
    Ok(weight_unchecked(params, x))
}

#[inline]
pub(crate) fn weight_unchecked(params: &JacobiParams, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let (a, b) = (params.alpha, params.beta);
    (2.0 * params.rho * LN_2 + (2.0 * a + 1.0) * x.sinh().ln() + (2.0 * b + 1.0) * x.cosh().ln()).exp()
}

/// A'(x)/A(x) = (2α+1) coth x + (2β+1) tanh x.
pub fn log_derivative_a(params: &JacobiParams, x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("log-derivative needs x > 0, got {x}")));
    }
    Ok((2.0 * params.alpha + 1.0) / x.tanh() + (2.0 * params.beta + 1.0) * x.tanh())
}

/// A'/A − 2ρ evaluated without cancellation; positive and decreasing.
pub fn log_derivative_excess(params: &JacobiParams, x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("log-derivative needs x > 0, got {x}")));
    }
    // with e = exp(−2x): coth x − 1 = 2e/(1−e) and tanh x − 1 = −2e/(1+e);
    // over the common denominator every term is nonnegative, which matters
    // when α = β and the leading e-terms cancel
    let e = (-2.0 * x).exp();
    let num = 2.0 * e * (2.0 * (params.alpha - params.beta) + 2.0 * params.rho * e);
    Ok(num / -(-4.0 * x).exp_m1())
}

fn ln_c_function(params: &JacobiParams, lambda: f64) -> Result<Complex64> {
    if !(lambda.is_finite() && lambda != 0.0) {
        return Err(Error::Domain(format!("c-function needs finite nonzero lambda, got {lambda}")));
    }
    let (a, b, rho) = (params.alpha, params.beta, params.rho);
    let il = Complex64::new(0.0, lambda);
    Ok((rho - il) * LN_2 + ln_gamma(Complex64::new(a + 1.0, 0.0))? + ln_gamma(il)?
        - ln_gamma((rho + il) * 0.5)?
        - ln_gamma((a - b + 1.0 + il) * 0.5)?)
}

/// Harish-Chandra c-function
/// c(λ) = 2^{ρ−iλ} Γ(α+1) Γ(iλ) / [Γ((ρ+iλ)/2) Γ((α−β+1+iλ)/2)].
pub fn c_function(params: &JacobiParams, lambda: f64) -> Result<Complex64> {
    Ok(ln_c_function(params, lambda)?.exp())
}

/// The Plancherel density 1/(2π |c(λ)|²), normalised so that the transform
/// against A(x)dx is an isometry onto L²(dλ/|c|²) with this density.
pub fn plancherel_density(params: &JacobiParams, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!("density needs lambda > 0, got {lambda}")));
    }
    let ln_abs = ln_c_function(params, lambda)?.re;
    Ok((-2.0 * ln_abs).exp() / (2.0 * PI))
}

/// Fitted two-regime envelope constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityBounds {
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
}

/// Envelope λ² for λ ≤ k and λ^{2α+1} for λ > k.
pub fn density_envelope(params: &JacobiParams, lambda: f64, k: f64) -> f64 {
    if lambda <= k {
        lambda * lambda
    } else {
        lambda.powf(2.0 * params.alpha + 1.0)
    }
}

/// Fits k₁ = min and k₂ = max of density/envelope over the grid.
/// The grid may be given in any order but must straddle k.
pub fn check_density_bounds(params: &JacobiParams, lambda_grid: &[f64], k: f64) -> Result<DensityBounds> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Config("regime threshold k must be positive".into()));
    }
    if lambda_grid.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::Domain("density grid must hold positive finite values".into()));
    }
    let below = lambda_grid.iter().any(|&l| l <= k);
    let above = lambda_grid.iter().any(|&l| l > k);
    if !(below && above) {
        return Err(Error::Config(format!(
            "density grid must span both regimes around k = {k}"
        )));
    }
    let mut k1 = f64::INFINITY;
    let mut k2 = 0.0f64;
    for &l in lambda_grid {
        let r = plancherel_density(params, l)? / density_envelope(params, l, k);
        k1 = k1.min(r);
        k2 = k2.max(r);
    }
    if !(k1 > 0.0 && k2.is_finite()) {
        return Err(Error::BoundViolation(format!(
            "density envelope fit degenerate: k1 = {k1}, k2 = {k2}"
        )));
    }
    Ok(DensityBounds { k, k1, k2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> JacobiParams {
        JacobiParams::new(0.5, 0.5).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(JacobiParams::new(0.5, 0.5).is_ok());
        assert!(JacobiParams::new(0.0, -0.5).is_ok());
        assert!(JacobiParams::new(-0.5, -0.5).is_err());
        assert!(JacobiParams::new(0.0, 0.5).is_err());
        assert!(JacobiParams::new(f64::NAN, 0.0).is_err());
        let p: JacobiParams = serde_json::from_str(r#"{"alpha":2.0,"beta":0.5}"#).unwrap();
        assert_eq!(p.rho(), 3.5);
        assert!(serde_json::from_str::<JacobiParams>(r#"{"alpha":0.0,"beta":1.0}"#).is_err());
    }

    #[test]
    fn weight_reference_values() {
        let p = half();
        assert_eq!(weight_a(&p, 0.0).unwrap(), 0.0);
        // 16 sinh²(1) cosh²(1) = 4 sinh²(2); reference from 30-digit evaluation.
        let w = weight_a(&p, 1.0).unwrap();
        assert!((w - 52.616_465_672_032_97).abs() < 1e-11, "{w}");
        assert!(weight_a(&p, -1.0).is_err());
        assert!(weight_a(&p, f64::INFINITY).is_err());
    }

    #[test]
    fn log_derivative_reference_values() {
        let p = half();
        let v = log_derivative_a(&p, 1.0).unwrap();
        assert!((v - 4.149_258_882_910_192).abs() < 1e-14, "{v}");
        assert!((log_derivative_a(&p, 20.0).unwrap() - 4.0).abs() < 1e-12);
        assert!(log_derivative_a(&p, 0.0).is_err());
        // central difference of ln A
        for &x in &[0.3, 1.0, 2.5] {
            let h = 1e-5;
            let fd = (weight_a(&p, x + h).unwrap().ln() - weight_a(&p, x - h).unwrap().ln()) / (2.0 * h);
            assert!((fd - log_derivative_a(&p, x).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn excess_matches_direct_form() {
        let p = JacobiParams::new(2.0, 0.5).unwrap();
        for &x in &[0.1, 0.7, 2.0] {
            let d = log_derivative_a(&p, x).unwrap() - 2.0 * p.rho();
            assert!((d - log_derivative_excess(&p, x).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn half_half_density_is_quadratic() {
        // c(λ) = 2/(iλ) for α = β = 1/2, so the density is λ²/(8π).
        let p = half();
        for &l in &[1e-3, 0.2, 1.0, 5.0, 37.0, 80.0] {
            let d = plancherel_density(&p, l).unwrap();
            let e = l * l / (8.0 * PI);
            assert!((d / e - 1.0).abs() < 1e-12, "lambda={l}");
        }
        assert!(plancherel_density(&p, 0.0).is_err());
    }

    #[test]
    fn density_is_even_via_conjugate_branch() {
        let p = JacobiParams::new(1.0, 0.0).unwrap();
        for &l in &[0.01, 0.5, 3.0, 25.0] {
            let c_plus = c_function(&p, l).unwrap();
            let c_minus = c_function(&p, -l).unwrap();
            assert!((c_plus - c_minus.conj()).norm() < 1e-12 * c_plus.norm());
            let d = plancherel_density(&p, l).unwrap();
            let d_conj = 1.0 / (2.0 * PI * c_minus.norm_sqr());
            assert!((d / d_conj - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_bounds_need_both_regimes() {
        let p = half();
        assert!(matches!(check_density_bounds(&p, &[2.0], 1.0), Err(Error::Config(_))));
        assert!(matches!(check_density_bounds(&p, &[2.0, 3.0], 1.0), Err(Error::Config(_))));
        let b = check_density_bounds(&p, &[0.5, 5.0], 1.0).unwrap();
        assert!(b.k1 > 0.0 && b.k1 <= b.k2);
    }
}
