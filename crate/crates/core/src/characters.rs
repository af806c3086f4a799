//! Jacobi functions φ_λ^{(α,β)}, the characters of the hypergroup.
//!
//! For real λ three representations are available and the one with the least
//! predicted cancellation is used:
//!
//! * the defining series in z = −sinh²t, summed in real arithmetic since the
//!   upper parameters are complex conjugates; it yields 1 − φ without
//!   cancellation for small λt;
//! * Pfaff's form in tanh²t;
//! * the expansion φ = 2 Re[c(λ) Φ_λ] in sech²t, with Φ_λ the solution that
//!   behaves like e^{(iλ−ρ)t} at infinity.

use crate::error::{Error, Result};
use crate::hypergeometric::{gauss_2f1, hypergeometric_series, SeriesValue, MAX_TERMS, SERIES_TOL};
use crate::hypergroup::{c_function, log_derivative_a, JacobiParams};
use crate::quadrature::NeumaierSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type ComplexValue = Complex64;

/// Largest accepted error estimate for a single character value.
pub const CHARACTER_TOL: f64 = 1e-4;
/// Below this |λ| the sech² expansion loses too much to its pole at 0 and the
/// value is extrapolated in λ² instead.
const SMALL_LAMBDA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Origin,
    Exact,
    DirectSeries,
    Pfaff,
    Connection,
    SmallFrequency,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterEval {
    pub lambda: ComplexValue,
    pub t: f64,
    pub value: f64,
    /// 1 − φ, accurate in the relative sense when the direct series is used.
    pub one_minus: f64,
    pub series_terms_used: usize,
    pub est_error: f64,
    pub method: Method,
}

/// φ_λ(t) for any λ on the real or imaginary axis.
pub fn jacobi_phi(params: &JacobiParams, lambda: ComplexValue, t: f64) -> Result<f64> {
    Ok(jacobi_phi_eval(params, lambda, t)?.value)
}

pub fn jacobi_phi_eval(params: &JacobiParams, lambda: ComplexValue, t: f64) -> Result<CharacterEval> {
    if !(lambda.re.is_finite() && lambda.im.is_finite() && t.is_finite()) {
        return Err(Error::Domain("character arguments must be finite".into()));
    }
    if lambda.im == 0.0 {
        let mut e = phi_real(params, lambda.re, t)?;
        e.lambda = lambda;
        return Ok(e);
    }
    if lambda.re != 0.0 {
        return Err(Error::Domain(format!(
            "characters are evaluated on the real and imaginary axes only, got {lambda}"
        )));
    }
    let t = t.abs();
    let mu = lambda.im.abs();
    let rho = params.rho();
    let base = CharacterEval {
        lambda,
        t,
        value: 1.0,
        one_minus: 0.0,
        series_terms_used: 0,
        est_error: 0.0,
        method: Method::Origin,
    };
    if t == 0.0 {
        return Ok(base);
    }
    if mu == rho {
        return Ok(CharacterEval {
            method: Method::Exact,
            ..base
        });
    }
    let a = Complex64::new(0.5 * (rho - mu), 0.0);
    let b = Complex64::new(0.5 * (rho + mu), 0.0);
    let c = Complex64::new(params.alpha() + 1.0, 0.0);
    let s = gauss_2f1(a, b, c, -t.sinh().powi(2))?;
    finish(base, s.value.re, 1.0 - s.value.re, s.terms, s.est_error, Method::DirectSeries)
}

fn finish(
    base: CharacterEval,
    value: f64,
    one_minus: f64,
    terms: usize,
    est_error: f64,
    method: Method,
) -> Result<CharacterEval> {
    if !(est_error <= CHARACTER_TOL) || !value.is_finite() {
        return Err(Error::Accuracy {
            message: format!(
                "character at lambda = {}, t = {} has error estimate {est_error:e}",
                base.lambda, base.t
            ),
            partial: Some(Complex64::new(value, 0.0)),
            estimate: Some(est_error),
        });
    }
    Ok(CharacterEval {
        value,
        one_minus,
        series_terms_used: terms,
        est_error,
        method,
        ..base
    })
}

/// φ_λ(t) for real λ; even in both λ and t.
pub fn phi_real(params: &JacobiParams, lambda: f64, t: f64) -> Result<CharacterEval> {
    if !(lambda.is_finite() && t.is_finite()) {
        return Err(Error::Domain("character arguments must be finite".into()));
    }
    let l = lambda.abs();
    let t = t.abs();
    let base = CharacterEval {
        lambda: Complex64::new(lambda, 0.0),
        t,
        value: 1.0,
        one_minus: 0.0,
        series_terms_used: 0,
        est_error: 0.0,
        method: Method::Origin,
    };
    if t == 0.0 {
        return Ok(base);
    }
    let sh = t.sinh();
    let z = sh * sh;
    let th = t.tanh();
    let w = th * th;
    let u = 1.0 / t.cosh().powi(2);

    // Predicted log-magnitude of the largest series term.
    let inf = f64::INFINITY;
    let g_direct = if z <= 0.5 { l * sh } else { inf };
    let g_pfaff = if w <= 0.9 { l * th } else { inf };
    let g_conn = if u <= 0.97 && l >= SMALL_LAMBDA {
        0.25 * l * u + (-(l * t).ln()).max(0.0)
    } else {
        inf
    };
    if g_direct.is_finite() && (g_direct <= 8.0 || (g_direct <= g_pfaff && g_direct <= g_conn)) {
        let (v, om, n, e) = direct_series(params, l, z)?;
        return finish(base, v, om, n, e, Method::DirectSeries);
    }
    if g_pfaff.is_finite() && g_pfaff <= g_conn {
        let s = pfaff_series(params, l, t, w)?;
        return finish(base, s.value.re, 1.0 - s.value.re, s.terms, s.est_error, Method::Pfaff);
    }
    if g_conn.is_finite() {
        let s = connection_series(params, l, t, u)?;
        return finish(base, s.value.re, 1.0 - s.value.re, s.terms, s.est_error, Method::Connection);
    }
    // Far from the origin with λ ≈ 0: the function is even and analytic in λ,
    // so extrapolate in λ² from two resolvable frequencies.
    let l1 = 1e-4;
    let s1 = connection_series(params, l1, t, u)?;
    let s2 = connection_series(params, 2.0 * l1, t, u)?;
    let f0 = (4.0 * s1.value.re - s2.value.re) / 3.0;
    let slope = (s1.value.re - f0) / (l1 * l1);
    let v = f0 + slope * l * l;
    let err = 2.0 * (s1.est_error + s2.est_error) + (s1.value.re - f0).abs() * (l1 * l1);
    finish(base, v, 1.0 - v, s1.terms + s2.terms, err, Method::SmallFrequency)
}

/// Defining series; returns (φ, 1 − φ, terms, error).
fn direct_series(params: &JacobiParams, l: f64, z: f64) -> Result<(f64, f64, usize, f64)> {
    let hr = 0.5 * params.rho();
    let l4 = 0.25 * l * l;
    let c = params.alpha() + 1.0;
    let ratio = |n: f64| ((hr + n) * (hr + n) + l4) / ((c + n) * (n + 1.0));
    let mut term = 1.0f64;
    let mut s1 = NeumaierSum::default();
    let mut abs_sum = 0.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= -ratio(nf) * z;
        s1.add(term);
        abs_sum += term.abs();
        let r = (ratio(nf + 1.0) * z).max(z);
        let tail = term.abs() * r / (1.0 - r);
        let sum = s1.total();
        if term == 0.0 || (r < 1.0 && (tail <= SERIES_TOL * sum.abs() || tail <= 1e-3 * f64::EPSILON * abs_sum)) {
            let err = 4.0 * f64::EPSILON * abs_sum + tail;
            return Ok((1.0 + sum, -sum, n + 1, err));
        }
    }
    Err(Error::Accuracy {
        message: format!("character series did not converge at lambda = {l}"),
        partial: Some(Complex64::new(1.0 + s1.total(), 0.0)),
        estimate: None,
    })
}

fn pfaff_series(params: &JacobiParams, l: f64, t: f64, w: f64) -> Result<SeriesValue> {
    let rho = params.rho();
    let (al, be) = (params.alpha(), params.beta());
    let a = Complex64::new(0.5 * rho, 0.5 * l);
    let cb = Complex64::new(0.5 * (al - be + 1.0), 0.5 * l);
    let c = Complex64::new(al + 1.0, 0.0);
    let s = hypergeometric_series(a, cb, c, w)?;
    let ln_cosh = t.cosh().ln();
    let pref = Complex64::from_polar((-rho * ln_cosh).exp(), -l * ln_cosh);
    Ok(SeriesValue {
        value: pref * s.value,
        terms: s.terms,
        est_error: pref.norm() * s.est_error,
    })
}

fn connection_series(params: &JacobiParams, l: f64, t: f64, u: f64) -> Result<SeriesValue> {
    let rho = params.rho();
    let (al, be) = (params.alpha(), params.beta());
    let a = Complex64::new(0.5 * rho, -0.5 * l);
    let b = Complex64::new(0.5 * (al - be + 1.0), -0.5 * l);
    let c = Complex64::new(1.0, -l);
    let s = hypergeometric_series(a, b, c, u)?;
    // ln(2 cosh t) without overflow
    let ln2cosh = t + (-2.0 * t).exp().ln_1p();
    let cf = c_function(params, l)?;
    let pref = 2.0 * cf * Complex64::new(-rho * ln2cosh, l * ln2cosh).exp();
    let scale = pref.norm();
    let gamma_err = 1e-15 * (4.0 + l + (1.0 / l).ln().max(0.0));
    Ok(SeriesValue {
        value: pref * s.value,
        terms: s.terms,
        est_error: scale * (s.est_error + gamma_err * s.value.norm()),
    })
}

/// Max over interior grid points of |u'' + (A'/A)u' + (λ²+ρ²)u| with centred
/// second-order differences. The grid must be uniform with spacing ≤ 1e-2.
pub fn ode_residual(params: &JacobiParams, lambda: f64, t_grid: &[f64], phi_values: &[f64]) -> Result<f64> {
    ode_residual_eigen(params, lambda * lambda + params.rho().powi(2), t_grid, phi_values)
}

/// As [`ode_residual`] with the eigenvalue λ²+ρ² given directly, which allows
/// imaginary frequencies.
pub fn ode_residual_eigen(params: &JacobiParams, eigen: f64, t_grid: &[f64], phi_values: &[f64]) -> Result<f64> {
    let n = t_grid.len();
    if n < 3 || phi_values.len() != n {
        return Err(Error::Config("residual needs at least three matching samples".into()));
    }
    let h = (t_grid[n - 1] - t_grid[0]) / (n - 1) as f64;
    if !(h > 0.0 && h <= 1e-2 * (1.0 + 1e-12)) {
        return Err(Error::Config(format!("residual grid spacing {h} outside (0, 1e-2]")));
    }
    if t_grid[0] <= 0.0 {
        return Err(Error::Config("residual grid must lie in t > 0".into()));
    }
    for (i, w) in t_grid.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(t_grid[i].abs() * 1e-3) {
            return Err(Error::Config("residual grid must be uniform".into()));
        }
    }
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let (um, u0, up) = (phi_values[i - 1], phi_values[i], phi_values[i + 1]);
        let d2 = (up - 2.0 * u0 + um) / (h * h);
        let d1 = (up - um) / (2.0 * h);
        let r = d2 + log_derivative_a(params, t_grid[i])? * d1 + eigen * u0;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Location and value of the empirical infimum of |1 − φ_λ(t)| / min{1, (λt)²}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacterBound {
    pub constant: f64,
    pub lambda_at_min: f64,
    pub t_at_min: f64,
    pub pairs_evaluated: usize,
}

/// Products λt below this are skipped; the small-argument limit is covered by
/// the Taylor coefficient instead.
pub const MIN_LAMBDA_T: f64 = 1e-4;

pub fn character_bound_constant(params: &JacobiParams, lambda_grid: &[f64], t_grid: &[f64]) -> Result<f64> {
    Ok(character_bound(params, lambda_grid, t_grid)?.constant)
}

pub fn character_bound(params: &JacobiParams, lambda_grid: &[f64], t_grid: &[f64]) -> Result<CharacterBound> {
    if lambda_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::Config("character bound needs nonempty grids".into()));
    }
    if lambda_grid.iter().chain(t_grid).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Domain("character bound grids must be positive".into()));
    }
    let mut best = CharacterBound {
        constant: f64::INFINITY,
        lambda_at_min: f64::NAN,
        t_at_min: f64::NAN,
        pairs_evaluated: 0,
    };
    for &l in lambda_grid {
        for &t in t_grid {
            let lt = l * t;
            if lt < MIN_LAMBDA_T {
                continue;
            }
            let e = phi_real(params, l, t)?;
            let ratio = e.one_minus.abs() / (lt * lt).min(1.0);
            if !(ratio > 0.0 && ratio.is_finite()) {
                return Err(Error::BoundViolation(format!(
                    "|1 - phi| / min(1, (lambda t)^2) = {ratio} at lambda = {l}, t = {t}"
                )));
            }
            best.pairs_evaluated += 1;
            // strict comparison keeps the first minimiser: order-independent value
            if ratio < best.constant {
                best.constant = ratio;
                best.lambda_at_min = l;
                best.t_at_min = t;
            }
        }
    }
    if best.pairs_evaluated == 0 {
        return Err(Error::Config(format!("no grid pair has lambda*t >= {MIN_LAMBDA_T}")));
    }
    Ok(best)
}

/// lim_{λt→0} (1 − φ_λ(t))/(λt)² along t → 0 at fixed λ is (λ²+ρ²)/(4(α+1)λ²);
/// for λ ≫ ρ this is 1/(4(α+1)).
pub fn small_argument_coefficient(params: &JacobiParams, lambda: f64) -> f64 {
    (lambda * lambda + params.rho().powi(2)) / (4.0 * (params.alpha() + 1.0) * lambda * lambda)
}
