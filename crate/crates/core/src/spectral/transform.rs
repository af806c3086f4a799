//! Weighted norms, forward and inverse transforms, translation, modulus.

use super::engine::SpectralEngine;
use super::grid::{GridFunction, Spectrum};
use crate::characters::phi_real;
use crate::error::{Error, Result};
use crate::hypergroup::{plancherel_density, weight_unchecked, JacobiParams};
use crate::interp::CubicSpline;
use crate::quadrature::{neumaier_sum, CompositeRule};
use super::engine::QuadratureSpec;
use std::sync::Arc;

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("exponent p must be >= 1 or infinite, got {p}")))
    }
}

fn is_even_integer(p: f64) -> bool {
    p.is_finite() && p == p.round() && (p as i64) % 2 == 0
}

/// x-rule for ∫|f|^p A dx, with panels split at sign changes of f when |f|^p
/// is not smooth there.
fn norm_rule(f: &GridFunction, p: f64, quad: &QuadratureSpec) -> CompositeRule {
    let base = quad.x_rule(f.extent());
    if is_even_integer(p) {
        return base;
    }
    let knots = f.x_grid();
    let mut panels = Vec::with_capacity(base.panels.len());
    for &(lo, hi) in &base.panels {
        let mut pts = vec![lo];
        let start = knots.partition_point(|&k| k <= lo);
        pts.extend(knots[start..].iter().take_while(|&&k| k < hi));
        pts.push(hi);
        let mut left = lo;
        for w in pts.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let (mut fa, fb) = (f.eval(a), f.eval(b));
            if fa * fb < 0.0 {
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    let fm = f.eval(m);
                    if fm == 0.0 || m <= a || m >= b {
                        a = m;
                        break;
                    }
                    if (fm < 0.0) == (fa < 0.0) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                if a > left && a < hi {
                    panels.push((left, a));
                    left = a;
                }
            }
        }
        panels.push((left, hi));
    }
    CompositeRule::from_panels(panels, base.order)
}

/// (∫|f|^p A dx)^{1/p}; p = ∞ gives the largest sample magnitude.
pub fn lp_norm_weighted(f: &GridFunction, params: &JacobiParams, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_p(p)?;
    quad.validate()?;
    if p.is_infinite() {
        let r = f.extent();
        return Ok(f
            .x_grid()
            .iter()
            .zip(f.values())
            .filter(|(x, _)| **x <= r)
            .fold(0.0, |m, (_, v)| m.max(v.abs())));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let rule = norm_rule(f, p, quad);
    let s = neumaier_sum(
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * weight_unchecked(params, x) * f.eval(x).abs().powf(p)),
    );
    Ok(s.max(0.0).powf(1.0 / p))
}

/// Transform on the engine's λ nodes together with a per-node noise level
/// derived from the character error estimates.
pub fn forward_on_nodes(f: &GridFunction, params: &JacobiParams, quad: &QuadratureSpec) -> Result<(Spectrum, Vec<f64>)> {
    let engine = SpectralEngine::get(params, quad)?;
    let table = engine.x_table(f.extent())?;
    let fw: Vec<f64> = table.rule.nodes.iter().zip(&table.weighted_a).map(|(&x, &wa)| wa * f.eval(x)).collect();
    let l1: f64 = fw.iter().map(|v| v.abs()).sum();
    let nx = fw.len();
    let mut values = Vec::with_capacity(engine.n_lambda());
    let mut noise = Vec::with_capacity(engine.n_lambda());
    for j in 0..engine.n_lambda() {
        let row = &table.phi[j * nx..(j + 1) * nx];
        values.push(neumaier_sum(row.iter().zip(&fw).map(|(p, v)| p * v)));
        noise.push(l1 * (table.phi_err[j] + 4.0 * f64::EPSILON));
    }
    let s = Spectrum::new(engine.lambda_nodes().to_vec(), values, Some(engine.density.clone()))?;
    Ok((s, noise))
}

fn forward_row(nodes: &[f64], fw: &[f64], params: &JacobiParams, lambda: f64) -> Result<f64> {
    let mut terms = Vec::with_capacity(fw.len());
    for (&x, &v) in nodes.iter().zip(fw) {
        terms.push(v * phi_real(params, lambda, x)?.value);
    }
    Ok(neumaier_sum(terms))
}

/// F f(λ) = ∫ f φ_λ A dx at the requested frequencies.
pub fn forward_transform(
    f: &GridFunction,
    params: &JacobiParams,
    lambdas: &[f64],
    quad: &QuadratureSpec,
) -> Result<Spectrum> {
    let engine = SpectralEngine::get(params, quad)?;
    if let Some(r) = f.support_radius() {
        if r > quad.truncation_radius * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "support radius {r} exceeds truncation radius {}",
                quad.truncation_radius
            )));
        }
    }
    if engine.on_nodes(lambdas) {
        return Ok(forward_on_nodes(f, params, quad)?.0);
    }
    let (rule, weighted_a) = engine.x_rule_weights(f.extent());
    let fw: Vec<f64> = rule.nodes.iter().zip(&weighted_a).map(|(&x, &wa)| wa * f.eval(x)).collect();
    let values = lambdas
        .iter()
        .map(|&l| forward_row(&rule.nodes, &fw, params, l))
        .collect::<Result<Vec<_>>>()?;
    let density = lambdas.iter().map(|&l| plancherel_density(params, l)).collect::<Result<Vec<_>>>()?;
    Spectrum::new(lambdas.to_vec(), values, Some(density))
}

/// Spectrum values on the engine's λ nodes. Off-node spectra are splined;
/// below their first frequency they are continued flat (the transform is
/// even in λ) and above their last one by zero.
pub(crate) fn node_values(engine: &SpectralEngine, s: &Spectrum) -> Result<Vec<f64>> {
    if engine.on_nodes(&s.lambda_grid) {
        return Ok(s.values.clone());
    }
    let g = &s.lambda_grid;
    let n = g.len();
    if n < 2 {
        return Err(Error::Domain("an off-node spectrum needs at least two samples".into()));
    }
    let sl = |i: usize, j: usize| (s.values[j] - s.values[i]) / (g[j] - g[i]);
    let spline = CubicSpline::clamped(g, &s.values, sl(0, 1), sl(n - 2, n - 1));
    Ok(engine
        .lambda_nodes()
        .iter()
        .map(|&l| {
            if l < g[0] {
                s.values[0]
            } else if l > g[n - 1] {
                0.0
            } else {
                spline.eval(l)
            }
        })
        .collect())
}

/// Share of the spectral L² mass in the top tenth of [0, Λ].
pub fn tail_fraction(engine: &SpectralEngine, values: &[f64]) -> f64 {
    let cut = 0.9 * engine.quad.spectral_cutoff;
    let mut total = Vec::with_capacity(values.len());
    let mut tail = Vec::new();
    for ((&l, &w), &v) in engine.lambda_nodes().iter().zip(&engine.lambda_weights).zip(values) {
        let m = w * v * v;
        total.push(m);
        if l >= cut {
            tail.push(m);
        }
    }
    let t = neumaier_sum(total);
    if t == 0.0 {
        0.0
    } else {
        neumaier_sum(tail) / t
    }
}

fn check_tail(engine: &SpectralEngine, values: &[f64]) -> Result<()> {
    let frac = tail_fraction(engine, values);
    if frac > engine.quad.tail_tolerance {
        return Err(Error::accuracy(
            format!(
                "spectrum does not decay: {frac:e} of its L2 mass lies above {}",
                0.9 * engine.quad.spectral_cutoff
            ),
            Some(frac),
        ));
    }
    Ok(())
}

/// Inverse transform at lattice points 0, h, …, up to `upto`.
fn inverse_lattice(engine: &SpectralEngine, values: &[f64], upto: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let lat = engine.lattice()?;
    let kmax = engine.quad.lattice_len(upto);
    if kmax >= lat.len {
        return Err(Error::Config(format!(
            "output point {upto} lies beyond the truncation radius {}",
            engine.quad.truncation_radius
        )));
    }
    let nl = engine.n_lambda();
    let sw: Vec<f64> = values.iter().zip(&engine.lambda_weights).map(|(v, w)| v * w).collect();
    let mut xs = Vec::with_capacity(kmax + 1);
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let row = &lat.phi[k * nl..(k + 1) * nl];
        xs.push(k as f64 * engine.quad.output_spacing);
        out.push(neumaier_sum(row.iter().zip(&sw).map(|(p, v)| p * v)));
    }
    Ok((xs, out))
}

/// ∫ S(λ) φ_λ(x) dλ/|c(λ)|² at arbitrary x ≥ 0.
pub fn inverse_values(s: &Spectrum, params: &JacobiParams, xs: &[f64], quad: &QuadratureSpec) -> Result<Vec<f64>> {
    let engine = SpectralEngine::get(params, quad)?;
    let values = node_values(&engine, s)?;
    check_tail(&engine, &values)?;
    let sw: Vec<f64> = values.iter().zip(&engine.lambda_weights).map(|(v, w)| v * w).collect();
    let h = quad.output_spacing;
    let lat = engine.lattice()?;
    let nl = engine.n_lambda();
    xs.iter()
        .map(|&x| {
            let x = x.abs();
            let k = (x / h).round();
            if (k * h - x).abs() <= 1e-12 * x.max(1.0) && (k as usize) < lat.len {
                let k = k as usize;
                let row = &lat.phi[k * nl..(k + 1) * nl];
                return Ok(neumaier_sum(row.iter().zip(&sw).map(|(p, v)| p * v)));
            }
            let mut terms = Vec::with_capacity(nl);
            for (&l, &v) in engine.lambda_nodes().iter().zip(&sw) {
                terms.push(v * phi_real(params, l, x)?.value);
            }
            Ok(neumaier_sum(terms))
        })
        .collect()
}

/// Inverse transform sampled on `xs`, which must start at 0 and increase.
pub fn inverse_transform(s: &Spectrum, params: &JacobiParams, xs: &[f64], quad: &QuadratureSpec) -> Result<GridFunction> {
    let v = inverse_values(s, params, xs, quad)?;
    GridFunction::new(xs.to_vec(), v, None, super::grid::Smoothness::BumpInfinitelySmooth)
}

fn lattice_function(
    engine: &SpectralEngine,
    values: &[f64],
    support: f64,
    like: &GridFunction,
) -> Result<GridFunction> {
    check_tail(engine, values)?;
    let (xs, v) = inverse_lattice(engine, values, support)?;
    GridFunction::new(xs, v, Some(support), like.smoothness())?.with_interpolation(like.interpolation())
}

/// ‖S‖ in L^p(dλ/|c|²) over [0, Λ]; p = ∞ gives the largest sample magnitude.
pub fn lp_norm_spectral(s: &Spectrum, params: &JacobiParams, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_p(p)?;
    if p.is_infinite() {
        return Ok(s.sup_abs());
    }
    let engine = SpectralEngine::get(params, quad)?;
    let values = node_values(&engine, s)?;
    let sum = neumaier_sum(values.iter().zip(&engine.lambda_weights).map(|(v, w)| w * v.abs().powf(p)));
    Ok(sum.max(0.0).powf(1.0 / p))
}

/// ∫_a^b g(λ, S(λ)) dλ/|c(λ)|² with S interpolated from the engine nodes.
pub fn spectral_band_integral(
    s: &Spectrum,
    params: &JacobiParams,
    quad: &QuadratureSpec,
    a: f64,
    b: f64,
    g: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let engine = SpectralEngine::get(params, quad)?;
    let values = node_values(&engine, s)?;
    band_integral_nodes(&engine, &values, a, b, g)
}

pub(crate) fn band_integral_nodes(
    engine: &SpectralEngine,
    values: &[f64],
    a: f64,
    b: f64,
    g: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let cutoff = engine.quad.spectral_cutoff;
    let (a, b) = (a.max(0.0), b.min(cutoff));
    if !(b > a) {
        return Ok(0.0);
    }
    let panels = (engine.quad.spectral_panels as f64 * (b - a) / cutoff).ceil().max(1.0) as usize;
    let rule = CompositeRule::uniform(a, b, panels, engine.quad.points_per_panel);
    let mut terms = Vec::with_capacity(rule.len());
    for (&l, &w) in rule.nodes.iter().zip(&rule.weights) {
        let sv = engine.interpolate_nodes(values, l);
        terms.push(w * plancherel_density(&engine.params, l)? * g(l, sv));
    }
    Ok(neumaier_sum(terms))
}

/// τ_{x0} f through F(τ_{x0} f)(λ) = φ_λ(x0) F f(λ), sampled on the output
/// lattice over [0, x0 + r].
pub fn translate(f: &GridFunction, x0: f64, params: &JacobiParams, quad: &QuadratureSpec) -> Result<GridFunction> {
    if !(x0 >= 0.0 && x0.is_finite()) {
        return Err(Error::Domain(format!("translation needs finite x0 >= 0, got {x0}")));
    }
    let engine = SpectralEngine::get(params, quad)?;
    let reach = x0 + f.extent();
    if reach > quad.truncation_radius * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "x0 + support = {reach} exceeds truncation radius {}",
            quad.truncation_radius
        )));
    }
    let (s, _) = forward_on_nodes(f, params, quad)?;
    let mut v = s.values;
    for (val, &l) in v.iter_mut().zip(engine.lambda_nodes()) {
        *val *= phi_real(params, l, x0)?.value;
    }
    lattice_function(&engine, &v, reach, f)
}

/// F⁻¹F f on the output lattice.
pub fn round_trip(f: &GridFunction, params: &JacobiParams, quad: &QuadratureSpec) -> Result<GridFunction> {
    let engine = SpectralEngine::get(params, quad)?;
    let (s, _) = forward_on_nodes(f, params, quad)?;
    lattice_function(&engine, &s.values, f.extent(), f)
}

/// ‖F⁻¹F f − f‖_{A,p}.
pub fn round_trip_error(f: &GridFunction, params: &JacobiParams, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    let back = round_trip(f, params, quad)?;
    lp_norm_weighted(&back.difference(f)?, params, p, quad)
}

/// τ_δ f − f, computed on the spectral side as −(1 − φ_λ(δ)) F f so that the
/// round-trip error of the transform pair does not enter.
pub fn translation_difference(
    f: &GridFunction,
    delta: f64,
    params: &JacobiParams,
    quad: &QuadratureSpec,
) -> Result<GridFunction> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let engine = SpectralEngine::get(params, quad)?;
    let reach = delta + f.extent();
    if reach > quad.truncation_radius * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "delta + support = {reach} exceeds truncation radius {}",
            quad.truncation_radius
        )));
    }
    let (s, _) = forward_on_nodes(f, params, quad)?;
    let mut v = s.values;
    for (val, &l) in v.iter_mut().zip(engine.lambda_nodes()) {
        *val *= -phi_real(params, l, delta)?.one_minus;
    }
    lattice_function(&engine, &v, reach, f)
}

/// ω_{A,p}(f, δ) = ‖τ_δ f − f‖_{A,p}.
pub fn modulus_of_continuity(
    f: &GridFunction,
    delta: f64,
    p: f64,
    params: &JacobiParams,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_p(p)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let d = translation_difference(f, delta, params, quad)?;
    lp_norm_weighted(&d, params, p, quad)
}

/// Engine handle for callers that reuse node-level data.
pub fn engine(params: &JacobiParams, quad: &QuadratureSpec) -> Result<Arc<SpectralEngine>> {
    SpectralEngine::get(params, quad)
}
