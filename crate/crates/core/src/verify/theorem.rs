//! Integrability of |F f|^s read off partial integrals over doubling bands.

use super::checks::Context;
use super::{report_id, CheckKind, InequalityReport, ScenarioConfig, TestFunction};
use crate::besov::{decay_exponent, MEMBERSHIP_MARGIN};
use crate::error::{Error, Result};
use crate::quadrature::NeumaierSum;
use crate::spectral::{forward_on_nodes, SpectralEngine};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// Successive increments must shrink at least by this factor.
pub const GEOMETRIC_RATIO: f64 = 0.5;

/// Increments within this multiple of their noise estimate count as zero.
pub const NOISE_MULTIPLE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceVerdict {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Partial integrals I(T) = ∫_0^T |S|^s dλ/|c|² and their increments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementStudy {
    pub s: f64,
    pub truncations: Vec<f64>,
    pub partial: Vec<f64>,
    /// I(T₀), then I(T_k) − I(T_{k−1}).
    pub increments: Vec<f64>,
    pub increment_noise: Vec<f64>,
    /// Ratio of consecutive resolved increments; `None` when a resolved
    /// increment follows an unresolved one.
    pub ratios: Vec<Option<f64>>,
    pub verdict: ConvergenceVerdict,
}

impl IncrementStudy {
    /// Largest finite ratio, or zero if there is none.
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().flatten().fold(0.0, |m, r| m.max(*r))
    }
}

/// Bands are taken at node resolution: a node belongs to the first band
/// whose truncation exceeds it.
pub fn increment_study(
    engine: &SpectralEngine,
    values: &[f64],
    noise: &[f64],
    s: f64,
    truncations: &[f64],
) -> Result<IncrementStudy> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("integrability exponent must be positive, got {s}")));
    }
    let cutoff = engine.quad.spectral_cutoff;
    if truncations.last().is_some_and(|t| *t > cutoff * (1.0 + 1e-12)) {
        return Err(Error::Config(format!("truncations exceed the spectral cutoff {cutoff}")));
    }
    let n = truncations.len();
    let mut inc = vec![NeumaierSum::default(); n];
    let mut err = vec![NeumaierSum::default(); n];
    for ((&l, &w), (&v, &e)) in engine.lambda_nodes().iter().zip(&engine.lambda_weights).zip(values.iter().zip(noise)) {
        let Some(band) = truncations.iter().position(|&t| l < t) else { continue };
        let a = v.abs();
        inc[band].add(w * a.powf(s));
        err[band].add(w * ((a + e).powf(s) - a.powf(s)));
    }
    let increments: Vec<f64> = inc.iter().map(NeumaierSum::total).collect();
    let increment_noise: Vec<f64> = err.iter().map(NeumaierSum::total).collect();
    let mut partial = Vec::with_capacity(n);
    let mut run = NeumaierSum::default();
    for d in &increments {
        run.add(*d);
        partial.push(run.total());
    }
    let resolved: Vec<bool> = increments
        .iter()
        .zip(&increment_noise)
        .map(|(d, e)| *d > NOISE_MULTIPLE * e)
        .collect();
    let eff: Vec<f64> = increments.iter().zip(&resolved).map(|(d, r)| if *r { *d } else { 0.0 }).collect();
    let ratios: Vec<Option<f64>> = eff
        .windows(2)
        .map(|w| {
            if w[0] > 0.0 {
                Some(w[1] / w[0])
            } else if w[1] == 0.0 {
                Some(0.0)
            } else {
                None
            }
        })
        .collect();
    let verdict = if !resolved.first().copied().unwrap_or(false) {
        ConvergenceVerdict::Inconclusive
    } else if ratios.iter().all(|r| r.is_some_and(|r| r <= GEOMETRIC_RATIO)) {
        ConvergenceVerdict::Convergent
    } else {
        let last = (1..n).rev().find(|&k| resolved[k]).map(|k| ratios[k - 1]);
        match last {
            Some(None) => ConvergenceVerdict::Divergent,
            Some(Some(r)) if r >= 1.0 => ConvergenceVerdict::Divergent,
            _ => ConvergenceVerdict::Inconclusive,
        }
    };
    Ok(IncrementStudy {
        s,
        truncations: truncations.to_vec(),
        partial,
        increments,
        increment_noise,
        ratios,
        verdict,
    })
}

/// Lower end 2(α+1)p / (γp + 2(α+1)(p−1)) of the predicted range of s.
pub fn predicted_threshold(alpha: f64, gamma: f64, p: f64) -> f64 {
    let a = 2.0 * (alpha + 1.0);
    a * p / (gamma * p + a * (p - 1.0))
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

fn study_meta(study: &IncrementStudy, meta: &mut BTreeMap<String, Value>) {
    let arr = |v: &[f64]| Value::Array(v.iter().map(|x| Value::from(*x)).collect());
    meta.insert("s".into(), study.s.into());
    meta.insert("truncations".into(), arr(&study.truncations));
    meta.insert("partial_integrals".into(), arr(&study.partial));
    meta.insert("increments".into(), arr(&study.increments));
    meta.insert("increment_noise".into(), arr(&study.increment_noise));
    meta.insert(
        "increment_ratios".into(),
        Value::Array(study.ratios.iter().map(|r| r.map_or(Value::Null, Value::from)).collect()),
    );
    meta.insert("verdict".into(), serde_json::to_value(study.verdict).unwrap_or(Value::Null));
}

/// lhs is the largest increment ratio, rhs the geometric threshold; `pass`
/// is false only when a convergent prediction meets a divergent verdict, or
/// when an exact expectation is not met.
fn verdict_report(
    id: String,
    study: &IncrementStudy,
    expected: Option<ConvergenceVerdict>,
    exact: bool,
    mut meta: BTreeMap<String, Value>,
) -> InequalityReport {
    study_meta(study, &mut meta);
    meta.insert(
        "prediction".into(),
        expected.map_or(Value::from("none"), |e| serde_json::to_value(e).unwrap_or(Value::Null)),
    );
    let pass = match expected {
        None => true,
        Some(e) if exact => study.verdict == e,
        Some(ConvergenceVerdict::Convergent) => study.verdict != ConvergenceVerdict::Divergent,
        Some(e) => study.verdict == e || study.verdict == ConvergenceVerdict::Inconclusive,
    };
    let lhs = study.max_ratio();
    InequalityReport {
        scenario_id: id,
        lhs,
        rhs: GEOMETRIC_RATIO,
        ratio: lhs / GEOMETRIC_RATIO,
        fitted_constant: 1.0,
        pass,
        metadata: meta,
    }
}

fn function_study_report(
    cfg: &ScenarioConfig,
    label: &str,
    engine: &SpectralEngine,
    values: &[f64],
    noise: &[f64],
    p: f64,
    s: f64,
    gamma_hat: Option<f64>,
) -> Result<InequalityReport> {
    let alpha = cfg.params.alpha;
    let study = increment_study(engine, values, noise, s, &cfg.truncations)?;
    let pc = conjugate(p);
    let mut meta = BTreeMap::new();
    meta.insert("check".into(), CheckKind::Theorems.name().into());
    meta.insert("function".into(), label.into());
    meta.insert("p".into(), p.into());
    meta.insert("gamma_hat".into(), gamma_hat.map_or(Value::Null, Value::from));
    let in_range = match gamma_hat {
        Some(g) => {
            let gamma = g - MEMBERSHIP_MARGIN;
            let th = predicted_threshold(alpha, gamma, p);
            meta.insert("gamma_used".into(), gamma.into());
            meta.insert("threshold".into(), th.into());
            gamma > 0.0 && s > th && s <= pc
        }
        // s = p' needs no smoothness beyond f ∈ L^p
        None => s == pc,
    };
    meta.insert("in_predicted_range".into(), in_range.into());
    let expected = in_range.then_some(ConvergenceVerdict::Convergent);
    let id = report_id(cfg, CheckKind::Theorems, label, p, Some(format!("s={s}")));
    Ok(verdict_report(id, &study, expected, false, meta))
}

/// Partial-integral study of |F f|^s. With a fitted modulus exponent γ̂ the
/// prediction is convergence for s in (threshold(γ̂ − margin), p']; without
/// one only s = p' is predicted.
pub fn theorem_integrability_check(
    cfg: &ScenarioConfig,
    f: &TestFunction,
    p: f64,
    s: f64,
    gamma_hat: Option<f64>,
) -> Result<InequalityReport> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Config(format!("integrability check needs 1 < p <= 2, got {p}")));
    }
    let params = cfg.jacobi()?;
    let quad = cfg.theorem_quadrature();
    let engine = SpectralEngine::get(&params, &quad)?;
    let (spec, noise) = forward_on_nodes(&f.grid, &params, &quad)?;
    function_study_report(cfg, &f.label, &engine, &spec.values, &noise, p, s, gamma_hat)
}

/// Reports for s = p', the midpoint of the predicted range and s = 1.
pub(crate) fn theorem_reports(ctx: &mut Context<'_>, p: f64) -> Result<Vec<InequalityReport>> {
    let cfg = ctx.cfg;
    let f = ctx.f;
    let gamma_hat = match decay_exponent(&f.grid, p, &ctx.params, cfg.decay_range, &cfg.quadrature) {
        Ok(prof) => Some(prof.fitted_exponent),
        Err(Error::Accuracy { .. }) => None,
        Err(e) => return Err(e),
    };
    let pc = conjugate(p);
    let mut s_values = vec![pc];
    if let Some(g) = gamma_hat {
        let th = predicted_threshold(cfg.params.alpha, g - MEMBERSHIP_MARGIN, p);
        if g > MEMBERSHIP_MARGIN && th < pc {
            s_values.push(0.5 * (th + pc));
        }
    }
    if !s_values.contains(&1.0) {
        s_values.push(1.0);
    }
    let quad = cfg.theorem_quadrature();
    let engine = SpectralEngine::get(&ctx.params, &quad)?;
    let (spec, noise) = forward_on_nodes(&f.grid, &ctx.params, &quad)?;
    s_values
        .into_iter()
        .map(|s| function_study_report(cfg, &f.label, &engine, &spec.values, &noise, p, s, gamma_hat))
        .collect()
}

/// Spectrum (1 + λ²)^{−m/2} with m = γ + 2(α+1)/p', for which |S|^s is
/// integrable exactly when s exceeds the predicted threshold at γ. The
/// expected verdict is exact: divergent below, convergent above.
pub fn synthetic_spectrum_check(cfg: &ScenarioConfig, gamma: f64, p: f64, s: f64) -> Result<InequalityReport> {
    if !(p > 1.0 && p <= 2.0 && gamma > 0.0) {
        return Err(Error::Config(format!("synthetic spectrum needs 1 < p <= 2 and gamma > 0, got p = {p}, gamma = {gamma}")));
    }
    let params = cfg.jacobi()?;
    let alpha = params.alpha();
    let m = gamma + 2.0 * (alpha + 1.0) / conjugate(p);
    let engine = SpectralEngine::get(&params, &cfg.theorem_quadrature())?;
    let values: Vec<f64> = engine.lambda_nodes().iter().map(|&l| (1.0 + l * l).powf(-0.5 * m)).collect();
    let noise: Vec<f64> = values.iter().map(|v| v * 4.0 * f64::EPSILON).collect();
    let study = increment_study(&engine, &values, &noise, s, &cfg.truncations)?;
    let th = predicted_threshold(alpha, gamma, p);
    let expected = if s > th {
        ConvergenceVerdict::Convergent
    } else {
        ConvergenceVerdict::Divergent
    };
    let mut meta = BTreeMap::new();
    meta.insert("check".into(), CheckKind::Theorems.name().into());
    meta.insert("function".into(), "synthetic".into());
    meta.insert("p".into(), p.into());
    meta.insert("gamma".into(), gamma.into());
    meta.insert("decay_order".into(), m.into());
    meta.insert("threshold".into(), th.into());
    let id = report_id(cfg, CheckKind::Theorems, "synthetic", p, Some(format!("gamma={gamma}/s={s}")));
    Ok(verdict_report(id, &study, Some(expected), true, meta))
}
