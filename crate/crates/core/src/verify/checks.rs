//! The δ-indexed inequality checks and the weighted Hardy–Littlewood check.

use super::{report_id, CheckKind, InequalityReport, ScenarioConfig, TestFunction};
use crate::besov::noise_floor;
use crate::error::{Error, Result};
use crate::hypergroup::{plancherel_density, JacobiParams};
use crate::quadrature::{CompositeRule, NeumaierSum};
use crate::spectral::{forward_on_nodes, lp_norm_weighted, modulus_of_continuity, SpectralEngine, ORIGIN_GRADING};
use serde_json::Value;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Largest share of the Hardy–Littlewood integral allowed in [Λ/2, Λ].
pub const HL_TAIL_SHARE: f64 = 0.01;

/// x³ for x ≤ k and x^{2(α+1)} above.
pub fn g_weight(params: &JacobiParams, x: f64, k: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("g weight needs x > 0, got {x}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("g weight needs k > 0, got {k}")));
    }
    Ok(g_unchecked(params, x, k))
}

fn g_unchecked(params: &JacobiParams, x: f64, k: f64) -> f64 {
    if x <= k {
        x * x * x
    } else {
        x.powf(2.0 * (params.alpha() + 1.0))
    }
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// ∫_a^b h(λ, S(λ)) dλ/|c(λ)|² with S interpolated from node values. Bands
/// starting at the origin get a graded rule so that integrable singularities
/// of h at λ = 0 are resolved.
pub(crate) fn band_integral(
    engine: &SpectralEngine,
    values: &[f64],
    a: f64,
    b: f64,
    h: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let cutoff = engine.quad.spectral_cutoff;
    let (a, b) = (a.max(0.0), b.min(cutoff));
    if !(b > a) {
        return Ok(0.0);
    }
    let panels = (engine.quad.spectral_panels as f64 * (b - a) / cutoff - 1e-9).ceil().max(1.0) as usize;
    let order = engine.quad.points_per_panel;
    let rule = if a == 0.0 {
        CompositeRule::graded(0.0, b, panels, order, 2 * ORIGIN_GRADING)
    } else {
        CompositeRule::uniform(a, b, panels, order)
    };
    let mut acc = NeumaierSum::default();
    for (&l, &w) in rule.nodes.iter().zip(&rule.weights) {
        let s = engine.interpolate_nodes(values, l);
        acc.add(w * plancherel_density(&engine.params, l)? * h(l, s));
    }
    Ok(acc.total())
}

/// max of h(λ, S(λ)) over the λ nodes inside [a, b].
fn band_sup(engine: &SpectralEngine, values: &[f64], a: f64, b: f64, h: impl Fn(f64, f64) -> f64) -> f64 {
    engine
        .lambda_nodes()
        .iter()
        .zip(values)
        .filter(|(l, _)| **l >= a && **l <= b)
        .fold(0.0, |m, (&l, &s)| m.max(h(l, s)))
}

/// Per-function cache shared by all checks of one scenario job.
pub(crate) struct Context<'a> {
    pub cfg: &'a ScenarioConfig,
    pub f: &'a TestFunction,
    pub params: JacobiParams,
    engine: Arc<SpectralEngine>,
    spectrum: Option<Vec<f64>>,
    floors: BTreeMap<u64, f64>,
    norms: BTreeMap<u64, f64>,
    omegas: BTreeMap<(u64, u64), f64>,
}

impl<'a> Context<'a> {
    pub fn new(cfg: &'a ScenarioConfig, f: &'a TestFunction) -> Result<Self> {
        let params = cfg.jacobi()?;
        Ok(Self {
            cfg,
            f,
            params,
            engine: SpectralEngine::get(&params, &cfg.quadrature)?,
            spectrum: None,
            floors: BTreeMap::new(),
            norms: BTreeMap::new(),
            omegas: BTreeMap::new(),
        })
    }

    fn spectrum(&mut self) -> Result<Vec<f64>> {
        if self.spectrum.is_none() {
            let (s, _) = forward_on_nodes(&self.f.grid, &self.params, &self.cfg.quadrature)?;
            self.spectrum = Some(s.values);
        }
        Ok(self.spectrum.clone().unwrap_or_default())
    }

    fn norm(&mut self, p: f64) -> Result<f64> {
        if let Some(v) = self.norms.get(&p.to_bits()) {
            return Ok(*v);
        }
        let v = lp_norm_weighted(&self.f.grid, &self.params, p, &self.cfg.quadrature)?;
        self.norms.insert(p.to_bits(), v);
        Ok(v)
    }

    pub fn floor(&mut self, p: f64) -> Result<f64> {
        if let Some(v) = self.floors.get(&p.to_bits()) {
            return Ok(*v);
        }
        let v = noise_floor(&self.f.grid, p, &self.params, &self.cfg.quadrature)?;
        self.floors.insert(p.to_bits(), v);
        Ok(v)
    }

    /// ω_{A,p}(f, δ), refused when it does not clear the noise floor.
    pub fn omega(&mut self, p: f64, delta: f64) -> Result<f64> {
        let key = (p.to_bits(), delta.to_bits());
        let w = match self.omegas.get(&key) {
            Some(w) => *w,
            None => {
                let w = modulus_of_continuity(&self.f.grid, delta, p, &self.params, &self.cfg.quadrature)?;
                self.omegas.insert(key, w);
                w
            }
        };
        let floor = self.floor(p)?;
        if !self.f.grid.is_zero() && w <= floor {
            return Err(Error::accuracy(
                format!("modulus {w:e} at delta = {delta} is below the noise floor {floor:e}"),
                Some(floor),
            ));
        }
        Ok(w)
    }

    fn base_meta(&self, check: CheckKind, p: f64) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("check".into(), check.name().into());
        m.insert("function".into(), self.f.label.clone().into());
        m.insert("p".into(), p.into());
        m
    }

    pub fn hardy_littlewood(&mut self, p: f64) -> Result<InequalityReport> {
        let check = CheckKind::HardyLittlewood;
        if !check.admits_p(p) {
            return Err(Error::Config(format!("Hardy-Littlewood check needs 1 < p <= 2, got {p}")));
        }
        let values = self.spectrum()?;
        let (params, k) = (self.params, self.cfg.params.k_threshold);
        let cutoff = self.engine.quad.spectral_cutoff;
        let h = |l: f64, s: f64| g_unchecked(&params, l, k).powf(p - 2.0) * s.abs().powf(p);
        let lhs = band_integral(&self.engine, &values, 0.0, cutoff, h)?;
        let tail = band_integral(&self.engine, &values, 0.5 * cutoff, cutoff, h)?;
        if tail > HL_TAIL_SHARE * lhs {
            return Err(Error::accuracy(
                format!("Hardy-Littlewood integrand keeps {:e} of its mass in [{}, {cutoff}]", tail / lhs, 0.5 * cutoff),
                Some(tail),
            ));
        }
        let rhs = self.norm(p)?.powf(p);
        let mut meta = self.base_meta(check, p);
        meta.insert("k_threshold".into(), k.into());
        meta.insert("tail_estimate".into(), tail.into());
        let id = report_id(self.cfg, check, &self.f.label, p, None);
        InequalityReport::measured(id, lhs, rhs, self.cfg.slack, meta)
    }

    pub fn delta_check(&mut self, check: CheckKind, p: f64, delta: f64) -> Result<InequalityReport> {
        if !check.admits_p(p) || !check.uses_delta() {
            return Err(Error::Config(format!("check {} does not accept p = {p} with a delta", check.name())));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Domain(format!("delta must be positive, got {delta}")));
        }
        let values = self.spectrum()?;
        let engine = self.engine.clone();
        let cutoff = engine.quad.spectral_cutoff;
        let q = conjugate(p);
        let top = 1.0 / delta;
        let (params, k) = (self.params, self.cfg.params.k_threshold);
        let mut meta = self.base_meta(check, p);
        meta.insert("delta".into(), delta.into());

        let lhs = match check {
            CheckKind::Lemma2 => {
                if q.is_infinite() {
                    band_sup(&engine, &values, 0.0, cutoff, |l, s| (delta * l).powi(2).min(1.0) * s.abs())
                } else {
                    let i = band_integral(&engine, &values, 0.0, cutoff, |l, s| {
                        (delta * l).powf(2.0 * q).min(1.0) * s.abs().powf(q)
                    })?;
                    i.max(0.0).powf(1.0 / q)
                }
            }
            CheckKind::RiemannLebesgue => {
                meta.insert("band_empty".into(), (top >= cutoff).into());
                if q.is_infinite() {
                    band_sup(&engine, &values, top, cutoff, |_, s| s.abs())
                } else {
                    let i = band_integral(&engine, &values, top, cutoff, |_, s| s.abs().powf(q))?;
                    i.max(0.0).powf(1.0 / q)
                }
            }
            CheckKind::LowFrequency => {
                meta.insert("band_truncated".into(), (top > cutoff).into());
                if q.is_infinite() {
                    band_sup(&engine, &values, 0.0, top, |l, s| (delta * l).powi(2) * s.abs())
                } else {
                    let i = band_integral(&engine, &values, 0.0, top, |l, s| l.powf(2.0 * q) * s.abs().powf(q))?;
                    delta * delta * i.max(0.0).powf(1.0 / q)
                }
            }
            CheckKind::WeightedEstimate => {
                meta.insert("band_truncated".into(), (top > cutoff).into());
                let i = band_integral(&engine, &values, 0.0, top, |l, s| {
                    l.powf(2.0 * p) * s.abs().powf(p) * g_unchecked(&params, l, k).powf(p - 2.0)
                })?;
                delta.powf(2.0 * p) * i.max(0.0)
            }
            _ => unreachable!("guarded by uses_delta"),
        };
        let omega = self.omega(p, delta)?;
        let rhs = if check == CheckKind::WeightedEstimate { omega.powf(p) } else { omega };
        meta.insert("omega".into(), omega.into());
        meta.insert("noise_floor".into(), self.floor(p)?.into());
        let id = report_id(self.cfg, check, &self.f.label, p, Some(format!("delta={delta}")));
        InequalityReport::measured(id, lhs, rhs, self.cfg.slack, meta)
    }
}

/// Weighted Hardy–Littlewood inequality: ∫ g^{p−2}|F f|^p dλ/|c|² against
/// ‖f‖_{A,p}^p, for 1 < p ≤ 2.
pub fn hardy_littlewood_check(cfg: &ScenarioConfig, f: &TestFunction, p: f64) -> Result<InequalityReport> {
    Context::new(cfg, f)?.hardy_littlewood(p)
}

/// (∫ min{1, (δλ)^{2p'}}|F f|^{p'})^{1/p'} against ω_{A,p}(f, δ); at p = 1 the
/// supremum of min{1, (δλ)²}|F f| over the λ nodes.
pub fn lemma2_check(cfg: &ScenarioConfig, f: &TestFunction, p: f64, delta: f64) -> Result<InequalityReport> {
    Context::new(cfg, f)?.delta_check(CheckKind::Lemma2, p, delta)
}

/// High-frequency tail of F f beyond 1/δ against ω_{A,p}(f, δ).
pub fn riemann_lebesgue_check(cfg: &ScenarioConfig, f: &TestFunction, p: f64, delta: f64) -> Result<InequalityReport> {
    Context::new(cfg, f)?.delta_check(CheckKind::RiemannLebesgue, p, delta)
}

/// δ²(∫_0^{1/δ} λ^{2p'}|F f|^{p'})^{1/p'} against ω_{A,p}(f, δ).
pub fn low_frequency_check(cfg: &ScenarioConfig, f: &TestFunction, p: f64, delta: f64) -> Result<InequalityReport> {
    Context::new(cfg, f)?.delta_check(CheckKind::LowFrequency, p, delta)
}

/// δ^{2p}∫_0^{1/δ} λ^{2p}|F f|^p g^{p−2} against ω_{A,p}(f, δ)^p.
pub fn weighted_estimate_check(cfg: &ScenarioConfig, f: &TestFunction, p: f64, delta: f64) -> Result<InequalityReport> {
    Context::new(cfg, f)?.delta_check(CheckKind::WeightedEstimate, p, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_weight_regimes() {
        let q = JacobiParams::new(0.5, 0.5).unwrap();
        assert_eq!(g_weight(&q, 0.5, 1.0).unwrap(), 0.125);
        assert!((g_weight(&q, 2.0, 1.0).unwrap() - 8.0).abs() < 1e-12);
        let r = JacobiParams::new(2.0, 0.5).unwrap();
        assert!((g_weight(&r, 2.0, 1.0).unwrap() - 64.0).abs() < 1e-9);
        assert!(matches!(g_weight(&q, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(g_weight(&q, 1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(conjugate(2.0), 2.0);
        assert_eq!(conjugate(1.5), 3.0);
        assert!(conjugate(1.0).is_infinite());
    }
}
