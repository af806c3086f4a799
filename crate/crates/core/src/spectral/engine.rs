//! Quadrature layout and cached character tables shared by all transforms.

use crate::characters::phi_real;
use crate::error::{Error, Result};
use crate::hypergroup::{plancherel_density, weight_unchecked, JacobiParams};
use crate::interp::legendre_barycentric_weights;
use crate::quadrature::{gauss_legendre, CompositeRule};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Geometric refinement levels of the first x-panel, resolving the algebraic
/// behaviour A(x) ~ x^{2α+1} at the origin.
pub const ORIGIN_GRADING: usize = 6;

/// Discretisation of every integral against A(x)dx and dλ/|c(λ)|².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Largest x any transform or translate may reach.
    pub truncation_radius: f64,
    #[serde(default = "defaults::panels")]
    pub panels: usize,
    #[serde(default = "defaults::points_per_panel")]
    pub points_per_panel: usize,
    /// Tolerance for refinement studies; reported norms must be stable to it.
    #[serde(default = "defaults::rel_tolerance")]
    pub rel_tolerance: f64,
    /// Upper end Λ of the λ-integration.
    #[serde(default = "defaults::spectral_cutoff")]
    pub spectral_cutoff: f64,
    #[serde(default = "defaults::panels")]
    pub spectral_panels: usize,
    /// Spacing of the x-lattice on which inverse transforms are sampled.
    #[serde(default = "defaults::output_spacing")]
    pub output_spacing: f64,
    /// Largest admissible share of spectral L² mass in the top tenth of [0, Λ].
    #[serde(default = "defaults::tail_tolerance")]
    pub tail_tolerance: f64,
}

mod defaults {
    pub fn panels() -> usize {
        64
    }
    pub fn points_per_panel() -> usize {
        16
    }
    pub fn rel_tolerance() -> f64 {
        1e-8
    }
    pub fn spectral_cutoff() -> f64 {
        40.0
    }
    pub fn output_spacing() -> f64 {
        1.0 / 128.0
    }
    pub fn tail_tolerance() -> f64 {
        1e-3
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            truncation_radius: 6.5,
            panels: defaults::panels(),
            points_per_panel: defaults::points_per_panel(),
            rel_tolerance: defaults::rel_tolerance(),
            spectral_cutoff: defaults::spectral_cutoff(),
            spectral_panels: defaults::panels(),
            output_spacing: defaults::output_spacing(),
            tail_tolerance: defaults::tail_tolerance(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !(pos(self.truncation_radius)
            && pos(self.rel_tolerance)
            && pos(self.spectral_cutoff)
            && pos(self.output_spacing)
            && pos(self.tail_tolerance))
        {
            return Err(Error::Config("quadrature lengths and tolerances must be positive".into()));
        }
        if self.panels == 0 || self.spectral_panels == 0 || !(1..=64).contains(&self.points_per_panel) {
            return Err(Error::Config("panel counts must be positive and order in 1..=64".into()));
        }
        Ok(())
    }

    /// Same panel density on a band [0, cutoff].
    pub fn with_spectral_cutoff(&self, cutoff: f64) -> Self {
        let panels = (self.spectral_panels as f64 * cutoff / self.spectral_cutoff).ceil().max(1.0) as usize;
        Self {
            spectral_cutoff: cutoff,
            spectral_panels: panels,
            ..*self
        }
    }

    /// Both panel counts doubled.
    pub fn refined(&self) -> Self {
        Self {
            panels: 2 * self.panels,
            spectral_panels: 2 * self.spectral_panels,
            ..*self
        }
    }

    fn key(&self) -> [u64; 8] {
        [
            self.truncation_radius.to_bits(),
            self.panels as u64,
            self.points_per_panel as u64,
            self.rel_tolerance.to_bits(),
            self.spectral_cutoff.to_bits(),
            self.spectral_panels as u64,
            self.output_spacing.to_bits(),
            self.tail_tolerance.to_bits(),
        ]
    }

    /// x-rule on [0, extent] with the panel width of the full layout on
    /// [0, truncation_radius] (at least four panels).
    pub fn x_rule(&self, extent: f64) -> CompositeRule {
        let n = (self.panels as f64 * extent / self.truncation_radius - 1e-9).ceil().max(4.0) as usize;
        CompositeRule::graded(0.0, extent, n, self.points_per_panel, ORIGIN_GRADING)
    }

    /// Number of lattice steps needed to cover [0, x].
    pub fn lattice_len(&self, x: f64) -> usize {
        (x / self.output_spacing - 1e-9).ceil().max(0.0) as usize
    }
}

/// Characters tabulated on an x-rule, λ-major.
#[derive(Debug)]
pub struct XTable {
    pub extent: f64,
    pub rule: CompositeRule,
    /// w_i · A(x_i)
    pub weighted_a: Vec<f64>,
    /// φ_{λ_j}(x_i) at index j·nx + i
    pub phi: Vec<f64>,
    /// max_i of the character error estimate for each λ_j
    pub phi_err: Vec<f64>,
}

/// Characters on the output lattice k·h, x-major.
#[derive(Debug)]
pub struct LatticeTable {
    pub len: usize,
    /// φ_{λ_j}(k h) at index k·nλ + j
    pub phi: Vec<f64>,
}

/// λ-rule and cached character tables for one (parameters, quadrature) pair.
#[derive(Debug)]
pub struct SpectralEngine {
    pub params: JacobiParams,
    pub quad: QuadratureSpec,
    pub lambda_rule: CompositeRule,
    pub density: Vec<f64>,
    /// w_j · density(λ_j)
    pub lambda_weights: Vec<f64>,
    pub(crate) bary_weights: Vec<f64>,
    pub(crate) ref_nodes: Vec<f64>,
    lattice: OnceLock<std::result::Result<Arc<LatticeTable>, String>>,
    x_tables: Mutex<Vec<Arc<XTable>>>,
}

const X_TABLE_CACHE: usize = 12;

type EngineKey = ((u64, u64), [u64; 8]);

impl SpectralEngine {
    /// Memoised engine for the pair; construction is cheap, tables are lazy.
    pub fn get(params: &JacobiParams, quad: &QuadratureSpec) -> Result<Arc<SpectralEngine>> {
        quad.validate()?;
        static ENGINES: OnceLock<Mutex<HashMap<EngineKey, Arc<SpectralEngine>>>> = OnceLock::new();
        let map = ENGINES.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (params.key(), quad.key());
        if let Some(e) = map.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(e.clone());
        }
        let engine = Arc::new(Self::build(params, quad)?);
        let mut guard = map.lock().unwrap_or_else(|e| e.into_inner());
        Ok(guard.entry(key).or_insert(engine).clone())
    }

    fn build(params: &JacobiParams, quad: &QuadratureSpec) -> Result<Self> {
        let lambda_rule = CompositeRule::uniform(0.0, quad.spectral_cutoff, quad.spectral_panels, quad.points_per_panel);
        let density = lambda_rule
            .nodes
            .iter()
            .map(|&l| plancherel_density(params, l))
            .collect::<Result<Vec<_>>>()?;
        let lambda_weights = lambda_rule.weights.iter().zip(&density).map(|(w, d)| w * d).collect();
        let gl = gauss_legendre(quad.points_per_panel);
        Ok(Self {
            params: *params,
            quad: *quad,
            bary_weights: legendre_barycentric_weights(&gl.0, &gl.1),
            ref_nodes: gl.0.clone(),
            lambda_rule,
            density,
            lambda_weights,
            lattice: OnceLock::new(),
            x_tables: Mutex::new(Vec::new()),
        })
    }

    pub fn lambda_nodes(&self) -> &[f64] {
        &self.lambda_rule.nodes
    }

    pub fn n_lambda(&self) -> usize {
        self.lambda_rule.nodes.len()
    }

    /// True when `grid` is bit-identical to the engine's λ nodes.
    pub fn on_nodes(&self, grid: &[f64]) -> bool {
        grid == self.lambda_rule.nodes.as_slice()
    }

    pub fn x_table(&self, extent: f64) -> Result<Arc<XTable>> {
        if !(extent > 0.0) {
            return Err(Error::Domain("x-extent must be positive".into()));
        }
        if extent > self.quad.truncation_radius * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "function extent {extent} exceeds truncation radius {}",
                self.quad.truncation_radius
            )));
        }
        {
            let cache = self.x_tables.lock().unwrap_or_else(|e| e.into_inner());
            if let Some(t) = cache.iter().find(|t| t.extent.to_bits() == extent.to_bits()) {
                return Ok(t.clone());
            }
        }
        let table = Arc::new(self.build_x_table(extent)?);
        let mut cache = self.x_tables.lock().unwrap_or_else(|e| e.into_inner());
        if cache.len() >= X_TABLE_CACHE {
            cache.remove(0);
        }
        cache.push(table.clone());
        Ok(table)
    }

    /// The x-rule on [0, extent] with w_i · A(x_i), without tabulating characters.
    pub fn x_rule_weights(&self, extent: f64) -> (CompositeRule, Vec<f64>) {
        let rule = self.quad.x_rule(extent);
        let weighted_a = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * weight_unchecked(&self.params, x))
            .collect();
        (rule, weighted_a)
    }

    fn build_x_table(&self, extent: f64) -> Result<XTable> {
        let (rule, weighted_a) = self.x_rule_weights(extent);
        let nx = rule.len();
        let nl = self.n_lambda();
        let mut phi = Vec::with_capacity(nx * nl);
        let mut phi_err = Vec::with_capacity(nl);
        for &l in &self.lambda_rule.nodes {
            let mut worst = 0.0f64;
            for &x in &rule.nodes {
                let e = phi_real(&self.params, l, x)?;
                worst = worst.max(e.est_error);
                phi.push(e.value);
            }
            phi_err.push(worst);
        }
        Ok(XTable {
            extent,
            rule,
            weighted_a,
            phi,
            phi_err,
        })
    }

    pub fn lattice(&self) -> Result<Arc<LatticeTable>> {
        let res = self.lattice.get_or_init(|| {
            let len = self.quad.lattice_len(self.quad.truncation_radius) + 1;
            let nl = self.n_lambda();
            let mut phi = Vec::with_capacity(len * nl);
            for k in 0..len {
                let x = k as f64 * self.quad.output_spacing;
                for &l in &self.lambda_rule.nodes {
                    match phi_real(&self.params, l, x) {
                        Ok(e) => phi.push(e.value),
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
            Ok(Arc::new(LatticeTable { len, phi }))
        });
        res.clone().map_err(|m| Error::accuracy(m, None))
    }

    /// Barycentric interpolation of node values at an arbitrary λ in [0, Λ].
    pub fn interpolate_nodes(&self, values: &[f64], lambda: f64) -> f64 {
        let np = self.quad.spectral_panels;
        let m = self.quad.points_per_panel;
        let width = self.quad.spectral_cutoff / np as f64;
        let p = ((lambda / width).floor() as isize).clamp(0, np as isize - 1) as usize;
        let (lo, hi) = self.lambda_rule.panels[p];
        let t = (2.0 * lambda - lo - hi) / (hi - lo);
        crate::interp::barycentric_eval(&self.ref_nodes, &values[p * m..(p + 1) * m], &self.bary_weights, t)
    }
}
