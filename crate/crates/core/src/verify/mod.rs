//! Scenario harness: measures both sides of the transform inequalities on a
//! family of test functions and writes JSON reports with plot-ready CSVs.
//!
//! No check asserts a particular constant. Each one records lhs, rhs and
//! their ratio; stability of the ratio across δ is what a scenario judges.

mod checks;
mod theorem;

pub use checks::{
    g_weight, hardy_littlewood_check, lemma2_check, low_frequency_check, riemann_lebesgue_check,
    weighted_estimate_check,
};
pub use theorem::{
    increment_study, predicted_threshold, synthetic_spectrum_check, theorem_integrability_check, ConvergenceVerdict,
    IncrementStudy, GEOMETRIC_RATIO, NOISE_MULTIPLE,
};

use crate::characters::{character_bound, CharacterBound};
use crate::error::{Error, Result};
use crate::families::by_name;
use crate::hypergroup::{check_density_bounds, DensityBounds, HypergroupConfig, JacobiParams};
use crate::io::{sha256_hex, write_csv, write_json};
use crate::spectral::{GridFunction, QuadratureSpec};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// The inequality checks a scenario can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    HardyLittlewood,
    Lemma2,
    RiemannLebesgue,
    LowFrequency,
    #[serde(rename = "eq12")]
    WeightedEstimate,
    Theorems,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::HardyLittlewood,
        CheckKind::Lemma2,
        CheckKind::RiemannLebesgue,
        CheckKind::LowFrequency,
        CheckKind::WeightedEstimate,
        CheckKind::Theorems,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::HardyLittlewood => "hardy-littlewood",
            CheckKind::Lemma2 => "lemma2",
            CheckKind::RiemannLebesgue => "riemann-lebesgue",
            CheckKind::LowFrequency => "low-frequency",
            CheckKind::WeightedEstimate => "eq12",
            CheckKind::Theorems => "theorems",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown check '{s}'")))
    }

    /// Exponents the check is defined for.
    pub fn admits_p(self, p: f64) -> bool {
        match self {
            CheckKind::HardyLittlewood | CheckKind::WeightedEstimate | CheckKind::Theorems => p > 1.0 && p <= 2.0,
            _ => (1.0..=2.0).contains(&p),
        }
    }

    /// Whether the check is indexed by δ.
    pub fn uses_delta(self) -> bool {
        !matches!(self, CheckKind::HardyLittlewood | CheckKind::Theorems)
    }
}

/// A bundled function, optionally dilated: f_a(x) = f(a x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "DescriptorRepr", into = "DescriptorRepr")]
pub struct FunctionDescriptor {
    pub name: String,
    pub dilation: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DescriptorRepr {
    Name(String),
    Full {
        name: String,
        #[serde(default = "one")]
        dilation: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl From<DescriptorRepr> for FunctionDescriptor {
    fn from(r: DescriptorRepr) -> Self {
        match r {
            DescriptorRepr::Name(name) => Self { name, dilation: 1.0 },
            DescriptorRepr::Full { name, dilation } => Self { name, dilation },
        }
    }
}

impl From<FunctionDescriptor> for DescriptorRepr {
    fn from(d: FunctionDescriptor) -> Self {
        if d.dilation == 1.0 {
            DescriptorRepr::Name(d.name)
        } else {
            DescriptorRepr::Full {
                name: d.name,
                dilation: d.dilation,
            }
        }
    }
}

impl FunctionDescriptor {
    pub fn label(&self) -> String {
        if self.dilation == 1.0 {
            self.name.clone()
        } else {
            format!("{}@{}", self.name, self.dilation)
        }
    }

    pub fn build(&self, spacing: f64) -> Result<TestFunction> {
        let member = by_name(&self.name)?;
        let base = member.sample(spacing)?;
        let grid = if self.dilation == 1.0 {
            base
        } else {
            base.dilated(self.dilation, member.native_spacing.unwrap_or(spacing))?
        };
        Ok(TestFunction {
            label: self.label(),
            grid,
        })
    }
}

/// A sampled function with the label used in report identifiers.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub label: String,
    pub grid: GridFunction,
}

impl TestFunction {
    pub fn new(label: impl Into<String>, grid: GridFunction) -> Self {
        Self {
            label: label.into(),
            grid,
        }
    }
}

/// Prescribed power-law spectrum for the convergence-verdict calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub gamma: f64,
    pub p: f64,
    pub s_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    pub params: HypergroupConfig,
    #[serde(default)]
    pub functions: Vec<FunctionDescriptor>,
    pub p_values: Vec<f64>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    pub delta_grid: Vec<f64>,
    /// Frequencies for the density-bound report.
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
    /// Frequencies and radii for the character-bound report.
    #[serde(default = "default_character_lambda_grid")]
    pub character_lambda_grid: Vec<f64>,
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Relative slack in lhs ≤ C·rhs·(1 + slack).
    #[serde(default = "default_slack")]
    pub slack: f64,
    /// Largest admissible max/min ratio across δ for one function.
    #[serde(default = "default_spread_limit")]
    pub spread_limit: f64,
    /// δ-range of the modulus fit that feeds the integrability predictions.
    #[serde(default = "default_decay_range")]
    pub decay_range: (f64, f64),
    /// Truncations T of the partial integrals ∫_0^T |F f|^s.
    #[serde(default = "default_truncations")]
    pub truncations: Vec<f64>,
    #[serde(default)]
    pub synthetic: Option<SyntheticSpec>,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
}

fn default_lambda_grid() -> Vec<f64> {
    crate::besov::log_spaced(1e-3, 1e3, 61)
}

fn default_character_lambda_grid() -> Vec<f64> {
    crate::besov::log_spaced(1.0, 20.0, 50)
}

fn default_t_grid() -> Vec<f64> {
    crate::besov::log_spaced(1e-2, 5.0, 50)
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("reports")
}

fn default_slack() -> f64 {
    1e-6
}

fn default_spread_limit() -> f64 {
    10.0
}

fn default_decay_range() -> (f64, f64) {
    (1e-2, 1e-1)
}

fn default_truncations() -> Vec<f64> {
    vec![10.0, 20.0, 40.0, 80.0]
}

fn default_checks() -> Vec<CheckKind> {
    CheckKind::ALL.to_vec()
}

impl ScenarioConfig {
    /// Defaults for everything but the identifier, parameters and grids.
    pub fn new(scenario_id: impl Into<String>, params: HypergroupConfig, p_values: Vec<f64>, delta_grid: Vec<f64>) -> Self {
        Self {
            scenario_id: scenario_id.into(),
            params,
            functions: Vec::new(),
            p_values,
            quadrature: QuadratureSpec::default(),
            delta_grid,
            lambda_grid: default_lambda_grid(),
            character_lambda_grid: default_character_lambda_grid(),
            t_grid: default_t_grid(),
            output_dir: default_output_dir(),
            slack: default_slack(),
            spread_limit: default_spread_limit(),
            decay_range: default_decay_range(),
            truncations: default_truncations(),
            synthetic: None,
            checks: default_checks(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn jacobi(&self) -> Result<JacobiParams> {
        self.params.params()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        self.params.params()?;
        self.quadrature.validate()?;
        if self.scenario_id.is_empty() {
            return bad("scenario_id must not be empty".into());
        }
        if self.p_values.is_empty() {
            return bad("p_values must not be empty".into());
        }
        if let Some(p) = self.p_values.iter().find(|p| !(**p >= 1.0 && **p <= 2.0)) {
            return bad(format!("p = {p} lies outside [1, 2]"));
        }
        let positive = |v: &[f64]| v.iter().all(|x| x.is_finite() && *x > 0.0);
        if !positive(&self.delta_grid)
            || !positive(&self.lambda_grid)
            || !positive(&self.character_lambda_grid)
            || !positive(&self.t_grid)
        {
            return bad("delta, lambda and t grids must hold positive finite values".into());
        }
        if !(self.slack >= 0.0 && self.slack.is_finite()) || !(self.spread_limit >= 1.0) {
            return bad("slack must be >= 0 and spread_limit >= 1".into());
        }
        let (lo, hi) = self.decay_range;
        if !(lo >= 1e-4 && hi <= 1.0 && lo < hi) {
            return bad(format!("decay_range ({lo}, {hi}) must lie inside [1e-4, 1]"));
        }
        if self.truncations.is_empty()
            || !positive(&self.truncations)
            || self.truncations.windows(2).any(|w| w[1] <= w[0])
        {
            return bad("truncations must be positive and increasing".into());
        }
        if let Some(s) = &self.synthetic {
            if !(s.gamma > 0.0 && s.p > 1.0 && s.p <= 2.0 && positive(&s.s_values)) {
                return bad("synthetic spectrum needs gamma > 0, p in (1, 2] and positive s values".into());
            }
        }
        Ok(())
    }

    /// Quadrature for the partial integrals: same panel width, band up to the
    /// largest truncation.
    pub fn theorem_quadrature(&self) -> QuadratureSpec {
        let top = *self.truncations.last().unwrap_or(&self.quadrature.spectral_cutoff);
        self.quadrature.with_spectral_cutoff(top)
    }

    /// Configuration hash that ignores where the outputs go.
    pub fn fingerprint(&self) -> Result<String> {
        let mut c = self.clone();
        c.output_dir = PathBuf::new();
        Ok(sha256_hex(serde_json::to_string(&c)?.as_bytes()))
    }
}

/// One measured inequality. `pass` is lhs ≤ fitted_constant·rhs·(1 + slack),
/// except for integrability reports where it records agreement with the
/// predicted verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub scenario_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub fitted_constant: f64,
    pub pass: bool,
    pub metadata: BTreeMap<String, Value>,
}

impl InequalityReport {
    /// Report with the ratio as its own constant; [`run_scenario`] replaces
    /// it with the family maximum.
    pub(crate) fn measured(
        scenario_id: String,
        lhs: f64,
        rhs: f64,
        slack: f64,
        metadata: BTreeMap<String, Value>,
    ) -> Result<Self> {
        let ratio = ratio_of(lhs, rhs)?;
        let mut r = Self {
            scenario_id,
            lhs,
            rhs,
            ratio,
            fitted_constant: ratio,
            pass: true,
            metadata,
        };
        r.set_constant(ratio, slack);
        Ok(r)
    }

    pub fn set_constant(&mut self, c: f64, slack: f64) {
        self.fitted_constant = c;
        self.pass = self.lhs <= c * self.rhs * (1.0 + slack);
        self.metadata.insert("slack".into(), slack.into());
    }

    pub fn meta_f64(&self, key: &str) -> Option<f64> {
        self.metadata.get(key).and_then(Value::as_f64)
    }

    pub fn meta_str(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).and_then(Value::as_str)
    }
}

pub(crate) fn ratio_of(lhs: f64, rhs: f64) -> Result<f64> {
    if !(lhs >= 0.0 && rhs >= 0.0 && lhs.is_finite() && rhs.is_finite()) {
        return Err(Error::accuracy(format!("non-finite or negative sides lhs = {lhs}, rhs = {rhs}"), None));
    }
    if rhs == 0.0 {
        if lhs == 0.0 {
            return Ok(0.0);
        }
        return Err(Error::BoundViolation(format!("lhs = {lhs} against a vanishing rhs")));
    }
    Ok(lhs / rhs)
}

/// max/min of the positive ratios of one (check, function, p) across δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadReport {
    pub check: CheckKind,
    pub function: String,
    pub p: f64,
    pub points: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub spread: f64,
    pub limit: f64,
    pub pass: bool,
}

impl SpreadReport {
    pub fn from_ratios(check: CheckKind, function: &str, p: f64, ratios: &[f64], limit: f64) -> Self {
        let pos: Vec<f64> = ratios.iter().copied().filter(|r| *r > 0.0).collect();
        let (min, max) = pos.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
        let spread = if pos.is_empty() { 1.0 } else { max / min };
        Self {
            check,
            function: function.to_string(),
            p,
            points: ratios.len(),
            min_ratio: if pos.is_empty() { 0.0 } else { min },
            max_ratio: max,
            spread,
            limit,
            pass: spread <= limit,
        }
    }
}

/// A check point skipped because one side fell below the numerical noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Censored {
    pub scenario_id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSection {
    pub check: CheckKind,
    pub reports: Vec<InequalityReport>,
    pub spreads: Vec<SpreadReport>,
    pub censored: Vec<Censored>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub reports: usize,
    pub failed_reports: usize,
    pub failed_spreads: usize,
    pub censored: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario_id: String,
    pub params: HypergroupConfig,
    pub config_sha256: String,
    pub checks: Vec<CheckSection>,
    pub character_bound: CharacterBound,
    pub density_bounds: DensityBounds,
    pub summary: Summary,
}

impl ScenarioReport {
    pub fn all_reports(&self) -> impl Iterator<Item = &InequalityReport> {
        self.checks.iter().flat_map(|c| c.reports.iter())
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed_reports == 0 && self.summary.failed_spreads == 0
    }

    pub fn section(&self, check: CheckKind) -> Option<&CheckSection> {
        self.checks.iter().find(|c| c.check == check)
    }
}

pub(crate) fn report_id(cfg: &ScenarioConfig, check: CheckKind, function: &str, p: f64, tail: Option<String>) -> String {
    let mut id = format!("{}/{}/{}/p={}", cfg.scenario_id, check.name(), function, p);
    if let Some(t) = tail {
        id.push('/');
        id.push_str(&t);
    }
    id
}

/// Result of one job: reports or censoring notes, in job order.
enum Outcome {
    Report(InequalityReport),
    Censored(Censored),
}

fn classify(id: String, r: Result<InequalityReport>, check: CheckKind, label: &str) -> Result<Outcome> {
    match r {
        Ok(rep) => Ok(Outcome::Report(rep)),
        Err(Error::Accuracy { message, .. }) => Ok(Outcome::Censored(Censored { scenario_id: id, message })),
        Err(e) => Err(Error::Config(format!("check {} on {label} failed: {e}", check.name()))),
    }
}

fn run_function(cfg: &ScenarioConfig, checks: &[CheckKind], f: &TestFunction) -> Result<Vec<(CheckKind, Outcome)>> {
    let mut ctx = checks::Context::new(cfg, f)?;
    let mut out = Vec::new();
    for &check in checks {
        for &p in cfg.p_values.iter().filter(|p| check.admits_p(**p)) {
            match check {
                CheckKind::HardyLittlewood => {
                    let id = report_id(cfg, check, &f.label, p, None);
                    out.push((check, classify(id, ctx.hardy_littlewood(p), check, &f.label)?));
                }
                CheckKind::Theorems => {
                    for r in theorem::theorem_reports(&mut ctx, p)? {
                        out.push((check, Outcome::Report(r)));
                    }
                }
                _ => {
                    for &d in &cfg.delta_grid {
                        let id = report_id(cfg, check, &f.label, p, Some(format!("delta={d}")));
                        out.push((check, classify(id, ctx.delta_check(check, p, d), check, &f.label)?));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Runs every configured check over the function family. Functions are
/// processed in parallel; the merge is ordered by check, then function, p
/// and δ as configured, so output is independent of scheduling.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    run_checks(cfg, &cfg.checks)
}

pub fn run_checks(cfg: &ScenarioConfig, checks: &[CheckKind]) -> Result<ScenarioReport> {
    cfg.validate()?;
    let params = cfg.jacobi()?;
    let functions = cfg
        .functions
        .iter()
        .map(|d| d.build(cfg.quadrature.output_spacing))
        .collect::<Result<Vec<_>>>()?;

    let per_function: Vec<Result<Vec<(CheckKind, Outcome)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = functions
            .iter()
            .map(|f| scope.spawn(move || run_function(cfg, checks, f)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Config("a check job panicked".into()))))
            .collect()
    });

    let mut sections: Vec<CheckSection> = checks
        .iter()
        .map(|&check| CheckSection {
            check,
            reports: Vec::new(),
            spreads: Vec::new(),
            censored: Vec::new(),
        })
        .collect();
    for res in per_function {
        for (check, outcome) in res? {
            let sec = sections.iter_mut().find(|s| s.check == check).expect("section exists");
            match outcome {
                Outcome::Report(r) => sec.reports.push(r),
                Outcome::Censored(c) => sec.censored.push(c),
            }
        }
    }
    if checks.contains(&CheckKind::Theorems) {
        if let Some(syn) = &cfg.synthetic {
            let sec = sections.iter_mut().find(|s| s.check == CheckKind::Theorems).expect("section exists");
            for &s in &syn.s_values {
                sec.reports.push(synthetic_spectrum_check(cfg, syn.gamma, syn.p, s)?);
            }
        }
    }
    for sec in &mut sections {
        finalize_section(cfg, sec);
    }

    let bound = character_bound(&params, &cfg.character_lambda_grid, &cfg.t_grid)?;
    let density = check_density_bounds(&params, &cfg.lambda_grid, cfg.params.k_threshold)?;
    let summary = Summary {
        reports: sections.iter().map(|s| s.reports.len()).sum(),
        failed_reports: sections.iter().flat_map(|s| &s.reports).filter(|r| !r.pass).count(),
        failed_spreads: sections.iter().flat_map(|s| &s.spreads).filter(|r| !r.pass).count(),
        censored: sections.iter().map(|s| s.censored.len()).sum(),
    };
    Ok(ScenarioReport {
        scenario_id: cfg.scenario_id.clone(),
        params: cfg.params,
        config_sha256: cfg.fingerprint()?,
        checks: sections,
        character_bound: bound,
        density_bounds: density,
        summary,
    })
}

/// Family constant per p and, for δ-indexed checks, spread across δ.
fn finalize_section(cfg: &ScenarioConfig, sec: &mut CheckSection) {
    if sec.check == CheckKind::Theorems {
        return;
    }
    let mut by_p: BTreeMap<u64, f64> = BTreeMap::new();
    for r in &sec.reports {
        let p = r.meta_f64("p").unwrap_or(f64::NAN);
        let e = by_p.entry(p.to_bits()).or_insert(0.0);
        *e = e.max(r.ratio);
    }
    for r in &mut sec.reports {
        let p = r.meta_f64("p").unwrap_or(f64::NAN);
        r.set_constant(by_p[&p.to_bits()], cfg.slack);
    }
    if sec.check.uses_delta() {
        let mut groups: Vec<(String, f64, Vec<f64>)> = Vec::new();
        for r in &sec.reports {
            let function = r.meta_str("function").unwrap_or_default().to_string();
            let p = r.meta_f64("p").unwrap_or(f64::NAN);
            match groups.iter_mut().find(|g| g.0 == function && g.1.to_bits() == p.to_bits()) {
                Some(g) => g.2.push(r.ratio),
                None => groups.push((function, p, vec![r.ratio])),
            }
        }
        sec.spreads = groups
            .iter()
            .map(|(f, p, rs)| SpreadReport::from_ratios(sec.check, f, *p, rs, cfg.spread_limit))
            .collect();
    }
}

fn file_stem(check: CheckKind, function: &str, p: f64) -> String {
    format!("{}_{}_p{}", check.name(), function.replace('@', "_a"), p)
}

/// Writes `<scenario_id>.json` and the CSVs into `dir`; returns the paths in
/// the order written.
pub fn write_scenario(report: &ScenarioReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let json = dir.join(format!("{}.json", report.scenario_id));
    write_json(&json, report)?;
    written.push(json);

    for sec in &report.checks {
        let mut groups: Vec<(String, Vec<Vec<f64>>)> = Vec::new();
        for r in &sec.reports {
            let (stem, row) = match sec.check {
                CheckKind::Theorems => {
                    let Some(Value::Array(ts)) = r.metadata.get("truncations") else { continue };
                    let Some(Value::Array(is)) = r.metadata.get("partial_integrals") else { continue };
                    let s = r.meta_f64("s").unwrap_or(f64::NAN);
                    let stem = format!("theorems_{}_p{}_s{}", r.meta_str("function").unwrap_or("synthetic"), r.meta_f64("p").unwrap_or(f64::NAN), s);
                    let rows: Vec<Vec<f64>> = ts
                        .iter()
                        .zip(is)
                        .map(|(t, i)| vec![t.as_f64().unwrap_or(f64::NAN), i.as_f64().unwrap_or(f64::NAN)])
                        .collect();
                    let path = dir.join(format!("{stem}.csv"));
                    write_csv(&path, &["truncation", "partial_integral"], &rows)?;
                    written.push(path);
                    continue;
                }
                CheckKind::HardyLittlewood => (
                    format!("{}_{}", sec.check.name(), r.meta_str("function").unwrap_or_default().replace('@', "_a")),
                    vec![r.meta_f64("p").unwrap_or(f64::NAN), r.lhs, r.rhs],
                ),
                _ => (
                    file_stem(sec.check, r.meta_str("function").unwrap_or_default(), r.meta_f64("p").unwrap_or(f64::NAN)),
                    vec![r.meta_f64("delta").unwrap_or(f64::NAN), r.lhs, r.rhs],
                ),
            };
            match groups.iter_mut().find(|g| g.0 == stem) {
                Some(g) => g.1.push(row),
                None => groups.push((stem, vec![row])),
            }
        }
        let first = if sec.check == CheckKind::HardyLittlewood { "p" } else { "delta" };
        for (stem, rows) in groups {
            let path = dir.join(format!("{stem}.csv"));
            write_csv(&path, &[first, "lhs", "rhs"], &rows)?;
            written.push(path);
        }
    }
    Ok(written)
}
