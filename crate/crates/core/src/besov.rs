//! Besov-type seminorms built from the modulus of continuity.

use crate::error::{Error, Result};
use crate::hypergroup::JacobiParams;
use crate::spectral::{lp_norm_weighted, modulus_of_continuity, round_trip_error, GridFunction, QuadratureSpec};
use serde::{Deserialize, Serialize};

/// Exponents (p, q, γ) of the space; q = ∞ is `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovSpec {
    pub p: f64,
    #[serde(with = "extended")]
    pub q: f64,
    pub gamma: f64,
}

impl BesovSpec {
    pub fn new(p: f64, q: f64, gamma: f64) -> Result<Self> {
        if !((1.0..=2.0).contains(&p) && q >= 1.0 && gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!(
                "need p in [1,2], q >= 1, gamma > 0; got ({p}, {q}, {gamma})"
            )));
        }
        Ok(Self { p, q, gamma })
    }
}

/// Serialises ±∞ as the strings "inf"/"-inf" so JSON stays valid.
pub mod extended {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" | "infinity" | "Infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" | "-Infinity" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

/// ω(δ) samples and their power-law fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub deltas: Vec<f64>,
    pub omegas: Vec<f64>,
    /// Samples at or below the noise floor, excluded from the fit.
    pub censored: Vec<bool>,
    pub fitted_exponent: f64,
    /// ln of the fitted prefactor C in ω ≈ C δ^κ.
    pub fitted_log_prefactor: f64,
    /// Root-mean-square residual of the log-log fit.
    pub fit_residual: f64,
    pub noise_floor: f64,
}

/// Number of sample points used by [`decay_exponent`].
pub const DECAY_SAMPLES: usize = 16;

/// Noise floor: ten times the round-trip error of the transform pair, plus a
/// relative floor at the level of double rounding.
pub fn noise_floor(f: &GridFunction, p: f64, params: &JacobiParams, quad: &QuadratureSpec) -> Result<f64> {
    let rt = round_trip_error(f, params, p, quad)?;
    let norm = lp_norm_weighted(f, params, p, quad)?;
    Ok(10.0 * rt + 1e-14 * norm)
}

/// Least squares fit of ln ω = ln C + κ ln δ; returns (κ, ln C, rms residual).
fn fit_power_law(deltas: &[f64], omegas: &[f64]) -> (f64, f64, f64) {
    let n = deltas.len() as f64;
    let xs: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = omegas.iter().map(|w| w.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    (slope, icpt, (rss / n).sqrt())
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

fn profile_on(
    f: &GridFunction,
    p: f64,
    params: &JacobiParams,
    deltas: Vec<f64>,
    quad: &QuadratureSpec,
) -> Result<DecayProfile> {
    let floor = noise_floor(f, p, params, quad)?;
    let mut omegas = Vec::with_capacity(deltas.len());
    for &d in &deltas {
        omegas.push(modulus_of_continuity(f, d, p, params, quad)?);
    }
    let censored: Vec<bool> = omegas.iter().map(|w| !(*w > floor)).collect();
    let kept: Vec<usize> = (0..deltas.len()).filter(|&i| !censored[i]).collect();
    if kept.len() * 2 <= deltas.len() || kept.len() < 2 {
        return Err(Error::accuracy(
            format!(
                "{} of {} modulus samples lie at or below the noise floor {floor:e}",
                deltas.len() - kept.len(),
                deltas.len()
            ),
            Some(floor),
        ));
    }
    let kd: Vec<f64> = kept.iter().map(|&i| deltas[i]).collect();
    let kw: Vec<f64> = kept.iter().map(|&i| omegas[i]).collect();
    let (slope, icpt, res) = fit_power_law(&kd, &kw);
    Ok(DecayProfile {
        deltas,
        omegas,
        censored,
        fitted_exponent: slope,
        fitted_log_prefactor: icpt,
        fit_residual: res,
        noise_floor: floor,
    })
}

/// Fits ω_{A,p}(f, δ) ≈ C δ^κ over a log-spaced range inside [1e-4, 1].
pub fn decay_exponent(
    f: &GridFunction,
    p: f64,
    params: &JacobiParams,
    delta_range: (f64, f64),
    quad: &QuadratureSpec,
) -> Result<DecayProfile> {
    let (lo, hi) = delta_range;
    if !(lo >= 1e-4 && hi <= 1.0 && lo < hi) {
        return Err(Error::Config(format!("delta range ({lo}, {hi}) must lie inside [1e-4, 1]")));
    }
    profile_on(f, p, params, log_spaced(lo, hi, DECAY_SAMPLES), quad)
}

/// Seminorm value with the pieces that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovResult {
    /// `f64::INFINITY` when the small-δ model diverges.
    #[serde(with = "extended")]
    pub value: f64,
    pub spec: BesovSpec,
    /// Fit over the leading uncensored samples, used below the grid.
    pub small_delta_exponent: f64,
    /// Grid points with δ + support beyond the truncation radius, where the
    /// a priori bound 2‖f‖ replaces a computed modulus.
    pub bounded_points: usize,
    pub profile: DecayProfile,
}

/// Minimum grid length of [`besov_seminorm`].
pub const MIN_BESOV_GRID: usize = 8;
/// Leading uncensored samples used for the small-δ power law.
const TAIL_FIT_POINTS: usize = 6;

/// (∫₀^∞ (ω(δ)/δ^γ)^q dδ/δ)^{1/q}, or sup ω(δ)/δ^γ for q = ∞.
///
/// On the grid the integral is a trapezoid rule in ln δ. Below the first
/// usable sample ω is continued by the fitted power law, and above the last
/// sample by the bound ω ≤ 2‖f‖_{A,p}.
pub fn besov_seminorm(
    f: &GridFunction,
    spec: &BesovSpec,
    params: &JacobiParams,
    delta_grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<BesovResult> {
    BesovSpec::new(spec.p, spec.q, spec.gamma)?;
    if delta_grid.len() < MIN_BESOV_GRID {
        return Err(Error::Config(format!(
            "delta grid needs at least {MIN_BESOV_GRID} points for the tail fits"
        )));
    }
    if delta_grid.windows(2).any(|w| !(w[1] > w[0])) || !(delta_grid[0] > 0.0) {
        return Err(Error::Config("delta grid must be positive and increasing".into()));
    }
    let (p, q, gamma) = (spec.p, spec.q, spec.gamma);
    let norm = lp_norm_weighted(f, params, p, quad)?;
    let empty_profile = |floor: f64| DecayProfile {
        deltas: delta_grid.to_vec(),
        omegas: vec![0.0; delta_grid.len()],
        censored: vec![true; delta_grid.len()],
        fitted_exponent: f64::NAN,
        fitted_log_prefactor: f64::NAN,
        fit_residual: f64::NAN,
        noise_floor: floor,
    };
    if norm == 0.0 {
        return Ok(BesovResult {
            value: 0.0,
            spec: *spec,
            small_delta_exponent: f64::NAN,
            bounded_points: 0,
            profile: empty_profile(0.0),
        });
    }
    let floor = noise_floor(f, p, params, quad)?;
    let reach_ok = |d: f64| d + f.extent() <= quad.truncation_radius;
    let mut omegas = Vec::with_capacity(delta_grid.len());
    let mut bounded = 0;
    for &d in delta_grid {
        if reach_ok(d) {
            omegas.push(modulus_of_continuity(f, d, p, params, quad)?);
        } else {
            bounded += 1;
            omegas.push(2.0 * norm);
        }
    }
    let censored: Vec<bool> = delta_grid
        .iter()
        .zip(&omegas)
        .map(|(&d, &w)| reach_ok(d) && !(w > floor))
        .collect();
    // leading uncensored computed samples carry the small-δ model
    let lead: Vec<usize> = (0..delta_grid.len())
        .filter(|&i| !censored[i] && reach_ok(delta_grid[i]))
        .take(TAIL_FIT_POINTS)
        .collect();
    if lead.len() < 2 {
        return Err(Error::accuracy(
            "too few modulus samples above the noise floor for the small-delta fit",
            Some(floor),
        ));
    }
    let ld: Vec<f64> = lead.iter().map(|&i| delta_grid[i]).collect();
    let lw: Vec<f64> = lead.iter().map(|&i| omegas[i]).collect();
    let (kappa, ln_c, res) = fit_power_law(&ld, &lw);
    let first = lead[0];
    let used: Vec<usize> = (first..delta_grid.len()).filter(|&i| !censored[i]).collect();

    let value = if q.is_infinite() {
        if kappa < gamma {
            f64::INFINITY
        } else {
            // model sup below the first sample is attained at that sample
            used.iter()
                .map(|&i| omegas[i] / delta_grid[i].powf(gamma))
                .fold(0.0, f64::max)
        }
    } else if kappa <= gamma {
        f64::INFINITY
    } else {
        let d0 = delta_grid[first];
        let small = (ln_c.exp() * d0.powf(kappa - gamma)).powf(q) / ((kappa - gamma) * q);
        let mut mid = 0.0;
        for w in used.windows(2) {
            let (i, j) = (w[0], w[1]);
            let gi = (omegas[i] / delta_grid[i].powf(gamma)).powf(q);
            let gj = (omegas[j] / delta_grid[j].powf(gamma)).powf(q);
            mid += 0.5 * (gi + gj) * (delta_grid[j] / delta_grid[i]).ln();
        }
        let dn = delta_grid[*used.last().unwrap()];
        let large = (2.0 * norm).powf(q) * dn.powf(-gamma * q) / (gamma * q);
        (small + mid + large).powf(1.0 / q)
    };
    Ok(BesovResult {
        value,
        spec: *spec,
        small_delta_exponent: kappa,
        bounded_points: bounded,
        profile: DecayProfile {
            deltas: delta_grid.to_vec(),
            omegas,
            censored,
            fitted_exponent: kappa,
            fitted_log_prefactor: ln_c,
            fit_residual: res,
            noise_floor: floor,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    In,
    Out,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub verdict: Verdict,
    /// fitted exponent − γ
    pub margin: f64,
    pub fitted_exponent: f64,
}

/// |margin| below this is reported as inconclusive.
pub const MEMBERSHIP_MARGIN: f64 = 0.1;
/// Range over which the small-δ exponent is fitted for membership.
pub const MEMBERSHIP_RANGE: (f64, f64) = (1e-3, 1e-1);

/// In/out verdict from the fitted small-δ exponent against γ.
pub fn membership(f: &GridFunction, spec: &BesovSpec, params: &JacobiParams, quad: &QuadratureSpec) -> Result<Membership> {
    let profile = decay_exponent(f, spec.p, params, MEMBERSHIP_RANGE, quad)?;
    Ok(membership_from_exponent(profile.fitted_exponent, spec.gamma))
}

pub fn membership_from_exponent(kappa: f64, gamma: f64) -> Membership {
    let margin = kappa - gamma;
    let verdict = if margin > MEMBERSHIP_MARGIN {
        Verdict::In
    } else if margin < -MEMBERSHIP_MARGIN {
        Verdict::Out
    } else {
        Verdict::Inconclusive
    };
    Membership {
        verdict,
        margin,
        fitted_exponent: kappa,
    }
}
