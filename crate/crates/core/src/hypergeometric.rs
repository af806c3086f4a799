//! Gauss hypergeometric function ₂F₁(a, b; c; z) on the negative real axis.

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use num_complex::Complex64;

/// Relative tail tolerance for every series.
pub const SERIES_TOL: f64 = 1e-15;
/// Hard cap on series length; exceeding it is an accuracy error.
pub const MAX_TERMS: usize = 10_000;

/// A series sum together with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub terms: usize,
    /// Rounding plus truncation estimate, absolute.
    pub est_error: f64,
}

fn is_nonpositive_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.floor()
}

/// Plain power series Σ (a)_n (b)_n / ((c)_n n!) zⁿ for |z| < 1.
pub fn hypergeometric_series(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<SeriesValue> {
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("c = {c} is a nonpositive integer")));
    }
    let az = z.abs();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        term *= ratio * z;
        sum += term;
        let t = term.norm();
        abs_sum += t;
        if t == 0.0 {
            return Ok(SeriesValue {
                value: sum,
                terms: n + 2,
                est_error: 4.0 * f64::EPSILON * abs_sum,
            });
        }
        // Next-ratio bound; ratios tend to |z| from either side.
        let m = nf + 1.0;
        let r = ((a + m) * (b + m) / ((c + m) * (m + 1.0))).norm() * az;
        let r = r.max(az);
        if r < 1.0 {
            let tail = t * r / (1.0 - r);
            if tail <= SERIES_TOL * sum.norm() || tail <= f64::EPSILON * 1e-3 * abs_sum {
                return Ok(SeriesValue {
                    value: sum,
                    terms: n + 2,
                    est_error: 4.0 * f64::EPSILON * abs_sum + tail,
                });
            }
        }
    }
    Err(Error::Accuracy {
        message: format!("hypergeometric series did not converge in {MAX_TERMS} terms (z = {z})"),
        partial: Some(sum),
        estimate: Some(abs_sum * f64::EPSILON),
    })
}

/// ln Γ(x), or `None` at a pole (where 1/Γ vanishes).
fn ln_gamma_or_pole(x: Complex64) -> Result<Option<Complex64>> {
    if is_nonpositive_integer(x) {
        return Ok(None);
    }
    ln_gamma(x).map(Some)
}

/// ₂F₁(a, b; c; z) for real z ≤ 0.
///
/// Direct series on [−1/2, 0]; Pfaff's transformation to z/(z−1) on
/// [−3, −1/2); below −3 the connection formula in 1/(1−z), falling back to
/// Pfaff when a − b is an integer.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<SeriesValue> {
    if !z.is_finite() || z > 0.0 {
        return Err(Error::Domain(format!("gauss_2f1 is implemented for z <= 0, got {z}")));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("c = {c} is a nonpositive integer")));
    }
    if z == 0.0 {
        return Ok(SeriesValue {
            value: Complex64::new(1.0, 0.0),
            terms: 0,
            est_error: 0.0,
        });
    }
    if z >= -0.5 {
        return hypergeometric_series(a, b, c, z);
    }
    let d = a - b;
    let integral_gap = d.im.abs() < 1e-12 && (d.re - d.re.round()).abs() < 1e-12;
    if z < -3.0 && !integral_gap {
        return connection_inverse(a, b, c, z);
    }
    pfaff(a, b, c, z)
}

fn pfaff(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<SeriesValue> {
    let w = z / (z - 1.0);
    let pref = (-a * (1.0 - z).ln()).exp();
    let s = hypergeometric_series(a, c - b, c, w).map_err(|e| match e {
        Error::Accuracy { message, partial, estimate } => Error::Accuracy {
            message,
            partial: partial.map(|p| p * pref),
            estimate,
        },
        other => other,
    })?;
    Ok(SeriesValue {
        value: pref * s.value,
        terms: s.terms,
        est_error: pref.norm() * s.est_error,
    })
}

fn connection_inverse(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<SeriesValue> {
    let y = 1.0 / (1.0 - z);
    let l1mz = (1.0 - z).ln();
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut terms = 0;
    for (p, q) in [(a, b), (b, a)] {
        // Γ(c)Γ(q−p) / (Γ(q)Γ(c−p)) (1−z)^{−p} F(p, c−q; p−q+1; y)
        let (lq, lcp) = match (ln_gamma_or_pole(q)?, ln_gamma_or_pole(c - p)?) {
            (Some(x), Some(y)) => (x, y),
            // a reciprocal Gamma vanishes, so the branch drops out
            _ => continue,
        };
        let coef = (ln_gamma(c)? + ln_gamma(q - p)? - lq - lcp - p * l1mz).exp();
        let s = hypergeometric_series(p, c - q, p - q + 1.0, y)?;
        value += coef * s.value;
        err += coef.norm() * (s.est_error + 1e-14 * s.value.norm());
        terms += s.terms;
    }
    Ok(SeriesValue {
        value,
        terms,
        est_error: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_argument_is_one() {
        let v = gauss_2f1(c(0.3, 1.0), c(2.0, 0.0), c(1.5, 0.0), 0.0).unwrap();
        assert_eq!(v.value, c(1.0, 0.0));
        assert_eq!(v.terms, 0);
    }

    #[test]
    fn log_identity() {
        // ₂F₁(1,1;2;z) = −ln(1−z)/z
        let v = gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), -1.0).unwrap();
        assert!((v.value.re - std::f64::consts::LN_2).abs() < 1e-15);
        for &z in &[-0.2, -0.5, -2.9, -3.5, -50.0] {
            let v = gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), z).unwrap();
            let e = -(1.0f64 - z).ln() / z;
            assert!((v.value.re - e).abs() < 1e-14 * e, "z={z}: {} vs {e}", v.value.re);
        }
    }

    #[test]
    fn arbitrary_precision_references() {
        // Reference values from 30-digit evaluation.
        let cases = [
            (c(1.0, 1.5), c(1.0, -1.5), c(2.0, 0.0), -(2f64.sinh().powi(2)), c(-0.019_044_029_792_417_342, 0.0)),
            (c(0.3, 0.2), c(1.7, -0.5), c(2.2, 0.1), -0.3, c(0.927_813_950_459_612_99, -0.019_564_905_213_593_787)),
            (c(0.3, 0.2), c(1.7, -0.5), c(2.2, 0.1), -2.0, c(0.718_726_260_618_408_41, -0.080_259_391_968_665_565)),
            (c(0.3, 0.2), c(1.7, -0.5), c(2.2, 0.1), -25.0, c(0.331_267_872_554_264_65, -0.165_858_733_544_402_41)),
            (c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), -40.0, c(0.045_358_034_916_619_615, 0.0)),
        ];
        for (a, b, cc, z, expect) in cases {
            let v = gauss_2f1(a, b, cc, z).unwrap();
            assert!((v.value - expect).norm() < 1e-13, "z={z}: {} vs {expect}", v.value);
            assert!(v.est_error < 1e-12);
        }
    }

    #[test]
    fn symmetric_in_upper_parameters() {
        let a = c(0.7, 2.0);
        let b = c(1.2, -0.4);
        let cc = c(1.9, 0.0);
        for &z in &[-0.1, -1.7, -12.0] {
            let u = gauss_2f1(a, b, cc, z).unwrap().value;
            let v = gauss_2f1(b, a, cc, z).unwrap().value;
            assert!((u - v).norm() < 1e-13 * u.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), -0.1), Err(Error::Domain(_))));
        assert!(matches!(gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn terminating_series() {
        // a = −2 gives a quadratic polynomial.
        let v = gauss_2f1(c(-2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), -0.4).unwrap();
        assert!((v.value.re - 1.4f64.powi(2)).abs() < 1e-15);
    }
}
