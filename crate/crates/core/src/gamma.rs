//! Logarithm of the Gamma function for complex arguments (Lanczos, g = 7, n = 9).

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-sheet-agnostic ln Γ(z): the real part is ln|Γ(z)| and the
/// imaginary part is correct modulo 2π, which is all `exp` needs.
///
/// Left of Re z = 1/2 the recurrence Γ(z) = Γ(z+n)/[z(z+1)…(z+n−1)] is used
/// instead of reflection, so large imaginary parts never overflow `sin`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("ln_gamma of non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(Error::Domain(format!("Gamma has a pole at {}", z.re)));
    }
    if z.re >= 0.5 {
        return Ok(lanczos(z));
    }
    let shift = (0.5 - z.re).ceil() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        acc += (z + k as f64).ln();
    }
    Ok(lanczos(z + shift as f64) - acc)
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_P[0], 0.0);
    for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
        x += *p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}
