//! Piecewise interpolation used by sampled functions and spectra.

/// Clamped cubic spline through `(x_i, y_i)` with prescribed end slopes.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>, // second derivatives at the knots
}

impl CubicSpline {
    /// `x` must be strictly increasing with at least two knots.
    pub fn clamped(x: &[f64], y: &[f64], left_slope: f64, right_slope: f64) -> Self {
        let n = x.len();
        assert!(n >= 2 && y.len() == n);
        // Tridiagonal system for the knot second derivatives (Thomas algorithm).
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let h0 = x[1] - x[0];
        diag[0] = h0 / 3.0;
        upper[0] = h0 / 6.0;
        rhs[0] = (y[1] - y[0]) / h0 - left_slope;
        for i in 1..n - 1 {
            let hl = x[i] - x[i - 1];
            let hr = x[i + 1] - x[i];
            diag[i] = (hl + hr) / 3.0;
            upper[i] = hr / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl;
        }
        let hn = x[n - 1] - x[n - 2];
        diag[n - 1] = hn / 3.0;
        rhs[n - 1] = right_slope - (y[n - 1] - y[n - 2]) / hn;
        // lower[i] = h_{i-1}/6 is symmetric with upper[i-1].
        for i in 1..n {
            let w = upper[i - 1] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        }
        Self {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        }
    }

    /// Evaluates inside [x_0, x_last]; callers handle extrapolation.
    pub fn eval(&self, t: f64) -> f64 {
        let i = interval_index(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

/// Index `i` with `x[i] <= t <= x[i+1]`, clamped to the valid range.
pub fn interval_index(x: &[f64], t: f64) -> usize {
    let n = x.len();
    if t <= x[0] {
        return 0;
    }
    if t >= x[n - 1] {
        return n - 2;
    }
    let i = x.partition_point(|&v| v <= t);
    (i - 1).min(n - 2)
}

pub fn linear_eval(x: &[f64], y: &[f64], t: f64) -> f64 {
    let i = interval_index(x, t);
    let h = x[i + 1] - x[i];
    let b = (t - x[i]) / h;
    (1.0 - b) * y[i] + b * y[i + 1]
}

/// Barycentric weights for Lagrange interpolation through Gauss–Legendre
/// nodes of one panel, given the reference nodes and weights on [-1, 1].
pub fn legendre_barycentric_weights(ref_nodes: &[f64], ref_weights: &[f64]) -> Vec<f64> {
    ref_nodes
        .iter()
        .zip(ref_weights)
        .enumerate()
        .map(|(j, (x, w))| {
            let s = ((1.0 - x * x) * w).sqrt();
            if j % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

/// Second-form barycentric interpolation.
pub fn barycentric_eval(nodes: &[f64], values: &[f64], bw: &[f64], t: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((x, v), w) in nodes.iter().zip(values).zip(bw) {
        let d = t - x;
        if d == 0.0 {
            return *v;
        }
        let c = w / d;
        num += c * v;
        den += c;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;

    #[test]
    fn spline_reproduces_cubics_with_exact_slopes() {
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let df = |x: f64| -2.0 + 1.5 * x * x;
        let x: Vec<f64> = (0..11).map(|i| i as f64 * 0.3).collect();
        let y: Vec<f64> = x.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::clamped(&x, &y, df(0.0), df(3.0));
        for k in 0..100 {
            let t = 3.0 * k as f64 / 99.0;
            assert!((s.eval(t) - f(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn spline_fourth_order_accuracy() {
        let err = |n: usize| {
            let x: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let y: Vec<f64> = x.iter().map(|t: &f64| t.sin()).collect();
            let s = CubicSpline::clamped(&x, &y, 1.0, 1f64.cos());
            (0..997).map(|k| k as f64 / 996.0).map(|t| (s.eval(t) - t.sin()).abs()).fold(0.0, f64::max)
        };
        let ratio = err(10) / err(20);
        assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
    }

    #[test]
    fn barycentric_on_gl_nodes_is_spectral() {
        let gl = gauss_legendre(16);
        let bw = legendre_barycentric_weights(&gl.0, &gl.1);
        let v: Vec<f64> = gl.0.iter().map(|x| (2.0 * x).exp()).collect();
        for k in 0..50 {
            let t = -1.0 + 2.0 * k as f64 / 49.0;
            assert!((barycentric_eval(&gl.0, &v, &bw, t) - (2.0 * t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_between_knots() {
        assert_eq!(linear_eval(&[0.0, 1.0, 3.0], &[0.0, 2.0, 0.0], 2.0), 1.0);
    }
}
