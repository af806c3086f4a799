//! Gauss–Legendre rules, composite panel layouts and compensated summation.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// nodes in ascending order.
pub fn gauss_legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(compute_gauss_legendre(n)))
        .clone()
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess, then Newton.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// A composite rule: a list of panels, each carrying a Gauss–Legendre rule of
/// the same order.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub panels: Vec<(f64, f64)>,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    /// `panels` equal panels on [a, b].
    pub fn uniform(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let h = (b - a) / panels as f64;
        let edges: Vec<(f64, f64)> = (0..panels)
            .map(|i| {
                let lo = a + h * i as f64;
                let hi = if i + 1 == panels { b } else { a + h * (i + 1) as f64 };
                (lo, hi)
            })
            .collect();
        Self::from_panels(edges, order)
    }

    /// Equal panels on [a, b] with the first panel split geometrically towards
    /// `a` over `levels` halvings; resolves algebraic behaviour at the origin.
    pub fn graded(a: f64, b: f64, panels: usize, order: usize, levels: usize) -> Self {
        let h = (b - a) / panels as f64;
        let mut edges = Vec::with_capacity(panels + levels);
        let mut lo = a;
        for l in (1..=levels).rev() {
            let hi = a + h / (1u64 << l) as f64;
            edges.push((lo, hi));
            lo = hi;
        }
        edges.push((lo, a + h));
        for i in 1..panels {
            let hi = if i + 1 == panels { b } else { a + h * (i + 1) as f64 };
            edges.push((a + h * i as f64, hi));
        }
        Self::from_panels(edges, order)
    }

    pub fn from_panels(panels: Vec<(f64, f64)>, order: usize) -> Self {
        let gl = gauss_legendre(order);
        let (t, w) = (&gl.0, &gl.1);
        let mut nodes = Vec::with_capacity(panels.len() * order);
        let mut weights = Vec::with_capacity(panels.len() * order);
        for &(lo, hi) in &panels {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for k in 0..order {
                nodes.push(mid + half * t[k]);
                weights.push(half * w[k]);
            }
        }
        Self {
            panels,
            order,
            nodes,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = NeumaierSum::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(*x));
        }
        acc.total()
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum in iteration order.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::default();
    for v in values {
        acc.add(v);
    }
    acc.total()
}
