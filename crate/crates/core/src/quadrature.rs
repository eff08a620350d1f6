//! Gauss–Legendre rules and composite tensor quadrature.

use std::f64::consts::PI;

use crate::sum::pairwise_sum;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[lo, hi]`.
    pub fn on(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Composite rule on `[lo, hi]` with `panels` equal panels.
    pub fn composite(&self, lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
        panel_edges(lo, hi, panels)
            .windows(2)
            .flat_map(|e| self.on(e[0], e[1]).collect::<Vec<_>>())
            .collect()
    }

    pub fn integrate(&self, lo: f64, hi: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self.composite(lo, hi, panels).into_iter().map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

fn panel_edges(lo: f64, hi: f64, panels: usize) -> Vec<f64> {
    let panels = panels.max(1);
    (0..=panels)
        .map(|i| if i == panels { hi } else { lo + (hi - lo) * i as f64 / panels as f64 })
        .collect()
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over the `d`-cube `[0,1]^d` with a tensor composite rule.
pub fn tensor_integrate(rule: &GaussLegendre, d: usize, panels: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
    let axis = rule.composite(0.0, 1.0, panels);
    let m = axis.len();
    let total = m.pow(d as u32);
    let mut x = vec![0.0; d];
    let mut terms = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let mut w = 1.0;
        for xj in x.iter_mut() {
            let (node, wt) = axis[rem % m];
            *xj = node;
            w *= wt;
            rem /= m;
        }
        terms.push(w * f(&x));
    }
    pairwise_sum(&terms)
}

/// Integrates `f(a, b)` over the rectangle `[a0,a1] × [b0,b1]`, splitting
/// each side additionally at the given breakpoints.
pub fn rectangle_integrate(
    rule: &GaussLegendre,
    (a0, a1): (f64, f64),
    (b0, b1): (f64, f64),
    panels: usize,
    breaks: &[f64],
    f: impl Fn(f64, f64) -> f64,
) -> f64 {
    let sides = |lo: f64, hi: f64| -> Vec<(f64, f64)> {
        let mut cuts = vec![lo];
        cuts.extend(breaks.iter().copied().filter(|&t| t > lo && t < hi));
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2).flat_map(|w| rule.composite(w[0], w[1], panels)).collect()
    };
    let ua = sides(a0, a1);
    let ub = sides(b0, b1);
    let terms: Vec<f64> = ua
        .iter()
        .map(|&(a, wa)| {
            let inner: Vec<f64> = ub.iter().map(|&(b, wb)| wb * f(a, b)).collect();
            wa * pairwise_sum(&inner)
        })
        .collect();
    pairwise_sum(&terms)
}
