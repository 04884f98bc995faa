//! Gauss-Legendre quadrature: fixed rules, adaptive bisection in 1D and
//! geometrically graded tensor grids in 2D.

use crate::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
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
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const ADAPTIVE_ORDER: usize = 20;
const MAX_DEPTH: usize = 40;

/// Adaptive Gauss-Legendre integration to absolute tolerance `tol`.
///
/// Each interval is accepted when the 20-point rule on the whole interval
/// and on its two halves agree within the interval's share of `tol`.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let rule = GaussLegendre::new(ADAPTIVE_ORDER);
    let whole = rule.integrate(a, b, &f);
    adapt(&rule, &f, a, b, whole, tol, 0)
}

fn adapt(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let refined = left + right;
    if !refined.is_finite() {
        return Err(Error::Numeric(format!("non-finite integrand on [{a}, {b}]")));
    }
    if (refined - whole).abs() <= tol {
        return Ok(refined);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Numeric(format!(
            "adaptive quadrature did not reach tolerance {tol:e} on [{a}, {b}]"
        )));
    }
    Ok(adapt(rule, f, a, mid, left, 0.5 * tol, depth + 1)?
        + adapt(rule, f, mid, b, right, 0.5 * tol, depth + 1)?)
}

/// Breakpoints on `[0, len]` graded geometrically towards 0: the panels are
/// `[0, len σ^(m-1)], ..., [len σ, len]` with `m = panels`.
pub fn graded_breakpoints(len: f64, panels: usize, ratio: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..panels).map(|i| len * ratio.powi(i as i32)).collect();
    pts.push(0.0);
    pts.reverse();
    pts
}

/// Tensor-product rule over `[x0, x1] × [y0, y1]` built from panel
/// breakpoints in each axis, `order` Gauss points per panel and axis.
pub fn integrate_tensor(
    xs: &[f64],
    ys: &[f64],
    order: usize,
    f: impl Fn(f64, f64) -> f64,
) -> f64 {
    let rule = GaussLegendre::new(order);
    let axis = |bps: &[f64]| -> Vec<(f64, f64)> {
        bps.windows(2)
            .flat_map(|w| {
                let (a, b) = (w[0], w[1]);
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(move |(&x, &wt)| (mid + half * x, wt * half))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let xq = axis(xs);
    let yq = axis(ys);
    let mut total = 0.0;
    for &(x, wx) in &xq {
        let mut row = 0.0;
        for &(y, wy) in &yq {
            row += wy * f(x, y);
        }
        total += wx * row;
    }
    total
}
