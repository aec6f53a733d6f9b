//! Adaptive Gauss–Legendre quadrature on finite intervals, for scalar and
//! vector-valued integrands.

use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("adaptive quadrature did not converge on [{a}, {b}] (depth limit {max_depth})")]
    NoConvergence { a: f64, b: f64, max_depth: usize },
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on P_n from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    fn integrate_into<F: Fn(f64, &mut [f64])>(&self, f: &F, a: f64, b: f64, out: &mut [f64], scratch: &mut [f64]) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        out.iter_mut().for_each(|v| *v = 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            f(mid + half * x, scratch);
            for (o, s) in out.iter_mut().zip(scratch.iter()) {
                *o += half * w * s;
            }
        }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

fn rule20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Stopping rule: every component must satisfy
/// Σ_panels |coarse - refined| <= max(abs, rel·|integral|). No panel is
/// bisected more than `max_depth` times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_depth: usize,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        QuadTolerance {
            abs: 1e-14,
            rel: 1e-12,
            max_depth: 48,
        }
    }
}

const MAX_PANELS: usize = 1 << 16;

/// Adaptive bisection with a 20-point rule; Gauss nodes never touch the
/// endpoints, so integrable endpoint singularities are tolerated.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadTolerance) -> Result<f64, QuadratureError> {
    let v = adaptive_vec(|x, out: &mut [f64]| out[0] = f(x), 1, a, b, tol)?;
    Ok(v[0])
}

struct Panel {
    lo: f64,
    hi: f64,
    depth: usize,
    left: Vec<f64>,
    right: Vec<f64>,
    /// |one-panel estimate - sum of halves|, per component.
    error: Vec<f64>,
}

impl Panel {
    fn new<F: Fn(f64, &mut [f64])>(f: &F, lo: f64, hi: f64, depth: usize, whole: &[f64], scratch: &mut [f64]) -> Self {
        let dim = whole.len();
        let mid = 0.5 * (lo + hi);
        let mut left = vec![0.0; dim];
        let mut right = vec![0.0; dim];
        rule20().integrate_into(f, lo, mid, &mut left, scratch);
        rule20().integrate_into(f, mid, hi, &mut right, scratch);
        let error = (0..dim).map(|i| (left[i] + right[i] - whole[i]).abs()).collect();
        Panel {
            lo,
            hi,
            depth,
            left,
            right,
            error,
        }
    }

    fn no_convergence(&self, max_depth: usize) -> QuadratureError {
        QuadratureError::NoConvergence {
            a: self.lo,
            b: self.hi,
            max_depth,
        }
    }
}

/// Vector-valued globally adaptive quadrature: `f(x, out)` fills `dim`
/// integrand components. The panel with the largest error relative to its
/// component tolerance is bisected until every component meets the
/// tolerance.
pub fn adaptive_vec<F: Fn(f64, &mut [f64])>(
    f: F,
    dim: usize,
    a: f64,
    b: f64,
    tol: QuadTolerance,
) -> Result<Vec<f64>, QuadratureError> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(QuadratureError::InvalidInterval(a, b));
    }
    let mut scratch = vec![0.0; dim];
    let mut whole = vec![0.0; dim];
    rule20().integrate_into(&f, a, b, &mut whole, &mut scratch);
    let mut panels = vec![Panel::new(&f, a, b, 0, &whole, &mut scratch)];
    loop {
        let mut total = vec![0.0; dim];
        let mut error = vec![0.0; dim];
        for p in &panels {
            for i in 0..dim {
                total[i] += p.left[i] + p.right[i];
                error[i] += p.error[i];
            }
        }
        let allowed: Vec<f64> = total.iter().map(|t| tol.abs.max(tol.rel * t.abs())).collect();
        if (0..dim).all(|i| error[i] <= allowed[i]) {
            return Ok(total);
        }
        let score = |p: &Panel| (0..dim).map(|i| p.error[i] / allowed[i]).fold(0.0, f64::max);
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < tol.max_depth)
            .max_by(|x, y| score(x.1).total_cmp(&score(y.1)))
            .map(|(k, _)| k);
        let Some(k) = worst else {
            let p = panels
                .iter()
                .max_by(|x, y| score(x).total_cmp(&score(y)))
                .expect("at least one panel");
            return Err(p.no_convergence(tol.max_depth));
        };
        if panels.len() >= MAX_PANELS {
            return Err(panels[k].no_convergence(tol.max_depth));
        }
        let parent = panels.swap_remove(k);
        let mid = 0.5 * (parent.lo + parent.hi);
        panels.push(Panel::new(
            &f,
            parent.lo,
            mid,
            parent.depth + 1,
            &parent.left,
            &mut scratch,
        ));
        panels.push(Panel::new(
            &f,
            mid,
            parent.hi,
            parent.depth + 1,
            &parent.right,
            &mut scratch,
        ));
    }
}

/// Integrates over consecutive panels [p_0, p_1], [p_1, p_2], ...
pub fn adaptive_vec_panels<F: Fn(f64, &mut [f64])>(
    f: F,
    dim: usize,
    breakpoints: &[f64],
    tol: QuadTolerance,
) -> Result<Vec<f64>, QuadratureError> {
    let mut total = vec![0.0; dim];
    for w in breakpoints.windows(2) {
        let part = adaptive_vec(&f, dim, w[0], w[1], tol)?;
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    Ok(total)
}
