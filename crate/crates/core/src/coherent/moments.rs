use std::fmt;
use std::sync::Arc;

use super::CoherentError;
use crate::quadrature::{adaptive_vec_panels, QuadTolerance};

/// Largest moment order accepted by [`verify_moments`].
pub const MAX_MOMENT_ORDER: usize = 10;
const TAIL_RATIO: f64 = 1e-18;
const HALF_LINE_PANELS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// (0, ∞), singular end at 0.
    HalfLine,
    /// (0, 1), singular end at 1.
    UnitInterval,
}

type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A non-negative density on its support, parametrized by the distance
/// t to the end where it may be singular: t = x on the half line and
/// t = 1 - x on the unit interval. Passing the distance rather than x keeps
/// full relative precision next to that end.
#[derive(Clone)]
pub struct WeightDensity {
    density: Density,
    pub support: Support,
    /// a in density ~ t^a as t → 0 (0 when the density is bounded there).
    pub endpoint_exponent: f64,
}

impl fmt::Debug for WeightDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightDensity")
            .field("support", &self.support)
            .field("endpoint_exponent", &self.endpoint_exponent)
            .finish()
    }
}

impl WeightDensity {
    pub fn new(
        support: Support,
        endpoint_exponent: f64,
        density_at_distance: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        WeightDensity {
            density: Arc::new(density_at_distance),
            support,
            endpoint_exponent,
        }
    }

    /// Density at the point x of the support.
    pub fn at(&self, x: f64) -> f64 {
        match self.support {
            Support::HalfLine => (self.density)(x),
            Support::UnitInterval => (self.density)(1.0 - x),
        }
    }

    /// Density at distance t from the singular end.
    pub fn at_distance(&self, t: f64) -> f64 {
        (self.density)(t)
    }
}

/// π ∫ xⁿ density(x) dx = target(n), n = 0, 1, ...
#[derive(Clone)]
pub struct MomentProblem {
    pub density: WeightDensity,
    target: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    pub label: &'static str,
}

impl fmt::Debug for MomentProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MomentProblem")
            .field("label", &self.label)
            .field("density", &self.density)
            .finish()
    }
}

impl MomentProblem {
    pub fn new(
        label: &'static str,
        density: WeightDensity,
        target: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        MomentProblem {
            density,
            target: Arc::new(target),
            label,
        }
    }

    pub fn target(&self, n: usize) -> f64 {
        (self.target)(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// Computes π ∫ xⁿ density for n = 0..=n_max by adaptive quadrature and
/// compares with the targets.
///
/// The integration variable is u with t = u^m, m = 1/(1+a) for an endpoint
/// exponent a < 0 (else m = 1); this makes the integrand bounded at the
/// singular end.
pub fn verify_moments(
    problem: &MomentProblem,
    n_max: usize,
    tol: QuadTolerance,
) -> Result<Vec<MomentRow>, CoherentError> {
    if n_max > MAX_MOMENT_ORDER {
        return Err(CoherentError::DomainError(format!(
            "moment order {n_max} exceeds {MAX_MOMENT_ORDER}"
        )));
    }
    let w = &problem.density;
    let a = w.endpoint_exponent;
    if !(a > -1.0) {
        return Err(CoherentError::DomainError(format!(
            "endpoint exponent {a} is not integrable"
        )));
    }
    let m = if a < 0.0 { 1.0 / (1.0 + a) } else { 1.0 };
    let support = w.support;
    // Integrand in u for moment n; t = u^m, dt = m u^{m-1} du.
    let integrand = move |n: usize, u: f64| -> f64 {
        let t = u.powf(m);
        let x_pow = match support {
            Support::HalfLine => t.powi(n as i32),
            Support::UnitInterval => (1.0 - t).powi(n as i32),
        };
        let jac = if m == 1.0 { 1.0 } else { m * u.powf(m - 1.0) };
        std::f64::consts::PI * x_pow * w.at_distance(t) * jac
    };

    let breakpoints = match support {
        Support::UnitInterval => vec![0.0, 0.25, 0.5, 0.75, 1.0],
        Support::HalfLine => {
            let upper = half_line_cutoff(|u| integrand(n_max, u))?;
            (0..=HALF_LINE_PANELS)
                .map(|k| upper * k as f64 / HALF_LINE_PANELS as f64)
                .collect()
        }
    };
    let values = adaptive_vec_panels(
        |u, out: &mut [f64]| {
            for (n, o) in out.iter_mut().enumerate() {
                *o = integrand(n, u);
            }
        },
        n_max + 1,
        &breakpoints,
        tol,
    )?;
    values
        .iter()
        .enumerate()
        .map(|(n, &lhs)| {
            if !lhs.is_finite() {
                return Err(CoherentError::DomainError(format!(
                    "moment {n} of {} is not finite",
                    problem.label
                )));
            }
            let rhs = problem.target(n);
            Ok(MomentRow {
                n,
                lhs,
                rhs,
                rel_err: (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE),
            })
        })
        .collect()
}

/// Doubles U until the integrand at U is below 1e-18 of its sampled peak
/// on (0, U] and still decreasing.
fn half_line_cutoff(g: impl Fn(f64) -> f64) -> Result<f64, CoherentError> {
    let mut upper: f64 = 1.0;
    for _ in 0..64 {
        let peak = (1..=256).map(|k| g(upper * k as f64 / 256.0)).fold(0.0, f64::max);
        let end = g(upper);
        if end <= TAIL_RATIO * peak && end <= g(0.99 * upper) {
            return Ok(upper);
        }
        upper *= 2.0;
    }
    Err(CoherentError::DomainError(
        "density does not decay on the half line".into(),
    ))
}
