//! Scalar special functions: Pochhammer symbols, hypergeometric series,
//! modified Bessel functions and the complex log-gamma function.
//!
//! Everything here is pure; series are summed with compensated (Neumaier)
//! summation and stop on a relative term criterion controlled by
//! [`SeriesPolicy`].

mod bessel;
mod extended;
mod gamma;
mod hypergeometric;

pub use bessel::{bessel_i, bessel_i_any_order, bessel_k, bessel_k_integral};
pub use extended::{contract, extend, DoubleDouble, ExtendedComplex};
pub use gamma::{gamma_abs_sq, gamma_real, ln_gamma, ln_gamma_real, rgamma_real};
pub use hypergeometric::{hyp0f1, hyp1f1, hyp_terminating, hyp_terminating_extended, hyp_terminating_scaled};

use num_complex::Complex64;
use thiserror::Error;

use crate::oscillator::RecurrenceSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("lower parameter {param} is a non-positive integer before the series terminates")]
    LowerParamPole { param: Complex64 },
    #[error("no upper parameter is a non-positive integer; series does not terminate")]
    NotTerminating,
    #[error("series did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("gamma function pole at {0}")]
    PoleError(Complex64),
}

/// Truncation control for the convergent series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy {
            rel_tol: 1e-14,
            max_terms: 500,
        }
    }
}

impl SeriesPolicy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self, SpecFunError> {
        if !(rel_tol > 0.0) || max_terms < 1 {
            return Err(SpecFunError::DomainError(format!(
                "series policy needs rel_tol > 0 and max_terms >= 1, got {rel_tol}, {max_terms}"
            )));
        }
        Ok(SeriesPolicy { rel_tol, max_terms })
    }
}

/// Neumaier-compensated running sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        self.sum = Complex64::new(
            neumaier_step(self.sum.re, x.re, &mut self.comp.re),
            neumaier_step(self.sum.im, x.im, &mut self.comp.im),
        );
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn neumaier_step(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

/// Compensated sum of real values.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in values {
        sum = neumaier_step(sum, x, &mut comp);
    }
    sum + comp
}

/// Tracks the "two consecutive small terms" stopping rule shared by the
/// convergent series.
#[derive(Debug, Default)]
pub(crate) struct TailGuard {
    small_run: u32,
}

impl TailGuard {
    /// Returns true once two consecutive terms were below `rel_tol * |sum|`.
    pub(crate) fn settled(&mut self, term: f64, sum: f64, rel_tol: f64) -> bool {
        if term <= rel_tol * sum {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= 2
    }
}

/// Rising factorial (a)_k = a(a+1)...(a+k-1), with (a)_0 = 1.
pub fn pochhammer(a: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

/// Real rising factorial.
pub fn pochhammer_real(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// n! as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * j as f64)
}

/// The generalized factorial (√2 b_{n-1})! = 2^{n/2} b_0 b_1 ... b_{n-1}
/// built from the off-diagonal recurrence coefficients; equals 1 for n = 0.
/// The sign of the coefficients is kept (Meixner b_n are negative).
pub fn ladder_factorial(spec: &RecurrenceSpec, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * std::f64::consts::SQRT_2 * spec.offdiag(k))
}
