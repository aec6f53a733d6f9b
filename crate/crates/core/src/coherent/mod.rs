//! Barut–Girardello and Perelomov coherent states: Fock expansions, closed
//! forms in the position representation, overlaps, photon statistics and
//! the moment problems behind the resolution of unity.

mod bg;
mod moments;
mod perelomov;

pub use bg::{
    bg_evaluate_alternative, bg_evaluate_closed, bg_evaluate_series, bg_expansion, bg_ladder_step, bg_measure_density,
    bg_moment_density, bg_moment_problem, bg_norm_closed, bg_norm_series, bg_overlap, bg_required_order, bg_scale,
};
pub use moments::{verify_moments, MomentProblem, MomentRow, Support, WeightDensity};
pub use perelomov::{
    perelomov_amplitude_closed, perelomov_expansion, perelomov_measure_density, perelomov_moment_density,
    perelomov_moment_problem, perelomov_overlap, perelomov_required_order, PerelomovExponent,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::oscillator::{recurrence_for, OscError};
use crate::polyfam::{PolyError, PolynomialFamily};
use crate::quadrature::QuadratureError;
use crate::specfun::SpecFunError;

/// Relative size of the dropped tail, |c_N|² against 𝒩², that a truncated
/// expansion may leave.
pub const TRUNCATION_TAIL: f64 = 1e-16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoherentError {
    #[error("truncation order {order} is too small; the tail bound needs {required}")]
    TruncationTooSmall { order: usize, required: usize },
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Osc(#[from] OscError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    BarutGirardello,
    Perelomov,
}

/// A coherent state truncated to the Fock levels 0..=truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentStateExpansion {
    pub kind: StateKind,
    pub family: PolynomialFamily,
    /// z for Barut–Girardello states, ζ (|ζ| < 1) for Perelomov states.
    pub eigenvalue: Complex64,
    /// Normalized coefficients c_0..=c_N.
    pub coeffs: Vec<Complex64>,
    /// 𝒩²(|z|²), or (1-|ζ|²)^{-p} for Perelomov states.
    pub norm_sq: f64,
    pub truncation: usize,
}

impl CoherentStateExpansion {
    /// Σ|c_n|² over the kept levels.
    pub fn kept_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Σ conj(self_n) other_n over the common levels.
    pub fn inner(&self, other: &CoherentStateExpansion) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    /// Σ c_n p_n(ξ) with p_n the orthonormal polynomials of the family
    /// (M̃_n or P̂_n), evaluated by recurrence.
    pub fn amplitude(&self, xi: Complex64) -> Result<Complex64, CoherentError> {
        let spec = recurrence_for(&self.family)?;
        let basis = spec.evaluate(self.truncation, xi);
        Ok(self.coeffs.iter().zip(&basis).map(|(c, p)| c * p).sum())
    }

    /// The coefficients as a column of length `order`, zero-padded.
    pub fn as_column(&self, order: usize) -> DMatrix<Complex64> {
        let mut v = DMatrix::zeros(order, 1);
        for (n, c) in self.coeffs.iter().enumerate().take(order) {
            v[(n, 0)] = *c;
        }
        v
    }
}

/// Mandel parameter Q = (⟨n²⟩ - ⟨n⟩²)/⟨n⟩ - 1 of the level distribution
/// |c_n|²; 0 when ⟨n⟩ = 0.
pub fn mandel_q(state: &CoherentStateExpansion) -> f64 {
    let total = state.kept_weight();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (n, c) in state.coeffs.iter().enumerate() {
        let p = c.norm_sqr() / total;
        m1 += n as f64 * p;
        m2 += (n * n) as f64 * p;
    }
    if m1 == 0.0 {
        return 0.0;
    }
    (m2 - m1 * m1) / m1 - 1.0
}

/// Smallest eigenvalue of a Hermitian matrix, e.g. a Gram matrix of
/// overlaps.
pub fn hermitian_min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// The Gram matrix G_ij = overlap(z_i, z_j).
pub fn gram_matrix<F>(points: &[Complex64], overlap: F) -> Result<DMatrix<Complex64>, CoherentError>
where
    F: Fn(Complex64, Complex64) -> Result<Complex64, CoherentError>,
{
    let n = points.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = overlap(points[i], points[j])?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(coeffs: Vec<Complex64>) -> CoherentStateExpansion {
        CoherentStateExpansion {
            kind: StateKind::Perelomov,
            family: PolynomialFamily::meixner(2.0, 0.5).unwrap(),
            eigenvalue: Complex64::new(0.0, 0.0),
            truncation: coeffs.len() - 1,
            coeffs,
            norm_sq: 1.0,
        }
    }

    #[test]
    fn mandel_of_vacuum_and_fock_state() {
        let vacuum = state(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(mandel_q(&vacuum), 0.0);
        // a number state has zero variance: Q = -1
        let fock = state(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        assert_eq!(mandel_q(&fock), -1.0);
    }

    #[test]
    fn min_eigenvalue_of_a_projector() {
        let v = DMatrix::from_column_slice(2, 1, &[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let p = &v * v.adjoint();
        assert!(hermitian_min_eigenvalue(&p).abs() < 1e-15);
        let g = gram_matrix(&[Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0)], |a, b| {
            Ok(if a == b {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.5, 0.0)
            })
        })
        .unwrap();
        assert!((hermitian_min_eigenvalue(&g) - 0.5).abs() < 1e-14);
    }
}
