//! Meixner and Meixner–Pollaczek polynomials: raw and renormalized values,
//! weights, Meixner functions and the generating functions.
//!
//! Every polynomial has two independent evaluation paths: the terminating
//! hypergeometric definition here, and the orthonormal three-term recurrence
//! in [`crate::oscillator::RecurrenceSpec::evaluate`]. The test suites use
//! each as an oracle for the other.

mod meixner;
mod pollaczek;

pub use meixner::{
    meixner_dual_gram, meixner_function, meixner_genfn_binomial, meixner_genfn_binomial_partial,
    meixner_genfn_exponential, meixner_genfn_exponential_partial, meixner_gram, meixner_norm_constant, meixner_raw,
    meixner_raw_recurrence, meixner_renorm, meixner_renorm_with, meixner_support_cutoff, meixner_weight,
    meixner_weight_analytic,
};
pub use pollaczek::{
    mp_gram, mp_integration_limit, mp_raw, mp_raw_real, mp_renorm, mp_renorm_real, mp_via_meixner, mp_weight_density,
    SqrtBranch,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::QuadratureError;
use crate::specfun::SpecFunError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("operation requires a {expected:?} family")]
    WrongFamily { expected: FamilyKind },
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("value {value} expected to be real (rounding scale {scale:e})")]
    NotReal { value: num_complex::Complex64, scale: f64 },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Meixner,
    MeixnerPollaczek,
}

/// Parameters of one of the two polynomial families.
///
/// Meixner(β, γ) needs β > 0 and 0 < γ < 1; Meixner–Pollaczek(ν, φ) needs
/// ν > 0 and 0 < φ < π. Use the constructors, which validate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PolynomialFamily {
    Meixner { beta: f64, gamma: f64 },
    MeixnerPollaczek { nu: f64, phi: f64 },
}

impl PolynomialFamily {
    pub fn meixner(beta: f64, gamma: f64) -> Result<Self, PolyError> {
        if !(beta > 0.0 && beta.is_finite()) || !(gamma > 0.0 && gamma < 1.0) {
            return Err(PolyError::InvalidFamily(format!(
                "Meixner needs beta > 0 and 0 < gamma < 1, got beta={beta}, gamma={gamma}"
            )));
        }
        Ok(PolynomialFamily::Meixner { beta, gamma })
    }

    pub fn meixner_pollaczek(nu: f64, phi: f64) -> Result<Self, PolyError> {
        if !(nu > 0.0 && nu.is_finite()) || !(phi > 0.0 && phi < std::f64::consts::PI) {
            return Err(PolyError::InvalidFamily(format!(
                "Meixner-Pollaczek needs nu > 0 and 0 < phi < pi, got nu={nu}, phi={phi}"
            )));
        }
        Ok(PolynomialFamily::MeixnerPollaczek { nu, phi })
    }

    /// Re-checks the invariants (the variants can be built directly).
    pub fn validate(&self) -> Result<Self, PolyError> {
        match *self {
            PolynomialFamily::Meixner { beta, gamma } => Self::meixner(beta, gamma),
            PolynomialFamily::MeixnerPollaczek { nu, phi } => Self::meixner_pollaczek(nu, phi),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            PolynomialFamily::Meixner { .. } => FamilyKind::Meixner,
            PolynomialFamily::MeixnerPollaczek { .. } => FamilyKind::MeixnerPollaczek,
        }
    }

    /// (β, γ), or WrongFamily.
    pub fn meixner_params(&self) -> Result<(f64, f64), PolyError> {
        match *self {
            PolynomialFamily::Meixner { beta, gamma } => Ok((beta, gamma)),
            _ => Err(PolyError::WrongFamily {
                expected: FamilyKind::Meixner,
            }),
        }
    }

    /// (ν, φ), or WrongFamily.
    pub fn mp_params(&self) -> Result<(f64, f64), PolyError> {
        match *self {
            PolynomialFamily::MeixnerPollaczek { nu, phi } => Ok((nu, phi)),
            _ => Err(PolyError::WrongFamily {
                expected: FamilyKind::MeixnerPollaczek,
            }),
        }
    }

    /// Lowest K₀ weight of the sp(2,ℝ) representation: β/2 or ν.
    pub fn lowest_weight(&self) -> f64 {
        match *self {
            PolynomialFamily::Meixner { beta, .. } => 0.5 * beta,
            PolynomialFamily::MeixnerPollaczek { nu, .. } => nu,
        }
    }

    /// The Pochhammer parameter of the ladder eigenvalues μ(n) = √((n+1)(n+p)):
    /// β for Meixner and 2ν for Meixner–Pollaczek.
    pub fn pochhammer_param(&self) -> f64 {
        2.0 * self.lowest_weight()
    }
}
