use std::f64::consts::PI;

use num_complex::Complex64;

use super::moments::{MomentProblem, Support, WeightDensity};
use super::{CoherentError, CoherentStateExpansion, StateKind, TRUNCATION_TAIL};
use crate::polyfam::PolynomialFamily;
use crate::specfun::{factorial, pochhammer_real};

const MAX_ORDER: usize = 1_000_000;

/// Which exponent of (1 - √γ ζ) the Meixner closed form uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerelomovExponent {
    /// -ξ-β, as forced by the generating function.
    Derived,
    /// ξ-β, the alternative reading.
    Alternative,
}

fn check_disc(zeta: Complex64) -> Result<(), CoherentError> {
    if !(zeta.norm() < 1.0) {
        return Err(CoherentError::DomainError(format!(
            "Perelomov parameter must lie inside the unit disc, got |zeta| = {}",
            zeta.norm()
        )));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<(), CoherentError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(CoherentError::DomainError(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

/// Smallest N whose dropped tail of the negative-binomial weights
/// (p)_n x^n/n! (1-x)^p, x = |ζ|², is below 1e-16.
pub fn perelomov_required_order(p: f64, abs_zeta: f64) -> Result<usize, CoherentError> {
    check_beta(p)?;
    check_disc(Complex64::new(abs_zeta, 0.0))?;
    let x = abs_zeta * abs_zeta;
    let mut weight = (1.0 - x).powf(p);
    for n in 0..MAX_ORDER {
        let ratio = x * (n as f64 + p) / (n as f64 + 1.0);
        // the tail after n is bounded by a geometric series once ratio < 1
        if ratio < 1.0 && weight * ratio / (1.0 - ratio) <= TRUNCATION_TAIL {
            return Ok(n);
        }
        weight *= ratio;
    }
    Err(CoherentError::DomainError(format!(
        "|zeta| = {abs_zeta} needs more than {MAX_ORDER} levels"
    )))
}

/// c_n = (1-|ζ|²)^{p/2} √((p)_n/n!) ζⁿ with p = β (Meixner) or 2ν.
pub fn perelomov_expansion(
    fam: &PolynomialFamily,
    zeta: Complex64,
    order: usize,
) -> Result<CoherentStateExpansion, CoherentError> {
    fam.validate()?;
    check_disc(zeta)?;
    let p = fam.pochhammer_param();
    let required = perelomov_required_order(p, zeta.norm())?;
    if order < required {
        return Err(CoherentError::TruncationTooSmall { order, required });
    }
    let x = zeta.norm_sqr();
    let mut coeff = Complex64::new((1.0 - x).powf(0.5 * p), 0.0);
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        coeffs.push(coeff);
        let k = n as f64;
        coeff *= zeta * ((k + p) / (k + 1.0)).sqrt();
    }
    Ok(CoherentStateExpansion {
        kind: StateKind::Perelomov,
        family: *fam,
        eigenvalue: zeta,
        coeffs,
        norm_sq: (1.0 - x).powf(-p),
        truncation: order,
    })
}

/// ⟨ζ₁|ζ₂⟩ = [(1-|ζ₁|²)(1-|ζ₂|²)]^{β/2} (1-ζ̄₁ζ₂)^{-β}, principal branch.
pub fn perelomov_overlap(beta: f64, zeta1: Complex64, zeta2: Complex64) -> Result<Complex64, CoherentError> {
    check_beta(beta)?;
    check_disc(zeta1)?;
    check_disc(zeta2)?;
    let pre = ((1.0 - zeta1.norm_sqr()) * (1.0 - zeta2.norm_sqr())).powf(0.5 * beta);
    Ok((1.0 - zeta1.conj() * zeta2).powf(-beta) * pre)
}

fn power(base: Complex64, exponent: f64) -> Complex64 {
    if exponent == exponent.round() && exponent.abs() < i32::MAX as f64 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

/// Position-space amplitude Σ c_n p_n(ξ) from the generating functions.
///
/// Meixner (integer ξ >= 0): (1-|ζ|²)^{β/2} (1-√γζ/γ)^ξ (1-√γζ)^{e} with
/// e = -ξ-β or, for [`PerelomovExponent::Alternative`], ξ-β. Meixner–Pollaczek
/// (real ξ): (1-|ζ|²)^ν (1-e^{iφ}ζ)^{-ν+iξ} (1-e^{-iφ}ζ)^{-ν-iξ}, where the
/// exponent choice does not apply.
pub fn perelomov_amplitude_closed(
    fam: &PolynomialFamily,
    zeta: Complex64,
    xi: f64,
    exponent: PerelomovExponent,
) -> Result<Complex64, CoherentError> {
    fam.validate()?;
    check_disc(zeta)?;
    let one = Complex64::new(1.0, 0.0);
    let x = zeta.norm_sqr();
    match *fam {
        PolynomialFamily::Meixner { beta, gamma } => {
            if !(xi >= 0.0) || xi != xi.round() {
                return Err(CoherentError::DomainError(format!(
                    "Meixner states are evaluated at non-negative integers, got {xi}"
                )));
            }
            let t = zeta * gamma.sqrt();
            let e = match exponent {
                PerelomovExponent::Derived => -xi - beta,
                PerelomovExponent::Alternative => xi - beta,
            };
            Ok(power(one - t / gamma, xi) * power(one - t, e) * (1.0 - x).powf(0.5 * beta))
        }
        PolynomialFamily::MeixnerPollaczek { nu, phi } => {
            if exponent == PerelomovExponent::Alternative {
                return Err(CoherentError::DomainError(
                    "the alternative exponent exists only for the Meixner family".into(),
                ));
            }
            let rot = Complex64::from_polar(1.0, phi);
            let a = (one - rot * zeta).powc(Complex64::new(-nu, xi));
            let b = (one - rot.conj() * zeta).powc(Complex64::new(-nu, -xi));
            Ok(a * b * (1.0 - x).powf(nu))
        }
    }
}

/// (β-1)/π (1-|ζ|²)^{-2}, defined for β > 1.
pub fn perelomov_measure_density(beta: f64, abs_zeta_sq: f64) -> Result<f64, CoherentError> {
    if !(beta > 1.0) {
        return Err(CoherentError::DomainError(format!(
            "the Perelomov measure is normalizable only for beta > 1, got {beta}"
        )));
    }
    if !(0.0..1.0).contains(&abs_zeta_sq) {
        return Err(CoherentError::DomainError(format!(
            "|zeta|^2 must lie in [0, 1), got {abs_zeta_sq}"
        )));
    }
    Ok((beta - 1.0) / PI * (1.0 - abs_zeta_sq).powi(-2))
}

/// Moment density (β-1)/π (1-x)^{β-2} on [0, 1).
pub fn perelomov_moment_density(beta: f64, x: f64) -> Result<f64, CoherentError> {
    perelomov_measure_density(beta, x)?;
    Ok((beta - 1.0) / PI * (1.0 - x).powf(beta - 2.0))
}

/// π ∫₀¹ xⁿ (β-1)/π (1-x)^{β-2} dx = n!/(β)_n.
pub fn perelomov_moment_problem(beta: f64) -> Result<MomentProblem, CoherentError> {
    perelomov_measure_density(beta, 0.0)?;
    let scale = (beta - 1.0) / PI;
    let density = WeightDensity::new(Support::UnitInterval, beta - 2.0, move |t| scale * t.powf(beta - 2.0));
    Ok(MomentProblem::new("perelomov", density, move |n| {
        factorial(n) / pochhammer_real(beta, n)
    }))
}
