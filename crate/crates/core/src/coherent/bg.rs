use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;

use super::moments::{MomentProblem, Support, WeightDensity};
use super::{CoherentError, CoherentStateExpansion, StateKind, TRUNCATION_TAIL};
use crate::oscillator::{recurrence_for, RecurrenceSpec};
use crate::polyfam::PolynomialFamily;
use crate::specfun::{
    bessel_i, bessel_k, factorial, gamma_real, hyp0f1, hyp1f1, pochhammer_real, CompensatedSum, SeriesPolicy,
};

const MAX_ORDER: usize = 100_000;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// d_k in c_{k+1} = c_k z / d_k.
///
/// Meixner states are eigenstates of ã⁻ (d_k = √2 b_k, negative);
/// Meixner–Pollaczek states are eigenstates of K⁻ = √2 sin φ ã⁻
/// (d_k = μ(k) = √((k+1)(k+2ν))).
pub fn bg_ladder_step(spec: &RecurrenceSpec, k: usize) -> f64 {
    match spec.family() {
        PolynomialFamily::Meixner { .. } => SQRT_2 * spec.offdiag(k),
        PolynomialFamily::MeixnerPollaczek { .. } => spec.ladder_eigenvalue(k),
    }
}

/// (κ, p) with 𝒩²(x) = 0F1(; p; κ² x): κ = (1-γ)/√(2γ), p = β for
/// Meixner and κ = 1, p = 2ν for Meixner–Pollaczek.
pub fn bg_scale(fam: &PolynomialFamily) -> (f64, f64) {
    match *fam {
        PolynomialFamily::Meixner { gamma, .. } => ((1.0 - gamma) / (2.0 * gamma).sqrt(), fam.pochhammer_param()),
        PolynomialFamily::MeixnerPollaczek { .. } => (1.0, fam.pochhammer_param()),
    }
}

fn check_abs_sq(abs_z_sq: f64) -> Result<(), CoherentError> {
    if !(abs_z_sq >= 0.0 && abs_z_sq.is_finite()) {
        return Err(CoherentError::DomainError(format!(
            "|z|^2 must be finite and non-negative, got {abs_z_sq}"
        )));
    }
    Ok(())
}

/// 𝒩²(|z|²) = Σ |z|^{2n} / Π_{k<n} d_k², summed from the recurrence
/// coefficients until two consecutive terms fall below the policy tolerance.
pub fn bg_norm_series(fam: &PolynomialFamily, abs_z_sq: f64, policy: SeriesPolicy) -> Result<f64, CoherentError> {
    check_abs_sq(abs_z_sq)?;
    let spec = recurrence_for(fam)?;
    let mut sum = CompensatedSum::new();
    let mut term = 1.0;
    sum.add(c(term));
    let mut small_run = 0;
    for k in 0..policy.max_terms {
        let d = bg_ladder_step(&spec, k);
        term *= abs_z_sq / (d * d);
        sum.add(c(term));
        if term <= policy.rel_tol * sum.value().re {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum.value().re);
            }
        } else {
            small_run = 0;
        }
    }
    if abs_z_sq == 0.0 {
        return Ok(1.0);
    }
    Err(crate::specfun::SpecFunError::NoConvergence {
        max_terms: policy.max_terms,
    }
    .into())
}

/// Closed form Γ(p) (κ|z|)^{1-p} I_{p-1}(2κ|z|); equals 1 at z = 0.
pub fn bg_norm_closed(fam: &PolynomialFamily, abs_z_sq: f64) -> Result<f64, CoherentError> {
    check_abs_sq(abs_z_sq)?;
    fam.validate()?;
    if abs_z_sq == 0.0 {
        return Ok(1.0);
    }
    let (kappa, p) = bg_scale(fam);
    let arg = kappa * abs_z_sq.sqrt();
    let i = bessel_i(p - 1.0, 2.0 * arg, SeriesPolicy::default())?;
    Ok(gamma_real(p)? * arg.powf(1.0 - p) * i)
}

/// Smallest N with |z|^{2N}/Π_{k<N} d_k² <= 1e-16 𝒩² on the decreasing
/// side of the terms.
pub fn bg_required_order(fam: &PolynomialFamily, abs_z: f64) -> Result<usize, CoherentError> {
    let x = abs_z * abs_z;
    let norm_sq = bg_norm_series(fam, x, SeriesPolicy::default())?;
    let spec = recurrence_for(fam)?;
    let mut term = 1.0;
    for n in 0..MAX_ORDER {
        let d = bg_ladder_step(&spec, n);
        let ratio = x / (d * d);
        if term <= TRUNCATION_TAIL * norm_sq && ratio < 1.0 {
            return Ok(n);
        }
        term *= ratio;
    }
    Err(CoherentError::DomainError(format!(
        "|z| = {abs_z} needs more than {MAX_ORDER} levels"
    )))
}

/// Normalized Fock coefficients c_n = 𝒩^{-1} z^n / Π_{k<n} d_k, n <= order.
pub fn bg_expansion(
    fam: &PolynomialFamily,
    z: Complex64,
    order: usize,
) -> Result<CoherentStateExpansion, CoherentError> {
    let required = bg_required_order(fam, z.norm())?;
    if order < required {
        return Err(CoherentError::TruncationTooSmall { order, required });
    }
    let spec = recurrence_for(fam)?;
    let norm_sq = bg_norm_series(fam, z.norm_sqr(), SeriesPolicy::default())?;
    let inv_norm = norm_sq.sqrt().recip();
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut coeff = c(inv_norm);
    for k in 0..=order {
        coeffs.push(coeff);
        coeff = coeff * z / bg_ladder_step(&spec, k);
    }
    Ok(CoherentStateExpansion {
        kind: StateKind::BarutGirardello,
        family: *fam,
        eigenvalue: z,
        coeffs,
        norm_sq,
        truncation: order,
    })
}

/// Σ_{n<=order} c_n p_n(ξ) in the orthonormal basis M̃_n or P̂_n.
pub fn bg_evaluate_series(
    fam: &PolynomialFamily,
    z: Complex64,
    xi: f64,
    order: usize,
) -> Result<Complex64, CoherentError> {
    bg_expansion(fam, z, order)?.amplitude(c(xi))
}

fn require_lattice_point(xi: f64) -> Result<(), CoherentError> {
    if !(xi >= 0.0) || xi != xi.round() {
        return Err(CoherentError::DomainError(format!(
            "Meixner states are evaluated at non-negative integers, got {xi}"
        )));
    }
    Ok(())
}

/// Position-space amplitude from the generating functions.
///
/// Meixner: 𝒩^{-1} e^t 1F1(-ξ; β; (1-γ)t/γ) with t = (γ-1)z/√2 at
/// integer ξ >= 0. Meixner–Pollaczek: 𝒩^{-1} e^{z e^{iφ}}
/// 1F1(ν+iξ; 2ν; -2iz sin φ) at real ξ.
pub fn bg_evaluate_closed(fam: &PolynomialFamily, z: Complex64, xi: f64) -> Result<Complex64, CoherentError> {
    let inv_norm = bg_norm_closed(fam, z.norm_sqr())?.sqrt().recip();
    let policy = SeriesPolicy::default();
    match *fam {
        PolynomialFamily::Meixner { beta, gamma } => {
            require_lattice_point(xi)?;
            let t = z * ((gamma - 1.0) / SQRT_2);
            let f = hyp1f1(c(-xi), c(beta), t * ((1.0 - gamma) / gamma), policy)?;
            Ok(t.exp() * f * inv_norm)
        }
        PolynomialFamily::MeixnerPollaczek { nu, phi } => {
            let shift = z * Complex64::from_polar(1.0, phi);
            let arg = z * Complex64::new(0.0, -2.0 * phi.sin());
            let f = hyp1f1(Complex64::new(nu, xi), c(2.0 * nu), arg, policy)?;
            Ok(shift.exp() * f * inv_norm)
        }
    }
}

/// The alternative closed forms: the ₁F₁ form with argument
/// (1-γ)²z/(γ√(2γ)) for Meixner states and e^{-iz}₁F₁(iξ-ν; 2ν; -2iz) for
/// Meixner–Pollaczek states at φ = π/2. Neither equals the series; they
/// are kept to quantify the difference.
pub fn bg_evaluate_alternative(fam: &PolynomialFamily, z: Complex64, xi: f64) -> Result<Complex64, CoherentError> {
    let policy = SeriesPolicy::default();
    let r = z.norm();
    match *fam {
        PolynomialFamily::Meixner { beta, gamma } => {
            require_lattice_point(xi)?;
            let kappa = (1.0 - gamma) / (2.0 * gamma).sqrt();
            let pre = kappa.sqrt() * r.powf(0.5 * (beta - 1.0))
                / (gamma_real(beta)? * bessel_i(beta - 1.0, 2.0 * kappa * r, policy)?).sqrt();
            let arg = z * ((1.0 - gamma).powi(2) / (gamma * (2.0 * gamma).sqrt()));
            Ok((z * kappa).exp() * hyp1f1(c(-xi), c(beta), arg, policy)? * pre)
        }
        PolynomialFamily::MeixnerPollaczek { nu, phi } => {
            if (phi - FRAC_PI_2).abs() > 1e-12 {
                return Err(CoherentError::DomainError(format!(
                    "the alternative Meixner-Pollaczek closed form holds only at phi = pi/2, got {phi}"
                )));
            }
            let pre = r.powf(nu - 0.5) / (gamma_real(2.0 * nu)? * bessel_i(2.0 * nu - 1.0, 2.0 * r, policy)?).sqrt();
            let iz = Complex64::i() * z;
            let f = hyp1f1(Complex64::new(-nu, xi), c(2.0 * nu), -2.0 * iz, policy)?;
            Ok((-iz).exp() * f * pre)
        }
    }
}

/// ⟨z₁|z₂⟩ = 0F1(; p; κ² z̄₁z₂) / √(0F1(; p; κ²|z₁|²) 0F1(; p; κ²|z₂|²)).
///
/// 0F1(; p; w) = Γ(p) w^{(1-p)/2} I_{p-1}(2√w) is entire in w, so this is
/// the Bessel-I quotient of the overlap with its branch factors cancelled.
pub fn bg_overlap(fam: &PolynomialFamily, z1: Complex64, z2: Complex64) -> Result<Complex64, CoherentError> {
    fam.validate()?;
    let (kappa, p) = bg_scale(fam);
    let q = kappa * kappa;
    let policy = SeriesPolicy::default();
    let cross = hyp0f1(c(p), z1.conj() * z2 * q, policy)?;
    let n1 = hyp0f1(c(p), c(q * z1.norm_sqr()), policy)?.re;
    let n2 = hyp0f1(c(p), c(q * z2.norm_sqr()), policy)?.re;
    Ok(cross / (n1 * n2).sqrt())
}

fn meixner_only(fam: &PolynomialFamily) -> Result<(f64, f64), CoherentError> {
    fam.meixner_params().map_err(CoherentError::Poly)
}

/// Resolution-of-unity measure Ŵ(|z|²) = ((1-γ)²/(πγ)) K_{β-1}(2κ|z|) I_{β-1}(2κ|z|).
pub fn bg_measure_density(fam: &PolynomialFamily, abs_z: f64) -> Result<f64, CoherentError> {
    let (beta, gamma) = meixner_only(fam)?;
    if !(abs_z > 0.0) {
        return Err(CoherentError::DomainError(format!("|z| must be positive, got {abs_z}")));
    }
    let (kappa, _) = bg_scale(fam);
    let y = 2.0 * kappa * abs_z;
    let k = bessel_k(beta - 1.0, y)?;
    let i = bessel_i(beta - 1.0, y, SeriesPolicy::default())?;
    Ok((1.0 - gamma).powi(2) / (PI * gamma) * k * i)
}

/// W(x) = (2/π) (q/Γ(β)) (qx)^{(β-1)/2} K_{β-1}(2κ√x), q = κ², the
/// density of the moment problem.
pub fn bg_moment_density(fam: &PolynomialFamily, x: f64) -> Result<f64, CoherentError> {
    let (beta, _) = meixner_only(fam)?;
    if !(x > 0.0) {
        return Err(CoherentError::DomainError(format!("x must be positive, got {x}")));
    }
    let (kappa, _) = bg_scale(fam);
    let q = kappa * kappa;
    let k = bessel_k(beta - 1.0, 2.0 * kappa * x.sqrt())?;
    Ok(2.0 / PI * q / gamma_real(beta)? * (q * x).powf(0.5 * (beta - 1.0)) * k)
}

/// π ∫ xⁿ W(x) dx = q^{-n} n! (β)_n on the half line.
pub fn bg_moment_problem(fam: &PolynomialFamily) -> Result<MomentProblem, CoherentError> {
    let (beta, _) = meixner_only(fam)?;
    let fam = *fam;
    let (kappa, _) = bg_scale(&fam);
    let q = kappa * kappa;
    // W ~ x^{min(0, β-1)} at the origin, from x^{(β-1)/2} K_{β-1}(2κ√x).
    let exponent = (beta - 1.0).min(0.0);
    let density = WeightDensity::new(Support::HalfLine, exponent, move |x| {
        bg_moment_density(&fam, x).unwrap_or(f64::NAN)
    });
    Ok(MomentProblem::new("barut-girardello", density, move |n| {
        q.powi(-(n as i32)) * factorial(n) * pochhammer_real(beta, n)
    }))
}
