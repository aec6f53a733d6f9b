use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::catalog::{catalog, OperatorName};
use super::{operator_equality_residual, DiffOpError, MultiplierFunction, RatioRule};
use crate::polyfam::PolynomialFamily;
use crate::specfun::{ln_gamma, ln_gamma_real};

/// λ > 0 and ν = 1/2 + √(1/4 + λ^{-4}), the root of ν(ν-1) = λ^{-4} above 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativisticParams {
    pub lambda: f64,
    pub nu: f64,
}

impl RelativisticParams {
    pub fn new(lambda: f64) -> Result<Self, DiffOpError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(DiffOpError::DomainError(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        let nu = 0.5 + (0.25 + lambda.powi(-4)).sqrt();
        Ok(RelativisticParams { lambda, nu })
    }

    /// The Meixner–Pollaczek family at this ν and φ = π/2.
    pub fn family(&self) -> PolynomialFamily {
        PolynomialFamily::MeixnerPollaczek {
            nu: self.nu,
            phi: FRAC_PI_2,
        }
    }
}

fn ln_gamma_or_pole(z: Complex64) -> Complex64 {
    ln_gamma(z).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

fn gamma_poles(nu: f64, sign: f64) -> Vec<Complex64> {
    // Γ(ν ± iξ) has poles at ν ± iξ = -k
    (0..8).map(|k| Complex64::new(0.0, sign * (nu + k as f64))).collect()
}

/// The multiplier |Γ(ν+iξ)| 2^ν / √(2πΓ(2ν)), with g(ξ)/g(ξ+s) formed as
/// |Γ(ν+iξ)/Γ(ν+i(ξ+s))|.
fn modulus_plus(nu: f64) -> MultiplierFunction {
    let constant = nu * 2f64.ln() - 0.5 * ((2.0 * PI).ln() + ln_gamma_real(2.0 * nu).unwrap_or(f64::NAN));
    MultiplierFunction::from_log("|Gamma(nu+i xi)|", RatioRule::Modulus, move |xi| {
        ln_gamma_or_pole(Complex64::new(nu, 0.0) + Complex64::i() * xi) + constant
    })
    .with_singular_points(gamma_poles(nu, 1.0))
}

/// |Γ(ν-iξ)| with the shift inside the modulus.
fn modulus_minus(nu: f64) -> MultiplierFunction {
    MultiplierFunction::from_log("|Gamma(nu-i xi)|", RatioRule::Modulus, move |xi| {
        ln_gamma_or_pole(Complex64::new(nu, 0.0) - Complex64::i() * xi)
    })
    .with_singular_points(gamma_poles(nu, -1.0))
}

/// √(Γ(ν+iξ)Γ(ν-iξ)) as an analytic function of ξ.
fn analytic_product(nu: f64) -> MultiplierFunction {
    MultiplierFunction::from_log("sqrt(Gamma(nu+i xi) Gamma(nu-i xi))", RatioRule::Direct, move |xi| {
        let a = ln_gamma_or_pole(Complex64::new(nu, 0.0) + Complex64::i() * xi);
        let b = ln_gamma_or_pole(Complex64::new(nu, 0.0) - Complex64::i() * xi);
        (a + b) * 0.5
    })
    .with_singular_points([gamma_poles(nu, 1.0), gamma_poles(nu, -1.0)].concat())
}

/// S = e^{i arg Γ(ν+iξ)}, with the shift taken inside the phase.
pub fn phase_multiplier(nu: f64) -> MultiplierFunction {
    MultiplierFunction::from_log("S", RatioRule::Phase, move |xi| {
        ln_gamma_or_pole(Complex64::new(nu, 0.0) + Complex64::i() * xi)
    })
    .with_singular_points(gamma_poles(nu, 1.0))
}

/// η(x) = λ^{2ix/λ - 1/2}.
pub fn eta_multiplier(lambda: f64) -> MultiplierFunction {
    let ln_l = lambda.ln();
    MultiplierFunction::from_log("eta", RatioRule::Direct, move |x| {
        (Complex64::i() * (2.0 / lambda) * x - 0.5) * ln_l
    })
}

/// max over the grid of the relative errors of η(x)/η(x+iλ) = λ² and
/// η(x)/η(x-iλ) = λ^{-2}, with η evaluated pointwise.
pub fn eta_ratio_residual(lambda: f64, grid: &[Complex64]) -> f64 {
    let eta = eta_multiplier(lambda);
    let shift = Complex64::new(0.0, lambda);
    let l2 = lambda * lambda;
    let mut worst: f64 = 0.0;
    for &x in grid {
        let up = eta.value(x) / eta.value(x + shift);
        let down = eta.value(x) / eta.value(x - shift);
        worst = worst.max((up - l2).norm() / l2).max((down - 1.0 / l2).norm() * l2);
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrientationCandidate {
    pub label: String,
    /// max over the grid of the distance between g(ξ)/g(ξ±i) and the
    /// target factors |ν-1+iξ| and 1/|ν+iξ|.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrientationReport {
    pub candidates: Vec<OrientationCandidate>,
    /// Index of the candidate with the smallest residual.
    pub selected: usize,
}

impl OrientationReport {
    pub fn selected(&self) -> &OrientationCandidate {
        &self.candidates[self.selected]
    }
}

fn multiplier_candidates(nu: f64) -> Vec<MultiplierFunction> {
    let base = [modulus_plus(nu), modulus_minus(nu), analytic_product(nu)];
    let mut all: Vec<MultiplierFunction> = base.to_vec();
    all.extend(base.iter().map(|g| g.inverse()));
    all
}

/// Compares the readings of the multiplier g against the target
/// conjugation W e^{±i∂} W^{-1} = |ν-1+iξ| e^{i∂}, |ν+iξ|^{-1} e^{-i∂} on
/// the grid.
pub fn g_orientation_check(nu: f64, grid: &[Complex64]) -> OrientationReport {
    let candidates: Vec<OrientationCandidate> = multiplier_candidates(nu)
        .iter()
        .map(|g| {
            let mut worst: f64 = 0.0;
            for &xi in grid {
                let up = g.ratio(xi, Complex64::i());
                let down = g.ratio(xi, -Complex64::i());
                let target_up = (Complex64::new(nu - 1.0, 0.0) + Complex64::i() * xi).norm();
                let target_down = 1.0 / (Complex64::new(nu, 0.0) + Complex64::i() * xi).norm();
                let r = (up - target_up).norm().max((down - target_down).norm());
                worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
            }
            OrientationCandidate {
                label: g.name.clone(),
                residual: worst,
            }
        })
        .collect();
    let selected = candidates
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.residual.total_cmp(&b.1.residual))
        .map(|(k, _)| k)
        .unwrap_or(0);
    OrientationReport { candidates, selected }
}

/// Stage-by-stage distances along h → W h W^{-1} → S(·)S^{-1} → ξ = x/λ →
/// η(·)η^{-1}, each against its catalog operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub params: RelativisticParams,
    pub orientation: OrientationReport,
    /// W mpH W^{-1} against mpHCircle.
    pub w_stage: f64,
    /// After S, against hS.
    pub s_stage: f64,
    /// After ξ = x/λ, against hA.
    pub rescale_stage: f64,
    /// After η, against hRel.
    pub final_stage: f64,
    /// After η, against the ch(iλ∂) form.
    pub ch_form: f64,
    /// hRel against its ch(iλ∂) form.
    pub ch_vs_first_line: f64,
    pub eta_ratio: f64,
}

impl ChainReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.w_stage,
            self.s_stage,
            self.rescale_stage,
            self.final_stage,
            self.ch_form,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Runs the conjugation chain from mpH on the x grid (ξ = x/λ before the
/// rescaling), with W taken from the candidate selected by
/// [`g_orientation_check`].
pub fn relativistic_chain(params: RelativisticParams, x_grid: &[Complex64]) -> Result<ChainReport, DiffOpError> {
    let fam = params.family();
    let lambda = params.lambda;
    let xi_grid: Vec<Complex64> = x_grid.iter().map(|x| x / lambda).collect();
    let orientation = g_orientation_check(params.nu, &xi_grid);
    let w = multiplier_candidates(params.nu).swap_remove(orientation.selected);

    let h = catalog(OperatorName::MpH, &fam, None)?;
    let circle = h.conjugate(&w, &xi_grid)?;
    let w_stage = operator_equality_residual(&circle, &catalog(OperatorName::MpHCircle, &fam, None)?, &xi_grid)?;

    let hs = circle.conjugate(&phase_multiplier(params.nu), &xi_grid)?;
    let s_stage = operator_equality_residual(&hs, &catalog(OperatorName::HS, &fam, None)?, &xi_grid)?;

    let ha = hs.rescale(lambda);
    let extra = Some(&params);
    let rescale_stage = operator_equality_residual(&ha, &catalog(OperatorName::HA, &fam, extra)?, x_grid)?;

    let rel = ha.conjugate(&eta_multiplier(lambda), x_grid)?;
    let h_rel = catalog(OperatorName::HRel, &fam, extra)?;
    let h_ch = catalog(OperatorName::HRelCh, &fam, extra)?;
    Ok(ChainReport {
        params,
        orientation,
        w_stage,
        s_stage,
        rescale_stage,
        final_stage: operator_equality_residual(&rel, &h_rel, x_grid)?,
        ch_form: operator_equality_residual(&rel, &h_ch, x_grid)?,
        ch_vs_first_line: operator_equality_residual(&h_rel, &h_ch, x_grid)?,
        eta_ratio: eta_ratio_residual(lambda, x_grid),
    })
}
