use std::f64::consts::PI;

use num_complex::Complex64;

use super::meixner::meixner_renorm_with;
use super::{PolyError, PolynomialFamily};
use crate::quadrature::{adaptive_vec_panels, QuadTolerance};
#[cfg(test)]
use crate::specfun::hyp_terminating_scaled;
use crate::specfun::{gamma_abs_sq, ln_gamma_real, CompensatedSum};

const INTEGRAND_TAIL_BOUND: f64 = 1e-16;
const PANEL_WIDTH: f64 = 4.0;

/// Choice of √γ when a Meixner polynomial is continued to γ = e^{-2iφ}.
///
/// `Minus` takes √γ = e^{-iφ}, which makes the symmetrized Meixner
/// coefficient b_n equal to +iα_n; `Plus` takes √γ = -e^{-iφ} (b_n = -iα_n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtBranch {
    Plus,
    Minus,
}

impl SqrtBranch {
    pub fn sqrt_gamma(self, phi: f64) -> Complex64 {
        let root = Complex64::from_polar(1.0, -phi);
        match self {
            SqrtBranch::Minus => root,
            SqrtBranch::Plus => -root,
        }
    }
}

/// The 2F1 factor of the defining formula, with the sum of |terms|.
///
/// The series in 1 - e^{-2iφ} cancels by up to ten decades at n = 20, so
/// values are taken from [`balanced_sum`]; this form is kept for checks.
#[cfg(test)]
fn hyp_part(n: usize, xi: Complex64, nu: f64, phi: f64) -> Result<(Complex64, f64), PolyError> {
    let z = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -2.0 * phi);
    let upper = [
        Complex64::new(-(n as f64), 0.0),
        Complex64::new(nu, 0.0) + Complex64::i() * xi,
    ];
    Ok(hyp_terminating_scaled(&upper, &[Complex64::new(2.0 * nu, 0.0)], z)?)
}

/// e^{-inφ} P_n^ν(ξ; φ) = Σ_k (ν+iξ)_k (ν-iξ)_{n-k} / (k! (n-k)!) e^{-2ikφ},
/// the same polynomial written as (ν-iξ)_n/n! 2F1(-n, ν+iξ; 1-n-ν+iξ; e^{-2iφ}).
/// Returns the sum and the sum of |terms|.
fn balanced_sum(n: usize, xi: Complex64, nu: f64, phi: f64) -> (Complex64, f64) {
    let a = Complex64::new(nu, 0.0) + Complex64::i() * xi;
    let b = Complex64::new(nu, 0.0) - Complex64::i() * xi;
    let mut left = Vec::with_capacity(n + 1);
    let mut right = Vec::with_capacity(n + 1);
    let (mut l, mut r) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for k in 0..=n {
        left.push(l);
        right.push(r);
        l *= (a + k as f64) / (k as f64 + 1.0);
        r *= (b + k as f64) / (k as f64 + 1.0);
    }
    let mut sum = CompensatedSum::new();
    let mut scale = 0.0;
    for k in 0..=n {
        let term = left[k] * right[n - k] * Complex64::from_polar(1.0, -2.0 * k as f64 * phi);
        scale += term.norm();
        sum.add(term);
    }
    (sum.value(), scale)
}

/// P_n^ν(ξ; φ) = ((2ν)_n/n!) e^{inφ} 2F1(-n, ν+iξ; 2ν; 1 - e^{-2iφ}).
pub fn mp_raw(n: usize, xi: Complex64, fam: &PolynomialFamily) -> Result<Complex64, PolyError> {
    let (nu, phi) = fam.mp_params()?;
    let (s, _) = balanced_sum(n, xi, nu, phi);
    Ok(s * Complex64::from_polar(1.0, n as f64 * phi))
}

#[cfg(test)]
fn raw_prefactor(n: usize, nu: f64, phi: f64) -> Complex64 {
    let ratio = (0..n).fold(1.0, |acc, k| acc * (2.0 * nu + k as f64) / (k as f64 + 1.0));
    Complex64::from_polar(ratio, n as f64 * phi)
}

/// √(n!/(2ν)_n) e^{inφ}.
fn renorm_prefactor(n: usize, nu: f64, phi: f64) -> Complex64 {
    let ratio = (0..n).fold(1.0, |acc, k| acc * ((k as f64 + 1.0) / (2.0 * nu + k as f64)).sqrt());
    Complex64::from_polar(ratio, n as f64 * phi)
}

/// Drops the imaginary part after checking it is rounding noise: at most
/// 1e-12 |value| plus 64 ulps of the summed term magnitudes.
fn project_real(value: Complex64, scale: f64) -> Result<f64, PolyError> {
    let allowed = 1e-12 * value.norm() + 64.0 * f64::EPSILON * scale;
    if value.im.abs() > allowed {
        return Err(PolyError::NotReal { value, scale });
    }
    Ok(value.re)
}

/// P_n^ν(ξ; φ) at real ξ.
pub fn mp_raw_real(n: usize, xi: f64, fam: &PolynomialFamily) -> Result<f64, PolyError> {
    let (nu, phi) = fam.mp_params()?;
    let (s, scale) = balanced_sum(n, Complex64::new(xi, 0.0), nu, phi);
    project_real(s * Complex64::from_polar(1.0, n as f64 * phi), scale)
}

/// P̂_n = P_n √(n!/(2ν)_n), orthonormal for the density of
/// [`mp_weight_density`].
pub fn mp_renorm(n: usize, xi: Complex64, fam: &PolynomialFamily) -> Result<Complex64, PolyError> {
    let (nu, phi) = fam.mp_params()?;
    let (s, _) = balanced_sum(n, xi, nu, phi);
    Ok(s * renorm_prefactor(n, nu, phi))
}

pub fn mp_renorm_real(n: usize, xi: f64, fam: &PolynomialFamily) -> Result<f64, PolyError> {
    let (nu, phi) = fam.mp_params()?;
    let (s, scale) = balanced_sum(n, Complex64::new(xi, 0.0), nu, phi);
    let pre = renorm_prefactor(n, nu, phi);
    project_real(s * pre, scale * pre.norm())
}

/// |Γ(ν+iξ)|² e^{(2φ-π)ξ} (2 sin φ)^{2ν} / (2π Γ(2ν)).
pub fn mp_weight_density(xi: f64, fam: &PolynomialFamily) -> Result<f64, PolyError> {
    let (nu, phi) = fam.mp_params()?;
    let log = gamma_abs_sq(nu, xi)?.ln() + (2.0 * phi - PI) * xi + 2.0 * nu * (2.0 * phi.sin()).ln()
        - (2.0 * PI).ln()
        - ln_gamma_real(2.0 * nu)?;
    Ok(log.exp())
}

/// M̃_n(iξ - ν; 2ν, e^{-2iφ}) with the given √γ branch. With
/// [`SqrtBranch::Minus`] this equals P̂_n^ν(ξ; φ).
pub fn mp_via_meixner(
    n: usize,
    xi: Complex64,
    fam: &PolynomialFamily,
    branch: SqrtBranch,
) -> Result<Complex64, PolyError> {
    let (nu, phi) = fam.mp_params()?;
    let gamma = Complex64::from_polar(1.0, -2.0 * phi);
    meixner_renorm_with(n, Complex64::i() * xi - nu, 2.0 * nu, gamma, branch.sqrt_gamma(phi))
}

/// Half-width L of the integration window for products P̂_n P̂_m,
/// n, m <= n_max: the smallest multiple of the panel width with
/// density(±L) max_n P̂_n(±L)² < 1e-16 on both sides.
pub fn mp_integration_limit(fam: &PolynomialFamily, n_max: usize) -> Result<f64, PolyError> {
    let bound_at = |x: f64| -> Result<f64, PolyError> {
        let d = mp_weight_density(x, fam)?;
        let mut peak: f64 = 0.0;
        for n in 0..=n_max {
            peak = peak.max(mp_renorm_real(n, x, fam)?.powi(2));
        }
        Ok(d * peak)
    };
    let mut l = PANEL_WIDTH;
    for _ in 0..1000 {
        if bound_at(l)? < INTEGRAND_TAIL_BOUND && bound_at(-l)? < INTEGRAND_TAIL_BOUND {
            return Ok(l);
        }
        l += PANEL_WIDTH;
    }
    Err(PolyError::DomainError(
        "weight does not decay within |xi| <= 4000".into(),
    ))
}

/// Gram matrix ∫ P̂_n P̂_m dμ, n, m <= n_max, by adaptive quadrature on
/// [-L, L] split into panels of width 4 (0 is a breakpoint).
pub fn mp_gram(fam: &PolynomialFamily, n_max: usize, tol: QuadTolerance) -> Result<Vec<Vec<f64>>, PolyError> {
    let limit = mp_integration_limit(fam, n_max)?;
    let panels = (limit / PANEL_WIDTH).round() as i64;
    let breakpoints: Vec<f64> = (-panels..=panels).map(|k| k as f64 * PANEL_WIDTH).collect();
    let dim = (n_max + 1) * (n_max + 2) / 2;
    // Evaluation errors cannot cross the quadrature callback; they are
    // recorded and reported after integration.
    let failure = std::sync::Mutex::new(None);
    let integrals = adaptive_vec_panels(
        |x, out: &mut [f64]| {
            let eval = |out: &mut [f64]| -> Result<(), PolyError> {
                let d = mp_weight_density(x, fam)?;
                let values = (0..=n_max)
                    .map(|n| mp_renorm_real(n, x, fam))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut idx = 0;
                for n in 0..=n_max {
                    for m in n..=n_max {
                        out[idx] = d * values[n] * values[m];
                        idx += 1;
                    }
                }
                Ok(())
            };
            if let Err(e) = eval(out) {
                out.iter_mut().for_each(|v| *v = 0.0);
                failure.lock().unwrap().get_or_insert(e);
            }
        },
        dim,
        &breakpoints,
        tol,
    )?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut gram = vec![vec![0.0; n_max + 1]; n_max + 1];
    let mut idx = 0;
    for n in 0..=n_max {
        for m in n..=n_max {
            gram[n][m] = integrals[idx];
            gram[m][n] = integrals[idx];
            idx += 1;
        }
    }
    Ok(gram)
}
