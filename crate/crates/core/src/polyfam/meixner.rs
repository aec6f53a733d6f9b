use num_complex::Complex64;

use super::{PolyError, PolynomialFamily};
use crate::oscillator::recurrence_for;
use crate::specfun::{compensated_sum, extend, hyp1f1, hyp_terminating_extended, ln_gamma, SeriesPolicy, SpecFunError};

const WEIGHT_TAIL_BOUND: f64 = 1e-14;
const PSI_TAIL_BOUND: f64 = 1e-18;
const ENVELOPE_DECREASING_RUN: usize = 8;
const MAX_SUPPORT: usize = 2_000_000;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// M_n(ξ; β, γ) = 2F1(-n, -ξ; β; 1 - 1/γ), for complex ξ.
pub fn meixner_raw(n: usize, xi: Complex64, fam: &PolynomialFamily) -> Result<Complex64, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    raw_with(n, xi, c(beta), c(gamma))
}

fn raw_with(n: usize, xi: Complex64, beta: Complex64, gamma: Complex64) -> Result<Complex64, PolyError> {
    // 1 - 1/γ is formed in extended precision: the alternating series can
    // amplify a relative error in z by six decades or more.
    let one = extend(c(1.0));
    let z = one - one / extend(gamma);
    Ok(hyp_terminating_extended(&[c(-(n as f64)), -xi], &[beta], z)?.0)
}

/// M_0..=M_{n_max} at ξ from the unsymmetrized recurrence
/// (γ-1)ξ M_n = γ(n+β) M_{n+1} - [n + (n+β)γ] M_n + n M_{n-1}.
pub fn meixner_raw_recurrence(
    n_max: usize,
    xi: Complex64,
    fam: &PolynomialFamily,
) -> Result<Vec<Complex64>, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(c(1.0));
    let mut prev = c(0.0);
    for n in 0..n_max {
        let nf = n as f64;
        let cur = out[n];
        let next = (((gamma - 1.0) * xi + nf + (nf + beta) * gamma) * cur - nf * prev) / (gamma * (nf + beta));
        prev = cur;
        out.push(next);
    }
    Ok(out)
}

/// c_n = γ^{-n/2} √(n!/(β)_n).
pub fn meixner_norm_constant(n: usize, fam: &PolynomialFamily) -> Result<f64, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    Ok((0..n).fold(1.0, |acc, k| {
        acc * ((k as f64 + 1.0) / (gamma * (beta + k as f64))).sqrt()
    }))
}

/// M̃_n = M_n / c_n.
pub fn meixner_renorm(n: usize, xi: Complex64, fam: &PolynomialFamily) -> Result<Complex64, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    meixner_renorm_with(n, xi, beta, c(gamma), c(gamma.sqrt()))
}

/// M̃_n with complex γ and an explicit choice of √γ: M_n · (√γ)^n √((β)_n/n!).
/// This is the continuation used to connect with Meixner–Pollaczek
/// polynomials, where γ lies on the unit circle.
pub fn meixner_renorm_with(
    n: usize,
    xi: Complex64,
    beta: f64,
    gamma: Complex64,
    sqrt_gamma: Complex64,
) -> Result<Complex64, PolyError> {
    if !(beta > 0.0) {
        return Err(PolyError::DomainError(format!("beta must be positive, got {beta}")));
    }
    let raw = raw_with(n, xi, c(beta), gamma)?;
    let scale = (0..n).fold(c(1.0), |acc, k| {
        acc * sqrt_gamma * ((beta + k as f64) / (k as f64 + 1.0)).sqrt()
    });
    Ok(raw * scale)
}

/// Normalized negative-binomial weight ρ̃(ξ) = (β)_ξ γ^ξ (1-γ)^β / ξ! at a
/// non-negative integer ξ.
pub fn meixner_weight(xi: f64, fam: &PolynomialFamily) -> Result<f64, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    if !(xi >= 0.0) || xi != xi.round() {
        return Err(PolyError::DomainError(format!(
            "Meixner weight is defined on non-negative integers, got {xi}"
        )));
    }
    let k = xi as usize;
    Ok((0..k).fold((1.0 - gamma).powf(beta), |acc, j| {
        acc * gamma * (beta + j as f64) / (j as f64 + 1.0)
    }))
}

/// ρ̃ continued to complex ξ through Γ(β+ξ)/(Γ(β)Γ(ξ+1)) γ^ξ (1-γ)^β;
/// zero where 1/Γ(ξ+1) vanishes.
pub fn meixner_weight_analytic(xi: Complex64, fam: &PolynomialFamily) -> Result<Complex64, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    let den = match ln_gamma(xi + 1.0) {
        Ok(v) => v,
        Err(SpecFunError::PoleError(_)) => return Ok(c(0.0)),
        Err(e) => return Err(e.into()),
    };
    let log = ln_gamma(xi + beta)? - ln_gamma(c(beta))? - den + xi * gamma.ln() + beta * (1.0 - gamma).ln();
    Ok(log.exp())
}

/// Meixner function ψ_n(ξ) = (-1)^n √ρ̃(ξ) M̃_n(ξ).
pub fn meixner_function(n: usize, xi: usize, fam: &PolynomialFamily) -> Result<f64, PolyError> {
    let w = meixner_weight(xi as f64, fam)?;
    let m = meixner_renorm(n, c(xi as f64), fam)?.re;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * w.sqrt() * m)
}

/// Last ξ kept in discrete sums over the Meixner lattice involving ψ_n,
/// n <= n_max.
///
/// The weight tail is dominated by a geometric series once the ratio
/// r = γ(β+ξ)/(ξ+1) bound is below one, and the cut is placed where
/// ρ̃(Ξ)/(1-r) < 1e-14. Because ψ_n² carries an extra ξ^{2n} growth the cut
/// is then pushed further, until max_n ψ_n(Ξ)² < 1e-18 on a run of
/// decreasing values.
pub fn meixner_support_cutoff(fam: &PolynomialFamily, n_max: usize) -> Result<usize, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    let spec = recurrence_for(fam).map_err(|e| PolyError::InvalidFamily(e.to_string()))?;
    let mut rho = (1.0 - gamma).powf(beta);
    let mut previous = f64::INFINITY;
    let mut run = 0usize;
    for xi in 0..MAX_SUPPORT {
        let xf = xi as f64;
        let ratio = gamma * (beta + xf) / (xf + 1.0);
        let bound = ratio.max(gamma);
        if bound < 1.0 && rho / (1.0 - bound) < WEIGHT_TAIL_BOUND {
            let envelope = spec
                .evaluate(n_max, c(xf))
                .iter()
                .map(|p| rho * p.norm_sqr())
                .fold(0.0, f64::max);
            run = if envelope < previous { run + 1 } else { 0 };
            previous = envelope;
            if envelope < PSI_TAIL_BOUND && run >= ENVELOPE_DECREASING_RUN {
                return Ok(xi);
            }
        }
        rho *= ratio;
    }
    Err(PolyError::DomainError(format!(
        "no support cutoff below {MAX_SUPPORT} for n_max={n_max}"
    )))
}

/// Gram matrix G_{nm} = Σ_ξ ρ̃(ξ) M̃_n(ξ) M̃_m(ξ), n, m <= n_max, using the
/// hypergeometric definition of M̃_n.
pub fn meixner_gram(fam: &PolynomialFamily, n_max: usize) -> Result<Vec<Vec<f64>>, PolyError> {
    let cutoff = meixner_support_cutoff(fam, n_max)?;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(cutoff + 1);
    let mut weights = Vec::with_capacity(cutoff + 1);
    for xi in 0..=cutoff {
        weights.push(meixner_weight(xi as f64, fam)?);
        let values = (0..=n_max)
            .map(|n| meixner_renorm(n, c(xi as f64), fam).map(|v| v.re))
            .collect::<Result<Vec<_>, _>>()?;
        columns.push(values);
    }
    let mut gram = vec![vec![0.0; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        for m in n..=n_max {
            let s = compensated_sum(columns.iter().zip(&weights).map(|(v, w)| w * v[n] * v[m]));
            gram[n][m] = s;
            gram[m][n] = s;
        }
    }
    Ok(gram)
}

/// Dual Gram matrix D_{ξξ'} = Σ_n ψ_n(ξ) ψ_n(ξ'), ξ, ξ' <= xi_max.
///
/// By self-duality ψ_n(ξ)² is proportional to ψ_ξ(n)², so the n-sum is cut
/// with the same rule as the lattice sums.
pub fn meixner_dual_gram(fam: &PolynomialFamily, xi_max: usize) -> Result<Vec<Vec<f64>>, PolyError> {
    let n_cut = meixner_support_cutoff(fam, xi_max)?;
    let table = (0..=xi_max)
        .map(|xi| {
            (0..=n_cut)
                .map(|n| meixner_function(n, xi, fam))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut dual = vec![vec![0.0; xi_max + 1]; xi_max + 1];
    for a in 0..=xi_max {
        for b in a..=xi_max {
            let s = compensated_sum(table[a].iter().zip(&table[b]).map(|(x, y)| x * y));
            dual[a][b] = s;
            dual[b][a] = s;
        }
    }
    Ok(dual)
}

/// (1 - t/γ)^ξ (1 - t)^{-ξ-β}, the generating function of (β)_n M_n(ξ)/n!.
pub fn meixner_genfn_binomial(xi: f64, t: Complex64, fam: &PolynomialFamily) -> Result<Complex64, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    let one = c(1.0);
    Ok(complex_pow(one - t / gamma, xi) * complex_pow(one - t, -xi - beta))
}

/// Σ_{n<=n_terms} (β)_n/n! M_n(ξ) t^n.
pub fn meixner_genfn_binomial_partial(
    xi: f64,
    t: Complex64,
    fam: &PolynomialFamily,
    n_terms: usize,
) -> Result<Complex64, PolyError> {
    let (beta, _) = fam.meixner_params()?;
    let mut coeff = c(1.0);
    let mut terms = Vec::with_capacity(n_terms + 1);
    for n in 0..=n_terms {
        terms.push(coeff * meixner_raw(n, c(xi), fam)?);
        coeff *= t * (beta + n as f64) / (n as f64 + 1.0);
    }
    Ok(sum_complex(&terms))
}

/// e^t 1F1(-ξ; β; (1-γ)t/γ), the generating function of M_n(ξ)/n!.
pub fn meixner_genfn_exponential(
    xi: f64,
    t: Complex64,
    fam: &PolynomialFamily,
    policy: SeriesPolicy,
) -> Result<Complex64, PolyError> {
    let (beta, gamma) = fam.meixner_params()?;
    Ok(t.exp() * hyp1f1(c(-xi), c(beta), t * ((1.0 - gamma) / gamma), policy)?)
}

/// Σ_{n<=n_terms} M_n(ξ) t^n / n!.
pub fn meixner_genfn_exponential_partial(
    xi: f64,
    t: Complex64,
    fam: &PolynomialFamily,
    n_terms: usize,
) -> Result<Complex64, PolyError> {
    let mut coeff = c(1.0);
    let mut terms = Vec::with_capacity(n_terms + 1);
    for n in 0..=n_terms {
        terms.push(coeff * meixner_raw(n, c(xi), fam)?);
        coeff *= t / (n as f64 + 1.0);
    }
    Ok(sum_complex(&terms))
}

/// w^p on the principal branch, exact repeated multiplication for small
/// integer p.
fn complex_pow(w: Complex64, p: f64) -> Complex64 {
    if p == p.round() && p.abs() <= 64.0 {
        w.powi(p as i32)
    } else {
        w.powf(p)
    }
}

fn sum_complex(terms: &[Complex64]) -> Complex64 {
    Complex64::new(
        compensated_sum(terms.iter().map(|t| t.re)),
        compensated_sum(terms.iter().map(|t| t.im)),
    )
}
