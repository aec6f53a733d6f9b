use std::f64::consts::FRAC_PI_2;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DiffOpError, DifferenceOperator, RelativisticParams};
use crate::polyfam::{meixner_renorm, meixner_support_cutoff, meixner_weight, PolynomialFamily};

const PHI_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorName {
    /// Linear-spectrum Meixner Hamiltonian on the Meixner functions.
    MeixnerH0,
    /// K̂⁺, K̂⁻ and Ĥ acting on M̂_n = (-1)ⁿ M̃_n.
    MeixnerKplusHat,
    MeixnerKminusHat,
    MeixnerHhat,
    /// γ(ξ+β)e^∂ - [ξ+(ξ+β)γ] + ξe^{-∂}, eigenvalue n(γ-1) on M̃_n.
    MeixnerSchrodinger,
    /// k⁺, k⁻ and h at φ = π/2 acting on P̂_n.
    MpKplus,
    MpKminus,
    MpH,
    /// The same generators after conjugation by |Γ(ν+iξ)|.
    MpKplusCircle,
    MpKminusCircle,
    MpHCircle,
    /// The Meixner–Pollaczek difference equation at any φ, normalized to
    /// eigenvalue n+ν.
    MpDifference,
    HS,
    HA,
    HRel,
    /// h_Rel written with ch(iλ∂).
    HRelCh,
}

impl OperatorName {
    pub const ALL: [OperatorName; 16] = [
        OperatorName::MeixnerH0,
        OperatorName::MeixnerKplusHat,
        OperatorName::MeixnerKminusHat,
        OperatorName::MeixnerHhat,
        OperatorName::MeixnerSchrodinger,
        OperatorName::MpKplus,
        OperatorName::MpKminus,
        OperatorName::MpH,
        OperatorName::MpKplusCircle,
        OperatorName::MpKminusCircle,
        OperatorName::MpHCircle,
        OperatorName::MpDifference,
        OperatorName::HS,
        OperatorName::HA,
        OperatorName::HRel,
        OperatorName::HRelCh,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorName::MeixnerH0 => "meixnerH0",
            OperatorName::MeixnerKplusHat => "meixnerKplusHat",
            OperatorName::MeixnerKminusHat => "meixnerKminusHat",
            OperatorName::MeixnerHhat => "meixnerHhat",
            OperatorName::MeixnerSchrodinger => "meixnerSchrodinger",
            OperatorName::MpKplus => "mpKplus",
            OperatorName::MpKminus => "mpKminus",
            OperatorName::MpH => "mpH",
            OperatorName::MpKplusCircle => "mpKplusCircle",
            OperatorName::MpKminusCircle => "mpKminusCircle",
            OperatorName::MpHCircle => "mpHCircle",
            OperatorName::MpDifference => "mpDifference",
            OperatorName::HS => "hS",
            OperatorName::HA => "hA",
            OperatorName::HRel => "hRel",
            OperatorName::HRelCh => "hRelCh",
        }
    }
}

impl FromStr for OperatorName {
    type Err = DiffOpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OperatorName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| DiffOpError::UnknownName(s.to_string()))
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn i() -> Complex64 {
    Complex64::i()
}

/// μ(ξ) = √((ξ+1)(ξ+β)), principal branch.
fn mu(xi: Complex64, beta: f64) -> Complex64 {
    ((xi + 1.0) * (xi + beta)).sqrt()
}

fn mp_at_half_pi(fam: &PolynomialFamily) -> Result<f64, DiffOpError> {
    let (nu, phi) = fam.mp_params()?;
    if (phi - FRAC_PI_2).abs() > PHI_TOL {
        return Err(DiffOpError::PhiRestriction { phi });
    }
    Ok(nu)
}

fn relativistic(
    name: OperatorName,
    fam: &PolynomialFamily,
    extra: Option<&RelativisticParams>,
) -> Result<RelativisticParams, DiffOpError> {
    let params = *extra.ok_or_else(|| DiffOpError::MissingParameters(name.as_str().into()))?;
    let nu = mp_at_half_pi(fam)?;
    if (nu - params.nu).abs() > 1e-12 * params.nu {
        return Err(DiffOpError::DomainError(format!(
            "{} needs nu(nu-1) = lambda^-4, i.e. nu = {}, got {nu}",
            name.as_str(),
            params.nu
        )));
    }
    Ok(params)
}

/// The named difference operator with its coefficient functions.
/// Meixner–Pollaczek and relativistic names need φ = π/2 (except
/// `mpDifference`), and `hA`, `hRel`, `hRelCh` need the relativistic
/// parameters with ν matching the family.
pub fn catalog(
    name: OperatorName,
    fam: &PolynomialFamily,
    extra: Option<&RelativisticParams>,
) -> Result<DifferenceOperator, DiffOpError> {
    fam.validate()?;
    let label = name.as_str();
    let up = c(1.0);
    let down = c(-1.0);
    let zero = c(0.0);
    use OperatorName::*;
    let op = match name {
        MeixnerH0 | MeixnerKplusHat | MeixnerKminusHat | MeixnerHhat | MeixnerSchrodinger => {
            let (beta, gamma) = fam.meixner_params()?;
            let sg = gamma.sqrt();
            let d = 1.0 - gamma;
            let centre = move |xi: Complex64| xi + 0.5 * beta;
            match name {
                MeixnerH0 => DifferenceOperator::new(label)
                    .with_term(zero, move |xi| centre(xi) * ((1.0 + gamma) / d))
                    .with_term(up, move |xi| mu(xi, beta) * (-sg / d))
                    .with_term(down, move |xi| mu(xi - 1.0, beta) * (-sg / d)),
                MeixnerKplusHat => DifferenceOperator::new(label)
                    .with_term(up, move |xi| (xi + beta) * (gamma.powf(1.5) / d))
                    .with_term(down, move |xi| xi / (sg * d))
                    .with_term(zero, move |xi| centre(xi) * (-2.0 * sg / d)),
                MeixnerKminusHat => DifferenceOperator::new(label)
                    .with_term(up, move |xi| (xi + beta) * (sg / d))
                    .with_term(down, move |xi| xi * (sg / d))
                    .with_term(zero, move |xi| centre(xi) * (-2.0 * sg / d)),
                MeixnerHhat => DifferenceOperator::new(label)
                    .with_term(zero, move |xi| centre(xi) * ((1.0 + gamma) / d))
                    .with_term(up, move |xi| (xi + beta) * (-gamma / d))
                    .with_term(down, move |xi| xi * (-1.0 / d)),
                _ => DifferenceOperator::new(label)
                    .with_term(up, move |xi| (xi + beta) * gamma)
                    .with_term(zero, move |xi| -(xi + (xi + beta) * gamma))
                    .with_term(down, |xi| xi),
            }
        }
        MpKplus | MpKminus | MpH => {
            let nu = mp_at_half_pi(fam)?;
            let sign = match name {
                MpKplus => 1.0,
                MpKminus => -1.0,
                _ => 0.0,
            };
            if name == MpH {
                DifferenceOperator::new(label)
                    .with_term(i(), move |xi| (nu - i() * xi) * 0.5)
                    .with_term(-i(), move |xi| (nu + i() * xi) * 0.5)
            } else {
                DifferenceOperator::new(label)
                    .with_term(i(), move |xi| i() * 0.5 * sign * (nu - i() * xi))
                    .with_term(-i(), move |xi| -i() * 0.5 * sign * (nu + i() * xi))
                    .with_term(zero, |xi| xi)
            }
        }
        MpKplusCircle | MpKminusCircle | MpHCircle => {
            let nu = mp_at_half_pi(fam)?;
            let raise = move |xi: Complex64| (nu - i() * xi) * (nu - 1.0 + i() * xi).norm();
            let lower = move |xi: Complex64| (nu + i() * xi) / (nu + i() * xi).norm();
            let op = match name {
                MpHCircle => DifferenceOperator::new(label)
                    .with_term(i(), move |xi| raise(xi) * 0.5)
                    .with_term(-i(), move |xi| lower(xi) * 0.5),
                _ => {
                    let sign = if name == MpKplusCircle { 1.0 } else { -1.0 };
                    DifferenceOperator::new(label)
                        .with_term(i(), move |xi| i() * 0.5 * sign * raise(xi))
                        .with_term(-i(), move |xi| -i() * 0.5 * sign * lower(xi))
                        .with_term(zero, |xi| xi)
                }
            };
            op.with_singularity(Complex64::new(0.0, nu))
        }
        MpDifference => {
            let (nu, phi) = fam.mp_params()?;
            let e = Complex64::from_polar(1.0, phi);
            let den = i() * (2.0 * phi.sin());
            DifferenceOperator::new(label)
                .with_term(i(), move |xi| e * (nu - i() * xi) / den)
                .with_term(zero, move |xi| i() * 2.0 * phi.cos() * xi / den)
                .with_term(-i(), move |xi| -e.conj() * (nu + i() * xi) / den)
        }
        HS => {
            let nu = mp_at_half_pi(fam)?;
            DifferenceOperator::new(label)
                .with_term(i(), move |xi| (nu * (nu - 1.0) + i() * xi + xi * xi) * 0.5)
                .with_term(-i(), |_| c(0.5))
        }
        HA | HRel | HRelCh => {
            let RelativisticParams { lambda, .. } = relativistic(name, fam, extra)?;
            let (plus, minus) = (i() * lambda, -i() * lambda);
            let l2 = lambda * lambda;
            match name {
                HA => DifferenceOperator::new(label)
                    .with_term(plus, move |x| (c(l2.powi(-2)) + i() * x / lambda + x * x / l2) * 0.5)
                    .with_term(minus, |_| c(0.5)),
                HRel => DifferenceOperator::new(label)
                    .with_term(plus, move |x| (c(1.0 / l2) + i() * lambda * x + x * x) * 0.5)
                    .with_term(minus, move |_| c(0.5 / l2)),
                _ => DifferenceOperator::new(label)
                    .with_term(plus, move |_| c(0.5 / l2))
                    .with_term(minus, move |_| c(0.5 / l2))
                    .with_term(plus, move |x| (x + i() * lambda) * x * 0.5),
            }
        }
    };
    Ok(op)
}

/// ⟨M̂_m, op M̂_n⟩ under the weight ρ̃ for m, n < order: the matrix of a
/// Meixner difference operator in the basis M̂_n = (-1)ⁿ M̃_n.
pub fn meixner_basis_matrix(
    op: &DifferenceOperator,
    fam: &PolynomialFamily,
    order: usize,
) -> Result<DMatrix<Complex64>, DiffOpError> {
    let cutoff = meixner_support_cutoff(fam, order + 1)?;
    let hat = |n: usize, xi: Complex64| -> Result<Complex64, DiffOpError> {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(meixner_renorm(n, xi, fam)? * sign)
    };
    let mut m = DMatrix::zeros(order, order);
    for xi in 0..=cutoff {
        let point = c(xi as f64);
        let w = meixner_weight(xi as f64, fam)?;
        let basis: Vec<Complex64> = (0..order).map(|k| hat(k, point)).collect::<Result<_, _>>()?;
        for col in 0..order {
            let image = op.apply(|z| hat(col, z), point)?;
            for row in 0..order {
                m[(row, col)] += basis[row] * image * w;
            }
        }
    }
    Ok(m)
}
