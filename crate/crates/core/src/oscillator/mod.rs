//! Generalized oscillator algebra built from a symmetrized three-term
//! recurrence: coordinate, momentum and ladder matrices, the quadratic
//! Hamiltonian, the sp(2,ℝ) generators and their Casimir.
//!
//! Matrices are assembled from the defining actions on the Fock basis
//! e_0, e_1, ...; identities are then checked on the trusted interior of
//! the finite sections.

mod matrix;

pub use matrix::OperatorMatrix;

use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::polyfam::{PolyError, PolynomialFamily};

/// Smallest section order accepted by the matrix builders.
pub const MIN_ORDER: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OscError {
    #[error("operator sections have different orders: {0:?}")]
    DimensionMismatch(Vec<usize>),
    #[error("section order {order} is below the minimum {min}")]
    OrderTooSmall { order: usize, min: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

type Coefficient = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// Symmetrized Jacobi coefficients: x p_n = off(n) p_{n+1} - diag(n) p_n + off(n-1) p_{n-1}.
#[derive(Clone)]
pub struct RecurrenceSpec {
    offdiag: Coefficient,
    diag: Coefficient,
    family: PolynomialFamily,
}

impl fmt::Debug for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecurrenceSpec")
            .field("family", &self.family)
            .field("offdiag(0)", &self.offdiag(0))
            .field("diag(0)", &self.diag(0))
            .finish()
    }
}

impl RecurrenceSpec {
    pub fn new(
        offdiag: impl Fn(usize) -> f64 + Send + Sync + 'static,
        diag: impl Fn(usize) -> f64 + Send + Sync + 'static,
        family: PolynomialFamily,
    ) -> Self {
        RecurrenceSpec {
            offdiag: Arc::new(offdiag),
            diag: Arc::new(diag),
            family,
        }
    }

    pub fn offdiag(&self, n: usize) -> f64 {
        (self.offdiag)(n)
    }

    pub fn diag(&self, n: usize) -> f64 {
        (self.diag)(n)
    }

    pub fn family(&self) -> &PolynomialFamily {
        &self.family
    }

    /// Orthonormal polynomials p_0..=p_{n_max} at x by forward recurrence.
    pub fn evaluate(&self, n_max: usize, x: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n_max + 1);
        out.push(Complex64::new(1.0, 0.0));
        let mut prev = Complex64::new(0.0, 0.0);
        for n in 0..n_max {
            let back = if n == 0 { 0.0 } else { self.offdiag(n - 1) };
            let next = ((x + self.diag(n)) * out[n] - prev * back) / self.offdiag(n);
            prev = out[n];
            out.push(next);
        }
        out
    }

    /// Normalization of the sp(2,ℝ) generators, K± = c ã±.
    pub fn generator_scale(&self) -> f64 {
        match self.family {
            PolynomialFamily::Meixner { gamma, .. } => (1.0 - gamma) / (2.0 * gamma).sqrt(),
            PolynomialFamily::MeixnerPollaczek { phi, .. } => SQRT_2 * phi.sin(),
        }
    }

    /// μ(n) = √((n+1)(n+p)) with p = β or 2ν.
    pub fn ladder_eigenvalue(&self, n: usize) -> f64 {
        let p = self.family.pochhammer_param();
        ((n as f64 + 1.0) * (n as f64 + p)).sqrt()
    }

    /// Sign of the off-diagonal coefficients (and of the K₊ entries
    /// relative to μ): -1 for Meixner, +1 for Meixner–Pollaczek.
    pub fn offdiag_sign(&self) -> f64 {
        self.offdiag(0).signum()
    }
}

/// Meixner: b_n = √γ/(γ-1) √((β+n)(n+1)), a_n = (n + (n+β)γ)/(γ-1).
/// Meixner–Pollaczek: α_n = √((n+1)(2ν+n))/(2 sin φ), ã_n = (n+ν) cot φ.
pub fn recurrence_for(fam: &PolynomialFamily) -> Result<RecurrenceSpec, OscError> {
    let fam = fam.validate()?;
    Ok(match fam {
        PolynomialFamily::Meixner { beta, gamma } => {
            let pre = gamma.sqrt() / (gamma - 1.0);
            RecurrenceSpec::new(
                move |n| pre * ((beta + n as f64) * (n as f64 + 1.0)).sqrt(),
                move |n| (n as f64 + (n as f64 + beta) * gamma) / (gamma - 1.0),
                fam,
            )
        }
        PolynomialFamily::MeixnerPollaczek { nu, phi } => {
            let s = phi.sin();
            let cot = phi.cos() / s;
            RecurrenceSpec::new(
                move |n| ((n as f64 + 1.0) * (2.0 * nu + n as f64)).sqrt() / (2.0 * s),
                move |n| (n as f64 + nu) * cot,
                fam,
            )
        }
    })
}

fn check_order(n: usize, min: usize) -> Result<(), OscError> {
    if n < min {
        return Err(OscError::OrderTooSmall { order: n, min });
    }
    Ok(())
}

fn build(n: usize, bandwidth: usize, fill: impl Fn(&mut DMatrix<Complex64>)) -> OperatorMatrix {
    let mut m = DMatrix::zeros(n, n);
    fill(&mut m);
    OperatorMatrix::from_exact(m, bandwidth)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// X: X e_n = b_n e_{n+1} - a_n e_n + b_{n-1} e_{n-1}.
pub fn position_matrix(spec: &RecurrenceSpec, n: usize) -> Result<OperatorMatrix, OscError> {
    check_order(n, MIN_ORDER)?;
    Ok(build(n, 1, |m| {
        for k in 0..n {
            m[(k, k)] = re(-spec.diag(k));
            if k + 1 < n {
                m[(k + 1, k)] = re(spec.offdiag(k));
                m[(k, k + 1)] = re(spec.offdiag(k));
            }
        }
    }))
}

/// P: P e_n = -i b_n e_{n+1} - a_n e_n + i b_{n-1} e_{n-1}.
pub fn momentum_matrix(spec: &RecurrenceSpec, n: usize) -> Result<OperatorMatrix, OscError> {
    check_order(n, MIN_ORDER)?;
    Ok(build(n, 1, |m| {
        for k in 0..n {
            m[(k, k)] = re(-spec.diag(k));
            if k + 1 < n {
                m[(k + 1, k)] = im(-spec.offdiag(k));
                m[(k, k + 1)] = im(spec.offdiag(k));
            }
        }
    }))
}

/// (ã⁺, ã⁻) with ã⁺ e_n = √2 b_n e_{n+1} and ã⁻ = (ã⁺)ᵀ.
pub fn ladder_matrices(spec: &RecurrenceSpec, n: usize) -> Result<(OperatorMatrix, OperatorMatrix), OscError> {
    check_order(n, MIN_ORDER)?;
    let plus = build(n, 1, |m| {
        for k in 0..n - 1 {
            m[(k + 1, k)] = re(SQRT_2 * spec.offdiag(k));
        }
    });
    let minus = plus.adjoint();
    Ok((plus, minus))
}

/// X̃ = (ã⁺ + ã⁻)/√2, the real part of X - P.
pub fn tilde_position_matrix(spec: &RecurrenceSpec, n: usize) -> Result<OperatorMatrix, OscError> {
    let diff = &position_matrix(spec, n)? - &momentum_matrix(spec, n)?;
    Ok(OperatorMatrix::from_exact(diff.entries().map(|z| re(z.re)), 1))
}

/// P̃ = -i(ã⁺ - ã⁻)/√2, i times the imaginary part of -(X - P).
pub fn tilde_momentum_matrix(spec: &RecurrenceSpec, n: usize) -> Result<OperatorMatrix, OscError> {
    let diff = &position_matrix(spec, n)? - &momentum_matrix(spec, n)?;
    Ok(OperatorMatrix::from_exact(diff.entries().map(|z| im(-z.im)), 1))
}

/// H̃ = X̃² + P̃².
pub fn hamiltonian_matrix(spec: &RecurrenceSpec, n: usize) -> Result<OperatorMatrix, OscError> {
    let x = tilde_position_matrix(spec, n)?;
    let p = tilde_momentum_matrix(spec, n)?;
    Ok(&(&x * &x) + &(&p * &p))
}

/// The sp(2,ℝ) generators.
#[derive(Debug, Clone)]
pub struct Sp2rGenerators {
    pub k_plus: OperatorMatrix,
    pub k_minus: OperatorMatrix,
    pub k_zero: OperatorMatrix,
}

/// K± = c ã±, K₀ = ½[K⁻, K⁺].
pub fn sp2r_generators(spec: &RecurrenceSpec, n: usize) -> Result<Sp2rGenerators, OscError> {
    check_order(n, 4)?;
    let (a_plus, a_minus) = ladder_matrices(spec, n)?;
    let c = re(spec.generator_scale());
    let k_plus = a_plus.scale(c);
    let k_minus = a_minus.scale(c);
    let k_zero = k_minus.commutator(&k_plus).scale(re(0.5));
    Ok(Sp2rGenerators {
        k_plus,
        k_minus,
        k_zero,
    })
}

/// C₂ = K₀² - K₀ - K⁺K⁻.
pub fn casimir(
    k_plus: &OperatorMatrix,
    k_minus: &OperatorMatrix,
    k_zero: &OperatorMatrix,
) -> Result<OperatorMatrix, OscError> {
    let orders = vec![k_plus.order(), k_minus.order(), k_zero.order()];
    if orders.iter().any(|&o| o != orders[0]) {
        return Err(OscError::DimensionMismatch(orders));
    }
    Ok(&(&(k_zero * k_zero) - k_zero) - &(k_plus * k_minus))
}

/// Interior distance between the two sides of a matrix identity, divided
/// by max(1, largest interior entry of any product that enters it).
///
/// Entries of K±K∓ grow like n², so absolute residuals at a fixed number
/// of ulps grow with the section order; this measure does not.
pub fn identity_residual(lhs: &OperatorMatrix, rhs: &OperatorMatrix, terms: &[&OperatorMatrix]) -> f64 {
    let scale = terms.iter().map(|t| t.interior_max_abs()).fold(1.0, f64::max);
    lhs.interior_distance(rhs) / scale
}

/// Scaled residuals of the sp(2,ℝ) relations and of the Casimir scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sp2rResiduals {
    /// [K₀, K⁺] = K⁺.
    pub raise: f64,
    /// [K₀, K⁻] = -K⁻.
    pub lower: f64,
    /// [K⁻, K⁺] = 2K₀.
    pub close: f64,
    /// K₀² - K₀ - K⁺K⁻ = w(w-1) I.
    pub casimir: f64,
    /// max |K₀(n,n) - (n + w)|, absolute.
    pub weights: f64,
}

pub fn sp2r_residuals(spec: &RecurrenceSpec, n: usize) -> Result<Sp2rResiduals, OscError> {
    let g = sp2r_generators(spec, n)?;
    let (kp, km, k0) = (&g.k_plus, &g.k_minus, &g.k_zero);
    let commutator_residual = |a: &OperatorMatrix, b: &OperatorMatrix, expected: &OperatorMatrix| {
        let (ab, ba) = (a * b, b * a);
        identity_residual(&(&ab - &ba), expected, &[&ab, &ba, expected])
    };
    let raise = commutator_residual(k0, kp, kp);
    let lower = commutator_residual(k0, km, &km.scale(Complex64::new(-1.0, 0.0)));
    let close = commutator_residual(km, kp, &k0.scale(Complex64::new(2.0, 0.0)));
    let value = casimir_value(spec.family());
    let target = OperatorMatrix::identity(n).scale(Complex64::new(value, 0.0));
    let (k0k0, kpkm) = (k0 * k0, kp * km);
    let casimir = identity_residual(&casimir(kp, km, k0)?, &target, &[&k0k0, &kpkm, k0, &target]);
    let w = spec.family().lowest_weight();
    let weights = k0
        .interior_diagonal()
        .iter()
        .enumerate()
        .map(|(n, d)| (d - Complex64::new(n as f64 + w, 0.0)).norm())
        .fold(0.0, f64::max);
    Ok(Sp2rResiduals {
        raise,
        lower,
        close,
        casimir,
        weights,
    })
}

/// The Casimir scalar w(w-1), w = β/2 or ν.
pub fn casimir_value(fam: &PolynomialFamily) -> f64 {
    let w = fam.lowest_weight();
    w * (w - 1.0)
}

/// A closed-form spectrum n ↦ λ_n of the quadratic Hamiltonian.
#[derive(Clone)]
pub struct SpectrumFormula {
    lambda: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    label: &'static str,
}

impl fmt::Debug for SpectrumFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectrumFormula").field("label", &self.label).finish()
    }
}

impl SpectrumFormula {
    pub fn lambda(&self, n: usize) -> f64 {
        (self.lambda)(n)
    }

    pub fn label(&self) -> &'static str {
        self.label
    }

    /// λ₀ = 2b₀², λ_n = 2(b_{n-1}² + b_n²), valid for any family.
    pub fn from_recurrence(spec: &RecurrenceSpec) -> Self {
        let spec = spec.clone();
        SpectrumFormula {
            lambda: Arc::new(move |n| {
                let b = spec.offdiag(n);
                let prev = if n == 0 { 0.0 } else { spec.offdiag(n - 1) };
                2.0 * (prev * prev + b * b)
            }),
            label: "2(b_{n-1}^2 + b_n^2)",
        }
    }

    /// Closed form in the family parameters:
    /// Meixner (2√γ/(γ-1))² (n² + nβ + β/2) for n >= 1 and 2βγ/(γ-1)² at n = 0;
    /// Meixner–Pollaczek (n(n+2ν) + ν)/sin²φ.
    pub fn closed_form(fam: &PolynomialFamily) -> Self {
        match *fam {
            PolynomialFamily::Meixner { beta, gamma } => SpectrumFormula {
                lambda: Arc::new(move |n| {
                    let pre = (2.0 * gamma.sqrt() / (gamma - 1.0)).powi(2);
                    if n == 0 {
                        2.0 * beta * gamma / (gamma - 1.0).powi(2)
                    } else {
                        let nf = n as f64;
                        pre * (nf * nf + nf * beta + 0.5 * beta)
                    }
                }),
                label: "meixner closed form",
            },
            PolynomialFamily::MeixnerPollaczek { nu, phi } => SpectrumFormula {
                lambda: Arc::new(move |n| {
                    let nf = n as f64;
                    (nf * (nf + 2.0 * nu) + nu) / phi.sin().powi(2)
                }),
                label: "meixner-pollaczek closed form",
            },
        }
    }

    /// The alternative Meixner–Pollaczek expression λ₀ = ν/(2 sin²φ),
    /// λ_n = n(n+2ν)/sin²φ, kept for comparison only: it does not match the
    /// quadratic Hamiltonian.
    pub fn mp_alternative(fam: &PolynomialFamily) -> Result<Self, OscError> {
        let (nu, phi) = fam.mp_params()?;
        Ok(SpectrumFormula {
            lambda: Arc::new(move |n| {
                let s2 = phi.sin().powi(2);
                if n == 0 {
                    nu / (2.0 * s2)
                } else {
                    let nf = n as f64;
                    nf * (nf + 2.0 * nu) / s2
                }
            }),
            label: "mp alternative",
        })
    }
}

/// (2/c²)((n + w)² - w(w-1)), the quadratic Hamiltonian written through K₀
/// and the Casimir.
pub fn hamiltonian_from_casimir(spec: &RecurrenceSpec, n: usize) -> f64 {
    let w = spec.family().lowest_weight();
    let c = spec.generator_scale();
    let k0 = n as f64 + w;
    2.0 / (c * c) * (k0 * k0 - w * (w - 1.0))
}

/// max_{n <= n_max} |λ_n - (2/c²)((n+w)² - w(w-1))| with λ_n the closed-form
/// spectrum. For Meixner the prefactor is 4γ/(γ-1)².
pub fn hamiltonian_relation_residual(fam: &PolynomialFamily, n_max: usize) -> Result<f64, OscError> {
    let spec = recurrence_for(fam)?;
    let closed = SpectrumFormula::closed_form(fam);
    Ok((0..=n_max)
        .map(|n| (closed.lambda(n) - hamiltonian_from_casimir(&spec, n)).abs())
        .fold(0.0, f64::max))
}

/// Relative form of the same relation against the diagonal of the
/// constructed matrix X̃² + P̃², denominators max(|λ|, 1).
pub fn hamiltonian_relation_matrix_residual(fam: &PolynomialFamily, n_max: usize) -> Result<f64, OscError> {
    let spec = recurrence_for(fam)?;
    let h = hamiltonian_matrix(&spec, n_max + 3)?;
    Ok(h.interior_diagonal()
        .iter()
        .enumerate()
        .take(n_max + 1)
        .map(|(n, d)| {
            let target = hamiltonian_from_casimir(&spec, n);
            (d - target).norm() / target.abs().max(1.0)
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn meixner(beta: f64, gamma: f64) -> RecurrenceSpec {
        recurrence_for(&PolynomialFamily::meixner(beta, gamma).unwrap()).unwrap()
    }

    fn mp(nu: f64, phi: f64) -> RecurrenceSpec {
        recurrence_for(&PolynomialFamily::meixner_pollaczek(nu, phi).unwrap()).unwrap()
    }

    #[test]
    fn recurrence_coefficients() {
        let s = meixner(2.0, 0.4);
        assert!((s.offdiag(0).powi(2) - 2.0 * 0.4 / 0.36).abs() < 1e-14);
        for n in 0..50 {
            assert!(s.offdiag(n) < 0.0);
            let expected = 0.4 * (2.0 + n as f64) * (n as f64 + 1.0) / 0.36;
            assert!((s.offdiag(n).powi(2) - expected).abs() <= 1e-13 * expected);
        }
        let p = mp(1.0, FRAC_PI_2);
        for n in 0..20 {
            assert!(p.diag(n).abs() < 1e-14 * (n as f64 + 1.0));
            assert!(p.offdiag(n) > 0.0);
        }
        let bad = PolynomialFamily::Meixner { beta: -1.0, gamma: 0.5 };
        assert!(matches!(
            recurrence_for(&bad),
            Err(OscError::Poly(PolyError::InvalidFamily(_)))
        ));
    }

    #[test]
    fn position_and_momentum_entries() {
        let s = meixner(2.0, 0.4);
        let x = position_matrix(&s, 3).unwrap();
        let b0 = 0.4f64.sqrt() / (0.4 - 1.0) * 2f64.sqrt();
        let a1 = (1.0 + 3.0 * 0.4) / (0.4 - 1.0);
        assert!((x.get(0, 1).re - b0).abs() < 1e-15 && (x.get(1, 0).re - b0).abs() < 1e-15);
        assert!((x.get(1, 1).re + a1).abs() < 1e-15);
        assert_eq!(x.entries().transpose(), *x.entries());
        let p = momentum_matrix(&s, 8).unwrap();
        assert_eq!(p.interior_distance(&p.adjoint()), 0.0);
        assert!(position_matrix(&s, 2).is_err());
    }

    #[test]
    fn ladder_structure() {
        let s = meixner(2.5, 0.4);
        let (ap, am) = ladder_matrices(&s, 10).unwrap();
        assert_eq!(ap.adjoint(), am);
        for k in 0..10 {
            assert_eq!(am.get(k, 0), Complex64::new(0.0, 0.0));
        }
        for n in 1..10 {
            assert!((am.get(n - 1, n).re - SQRT_2 * s.offdiag(n - 1)).abs() < 1e-15);
        }
        let x = tilde_position_matrix(&s, 10).unwrap();
        let p = tilde_momentum_matrix(&s, 10).unwrap();
        let x2 = (&ap + &am).scale(re(1.0 / SQRT_2));
        let p2 = (&ap - &am).scale(im(-1.0 / SQRT_2));
        assert!(x.interior_distance(&x2) < 1e-15);
        assert!(p.interior_distance(&p2) < 1e-15);
    }

    #[test]
    fn hamiltonian_is_diagonal_with_closed_spectrum() {
        let fam = PolynomialFamily::meixner(2.5, 0.4).unwrap();
        let s = recurrence_for(&fam).unwrap();
        let h = hamiltonian_matrix(&s, 40).unwrap();
        assert!(h.interior_offdiagonal_max() <= 1e-12);
        let general = SpectrumFormula::from_recurrence(&s);
        let closed = SpectrumFormula::closed_form(&fam);
        for (n, d) in h.interior_diagonal().iter().enumerate() {
            assert!((d.re - general.lambda(n)).abs() <= 1e-12 * d.re);
            assert!((d.re - closed.lambda(n)).abs() <= 1e-10 * d.re);
        }
    }

    #[test]
    fn generators_and_casimir() {
        for (s, w) in [(meixner(3.0, 0.3), 1.5), (mp(1.2, FRAC_PI_2), 1.2), (mp(0.6, 1.0), 0.6)] {
            let g = sp2r_generators(&s, 24).unwrap();
            for n in [24, 64] {
                let r = sp2r_residuals(&s, n).unwrap();
                assert!(r.raise <= 1e-12 && r.lower <= 1e-12 && r.close <= 1e-12, "{r:?}");
                assert!(r.casimir <= 1e-12, "{r:?}");
                assert!(r.weights <= 1e-12 * (n as f64 + w), "{r:?}");
            }
            let c2 = casimir(&g.k_plus, &g.k_minus, &g.k_zero).unwrap();
            let target = OperatorMatrix::identity(24).scale(re(w * (w - 1.0)));
            assert!(c2.interior_distance(&target) < 1e-10);
            for n in 0..23 {
                let expected = s.offdiag_sign() * s.ladder_eigenvalue(n);
                assert!((g.k_plus.get(n + 1, n).re - expected).abs() < 1e-12);
            }
        }
        let g = sp2r_generators(&meixner(2.0, 0.5), 8).unwrap();
        let small = sp2r_generators(&meixner(2.0, 0.5), 6).unwrap();
        assert!(matches!(
            casimir(&g.k_plus, &small.k_minus, &g.k_zero),
            Err(OscError::DimensionMismatch(_))
        ));
        assert!(sp2r_generators(&meixner(2.0, 0.5), 3).is_err());
    }

    #[test]
    fn casimir_scalars() {
        assert_eq!(casimir_value(&PolynomialFamily::meixner(2.0, 0.5).unwrap()), 0.0);
        assert_eq!(casimir_value(&PolynomialFamily::meixner(3.0, 0.5).unwrap()), 0.75);
        assert_eq!(
            casimir_value(&PolynomialFamily::meixner_pollaczek(1.0, 1.0).unwrap()),
            0.0
        );
    }

    #[test]
    fn hamiltonian_relation() {
        let fam = PolynomialFamily::meixner(2.5, 0.4).unwrap();
        assert!(hamiltonian_relation_residual(&fam, 30).unwrap() <= 1e-10);
        assert!(hamiltonian_relation_matrix_residual(&fam, 30).unwrap() <= 1e-12);
        // n = 0: (4γ/(γ-1)²)(β/2) = 2βγ/(γ-1)²
        let s = recurrence_for(&fam).unwrap();
        let lam0 = 2.0 * 2.5 * 0.4 / 0.36;
        assert!((hamiltonian_from_casimir(&s, 0) - lam0).abs() < 1e-13);
        let p = PolynomialFamily::meixner_pollaczek(1.2, 1.0).unwrap();
        assert!(hamiltonian_relation_residual(&p, 30).unwrap() <= 1e-10);
    }

    #[test]
    fn mp_alternative_spectrum_differs() {
        let fam = PolynomialFamily::meixner_pollaczek(1.2, FRAC_PI_2).unwrap();
        let alt = SpectrumFormula::mp_alternative(&fam).unwrap();
        let closed = SpectrumFormula::closed_form(&fam);
        assert!((closed.lambda(0) - 1.2).abs() < 1e-14);
        assert!((alt.lambda(0) - 0.6).abs() < 1e-14);
        assert!((closed.lambda(3) - alt.lambda(3) - 1.2).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn hamiltonian_acts_diagonally(seed in proptest::collection::vec(-1.0f64..1.0, 30)) {
            let fam = PolynomialFamily::meixner(1.7, 0.6).unwrap();
            let s = recurrence_for(&fam).unwrap();
            let h = hamiltonian_matrix(&s, 36).unwrap();
            let t = h.trusted_interior() - 2;
            let norm = seed.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            let mut v = nalgebra::DVector::<Complex64>::zeros(36);
            for (i, x) in seed.iter().take(t).enumerate() {
                v[i] = re(x / norm);
            }
            let hv = h.entries() * &v;
            let spectrum = SpectrumFormula::from_recurrence(&s);
            let expected = nalgebra::DVector::from_fn(36, |i, _| v[i] * spectrum.lambda(i));
            let err = (hv - expected).norm();
            prop_assert!(err <= 1e-10);
        }
    }
}
