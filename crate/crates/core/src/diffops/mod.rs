//! Difference operators Σ_j c_j(ξ) e^{s_j ∂}, acting by f(ξ) ↦ Σ_j c_j(ξ)
//! f(ξ+s_j) with possibly complex shifts, their conjugation by multiplier
//! functions, and the catalog of realizations of the oscillator
//! generators, including the chain to the relativistic oscillator.

mod catalog;
mod chain;

pub use catalog::{catalog, meixner_basis_matrix, OperatorName};
pub use chain::{
    eta_multiplier, eta_ratio_residual, g_orientation_check, phase_multiplier, relativistic_chain, ChainReport,
    OrientationCandidate, OrientationReport, RelativisticParams,
};

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::polyfam::PolyError;
use crate::specfun::SpecFunError;

/// Two shifts closer than this are merged into one term.
pub const SHIFT_MERGE_TOL: f64 = 1e-12;

/// Grid points closer than this to a known coefficient singularity are
/// rejected.
pub const SINGULARITY_GUARD: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffOpError {
    #[error("unknown operator name {0:?}")]
    UnknownName(String),
    #[error("Meixner-Pollaczek difference realizations are defined at phi = pi/2, got {phi}")]
    PhiRestriction { phi: f64 },
    #[error("operators have different shift sets: {left:?} vs {right:?}")]
    ShiftMismatch {
        left: Vec<Complex64>,
        right: Vec<Complex64>,
    },
    #[error("multiplier {name} vanishes or is singular at {point}")]
    DivisionByZero { name: String, point: Complex64 },
    #[error("grid point {point} lies within 1e-6 of the singular point {singularity}")]
    SingularPoint { point: Complex64, singularity: Complex64 },
    #[error("operator {0} needs relativistic parameters")]
    MissingParameters(String),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

pub type Coefficient = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// One term c(ξ) e^{s∂}.
#[derive(Clone)]
pub struct Term {
    pub shift: Complex64,
    pub coeff: Coefficient,
}

#[derive(Clone)]
pub struct DifferenceOperator {
    pub terms: Vec<Term>,
    pub label: String,
    /// Points where some coefficient has a pole.
    pub singularities: Vec<Complex64>,
}

impl fmt::Debug for DifferenceOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shifts: Vec<Complex64> = self.terms.iter().map(|t| t.shift).collect();
        f.debug_struct("DifferenceOperator")
            .field("label", &self.label)
            .field("shifts", &shifts)
            .finish()
    }
}

fn same_shift(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= SHIFT_MERGE_TOL
}

impl DifferenceOperator {
    pub fn new(label: impl Into<String>) -> Self {
        DifferenceOperator {
            terms: Vec::new(),
            label: label.into(),
            singularities: Vec::new(),
        }
    }

    pub fn with_term<F>(mut self, shift: Complex64, coeff: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.terms.push(Term {
            shift,
            coeff: Arc::new(coeff),
        });
        self
    }

    pub fn with_singularity(mut self, point: Complex64) -> Self {
        self.singularities.push(point);
        self
    }

    pub fn identity() -> Self {
        Self::shift(Complex64::new(0.0, 0.0))
    }

    /// The pure shift e^{s∂}.
    pub fn shift(s: Complex64) -> Self {
        Self::new(format!("e^({s} d)")).with_term(s, |_| Complex64::new(1.0, 0.0))
    }

    /// Σ_j c_j(ξ) f(ξ+s_j). A term whose coefficient is exactly zero at ξ
    /// does not evaluate f, so f may be undefined at that shifted point.
    pub fn apply<F>(&self, f: F, xi: Complex64) -> Result<Complex64, DiffOpError>
    where
        F: Fn(Complex64) -> Result<Complex64, DiffOpError>,
    {
        let mut total = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let c = (term.coeff)(xi);
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            total += c * f(xi + term.shift)?;
        }
        Ok(total)
    }

    /// Terms with equal shifts combined, in order of first appearance.
    pub fn merged(&self) -> Self {
        let mut groups: Vec<(Complex64, Vec<Coefficient>)> = Vec::new();
        for term in &self.terms {
            match groups.iter_mut().find(|(s, _)| same_shift(*s, term.shift)) {
                Some((_, list)) => list.push(term.coeff.clone()),
                None => groups.push((term.shift, vec![term.coeff.clone()])),
            }
        }
        let terms = groups
            .into_iter()
            .map(|(shift, list)| {
                if list.len() == 1 {
                    return Term {
                        shift,
                        coeff: list[0].clone(),
                    };
                }
                let coeff: Coefficient = Arc::new(move |xi| list.iter().map(|c| c(xi)).sum());
                Term { shift, coeff }
            })
            .collect();
        DifferenceOperator {
            terms,
            label: self.label.clone(),
            singularities: self.singularities.clone(),
        }
    }

    /// (shift, coefficient) pairs of the merged operator at ξ.
    pub fn coefficients_at(&self, xi: Complex64) -> Vec<(Complex64, Complex64)> {
        self.merged().terms.iter().map(|t| (t.shift, (t.coeff)(xi))).collect()
    }

    /// The sum of two operators.
    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let mut singularities = self.singularities.clone();
        singularities.extend(&other.singularities);
        DifferenceOperator {
            terms,
            label: format!("({}) + ({})", self.label, other.label),
            singularities,
        }
        .merged()
    }

    /// self ∘ other: Σ_{j,k} a_j(ξ) b_k(ξ+s_j) e^{(s_j+t_k)∂}.
    pub fn compose(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let (ca, cb, s) = (a.coeff.clone(), b.coeff.clone(), a.shift);
                terms.push(Term {
                    shift: a.shift + b.shift,
                    coeff: Arc::new(move |xi| ca(xi) * cb(xi + s)),
                });
            }
        }
        let mut singularities = self.singularities.clone();
        for a in &self.terms {
            singularities.extend(other.singularities.iter().map(|p| p - a.shift));
        }
        DifferenceOperator {
            terms,
            label: format!("({}) o ({})", self.label, other.label),
            singularities,
        }
        .merged()
    }

    /// g ∘ self ∘ g^{-1}: every coefficient becomes ξ ↦ g(ξ)/g(ξ+s) c(ξ),
    /// with the ratio formed by the multiplier's [`RatioRule`]. The
    /// multiplier is checked to be finite and nonzero on the grid and on
    /// every shifted grid point.
    pub fn conjugate(&self, g: &MultiplierFunction, grid: &[Complex64]) -> Result<Self, DiffOpError> {
        for &xi in grid {
            for term in &self.terms {
                for point in [xi, xi + term.shift] {
                    if !g.is_regular_at(point) {
                        return Err(DiffOpError::DivisionByZero {
                            name: g.name.clone(),
                            point,
                        });
                    }
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let (g, c, s) = (g.clone(), t.coeff.clone(), t.shift);
                Term {
                    shift: s,
                    coeff: Arc::new(move |xi| g.ratio(xi, s) * c(xi)),
                }
            })
            .collect();
        let mut singularities = self.singularities.clone();
        for t in &self.terms {
            for p in &g.singular_points {
                singularities.push(*p);
                singularities.push(p - t.shift);
            }
        }
        Ok(DifferenceOperator {
            terms,
            label: format!("{} ({}) {}^-1", g.name, self.label, g.name),
            singularities,
        })
    }

    /// The same operator written in x = λξ: shifts become λs and
    /// coefficients are read at x/λ.
    pub fn rescale(&self, lambda: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let c = t.coeff.clone();
                Term {
                    shift: t.shift * lambda,
                    coeff: Arc::new(move |x| c(x / lambda)),
                }
            })
            .collect();
        DifferenceOperator {
            terms,
            label: format!("{} (x = {lambda} xi)", self.label),
            singularities: self.singularities.iter().map(|p| p * lambda).collect(),
        }
    }
}

/// How g(ξ)/g(ξ+s) is formed from log F.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioRule {
    /// g = F, analytic: F(ξ)/F(ξ+s).
    Direct,
    /// g = |F| with the shift taken inside the modulus: |F(ξ)/F(ξ+s)|.
    Modulus,
    /// g = F/|F| with the shift taken inside the phase: the phase of
    /// F(ξ)/F(ξ+s).
    Phase,
}

/// A multiplier g built from log F, where F is an analytic function.
#[derive(Clone)]
pub struct MultiplierFunction {
    pub name: String,
    log_value: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub rule: RatioRule,
    /// Zeros and poles of F, used by the grid guard.
    pub singular_points: Vec<Complex64>,
}

impl fmt::Debug for MultiplierFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierFunction")
            .field("name", &self.name)
            .field("rule", &self.rule)
            .finish()
    }
}

impl MultiplierFunction {
    /// g = F for a plain nonvanishing function F.
    pub fn analytic<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::from_log(name, RatioRule::Direct, move |xi| f(xi).ln())
    }

    /// g from the logarithm of F, e.g. log Γ, combined by `rule`.
    pub fn from_log<L>(name: impl Into<String>, rule: RatioRule, log_value: L) -> Self
    where
        L: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        MultiplierFunction {
            name: name.into(),
            log_value: Arc::new(log_value),
            rule,
            singular_points: Vec::new(),
        }
    }

    pub fn with_singular_points(mut self, points: Vec<Complex64>) -> Self {
        self.singular_points = points;
        self
    }

    /// 1/g under the same rule.
    pub fn inverse(&self) -> Self {
        let log = self.log_value.clone();
        MultiplierFunction {
            name: format!("1/{}", self.name),
            log_value: Arc::new(move |xi| -log(xi)),
            rule: self.rule,
            singular_points: self.singular_points.clone(),
        }
    }

    fn log_ratio(&self, xi: Complex64, shift: Complex64) -> Complex64 {
        (self.log_value)(xi) - (self.log_value)(xi + shift)
    }

    fn is_regular_at(&self, xi: Complex64) -> bool {
        let l = (self.log_value)(xi);
        l.re.is_finite() && l.im.is_finite()
    }

    /// g(ξ) itself; for the modulus and phase rules this is |F(ξ)| or
    /// F(ξ)/|F(ξ)|.
    pub fn value(&self, xi: Complex64) -> Complex64 {
        let l = (self.log_value)(xi);
        match self.rule {
            RatioRule::Direct => l.exp(),
            RatioRule::Modulus => Complex64::new(l.re.exp(), 0.0),
            RatioRule::Phase => Complex64::from_polar(1.0, l.im),
        }
    }

    /// g(ξ)/g(ξ+s).
    pub fn ratio(&self, xi: Complex64, shift: Complex64) -> Complex64 {
        let d = self.log_ratio(xi, shift);
        match self.rule {
            RatioRule::Direct => d.exp(),
            RatioRule::Modulus => Complex64::new(d.re.exp(), 0.0),
            RatioRule::Phase => Complex64::from_polar(1.0, d.im),
        }
    }
}

/// max over the grid and the shared shifts of |c₁(ξ) - c₂(ξ)|, after
/// merging equal shifts in each operator.
pub fn operator_equality_residual(
    op1: &DifferenceOperator,
    op2: &DifferenceOperator,
    grid: &[Complex64],
) -> Result<f64, DiffOpError> {
    let (a, b) = (op1.merged(), op2.merged());
    let left: Vec<Complex64> = a.terms.iter().map(|t| t.shift).collect();
    let right: Vec<Complex64> = b.terms.iter().map(|t| t.shift).collect();
    let matches = left.len() == right.len() && left.iter().all(|s| right.iter().any(|r| same_shift(*s, *r)));
    if !matches {
        return Err(DiffOpError::ShiftMismatch { left, right });
    }
    let mut worst: f64 = 0.0;
    for ta in &a.terms {
        let tb = b
            .terms
            .iter()
            .find(|t| same_shift(t.shift, ta.shift))
            .expect("shift sets match");
        for &xi in grid {
            worst = worst.max(((ta.coeff)(xi) - (tb.coeff)(xi)).norm());
        }
    }
    Ok(worst)
}

/// max over the grid of |op f_n(ξ) - expected f_n(ξ)| / max(1, |f_n(ξ)|).
pub fn eigen_action_residual<F>(
    op: &DifferenceOperator,
    eigenfunction: F,
    n: usize,
    expected: Complex64,
    grid: &[Complex64],
) -> Result<f64, DiffOpError>
where
    F: Fn(usize, Complex64) -> Result<Complex64, DiffOpError>,
{
    let mut worst: f64 = 0.0;
    for &xi in grid {
        let value = eigenfunction(n, xi)?;
        let image = op.apply(|z| eigenfunction(n, z), xi)?;
        worst = worst.max((image - expected * value).norm() / value.norm().max(1.0));
    }
    Ok(worst)
}

/// max over the grid of |op f(ξ) - target(ξ)| / max(1, |target(ξ)|), for
/// ladder actions that map one basis function onto a multiple of another.
pub fn action_residual<F, T>(
    op: &DifferenceOperator,
    input: F,
    target: T,
    grid: &[Complex64],
) -> Result<f64, DiffOpError>
where
    F: Fn(Complex64) -> Result<Complex64, DiffOpError>,
    T: Fn(Complex64) -> Result<Complex64, DiffOpError>,
{
    let mut worst: f64 = 0.0;
    for &xi in grid {
        let expected = target(xi)?;
        let image = op.apply(&input, xi)?;
        worst = worst.max((image - expected).norm() / expected.norm().max(1.0));
    }
    Ok(worst)
}

/// Collects grid points, rejecting any within [`SINGULARITY_GUARD`] of a
/// singularity recorded on one of the operators.
pub fn build_grid<I>(points: I, ops: &[&DifferenceOperator]) -> Result<Vec<Complex64>, DiffOpError>
where
    I: IntoIterator<Item = Complex64>,
{
    let mut grid = Vec::new();
    for point in points {
        for op in ops {
            if let Some(s) = op
                .singularities
                .iter()
                .find(|s| (point - **s).norm() < SINGULARITY_GUARD)
            {
                return Err(DiffOpError::SingularPoint { point, singularity: *s });
            }
        }
        grid.push(point);
    }
    Ok(grid)
}

/// Evenly spaced real points lo, lo+step, ..., up to hi inclusive.
pub fn real_grid(lo: f64, hi: f64, step: f64) -> Vec<Complex64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| Complex64::new(lo + k as f64 * step, 0.0)).collect()
}
