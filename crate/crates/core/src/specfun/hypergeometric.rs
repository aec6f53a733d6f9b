use num_complex::Complex64;

use super::extended::{contract, extend, ExtendedComplex};
use super::{CompensatedSum, SeriesPolicy, SpecFunError, TailGuard};

/// Returns m when z = -m for an integer m >= 0.
fn nonpositive_integer(z: Complex64) -> Option<usize> {
    (z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()).then(|| (-z.re) as usize)
}

/// Terminating generalized hypergeometric series rFs(upper; lower; z).
///
/// At least one upper parameter must be a non-positive integer -n; the sum
/// then has exactly n+1 terms (the smallest such n wins).
pub fn hyp_terminating(upper: &[Complex64], lower: &[Complex64], z: Complex64) -> Result<Complex64, SpecFunError> {
    hyp_terminating_scaled(upper, lower, z).map(|(value, _)| value)
}

/// Like [`hyp_terminating`], also returning Σ|term_k|, the scale against
/// which the rounding error of the sum is measured.
pub fn hyp_terminating_scaled(
    upper: &[Complex64],
    lower: &[Complex64],
    z: Complex64,
) -> Result<(Complex64, f64), SpecFunError> {
    hyp_terminating_extended(upper, lower, extend(z))
}

/// Terminating series with the argument given in double-double precision.
///
/// Terms are formed and summed in double-double arithmetic, so the result
/// is accurate to working precision even when Σ|term_k| exceeds the value
/// by many decades. Callers that derive z from other parameters should do
/// so in extended precision as well.
pub fn hyp_terminating_extended(
    upper: &[Complex64],
    lower: &[Complex64],
    z: ExtendedComplex,
) -> Result<(Complex64, f64), SpecFunError> {
    let order = upper
        .iter()
        .filter_map(|&a| nonpositive_integer(a))
        .min()
        .ok_or(SpecFunError::NotTerminating)?;
    if let Some(&param) = lower
        .iter()
        .find(|&&b| nonpositive_integer(b).is_some_and(|m| m < order))
    {
        return Err(SpecFunError::LowerParamPole { param });
    }

    let upper: Vec<ExtendedComplex> = upper.iter().map(|&a| extend(a)).collect();
    let lower: Vec<ExtendedComplex> = lower.iter().map(|&b| extend(b)).collect();
    let one = extend(Complex64::new(1.0, 0.0));
    let mut term = one;
    let mut sum = one;
    let mut scale = 1.0;
    for k in 0..order {
        let kf = extend(Complex64::new(k as f64, 0.0));
        let num = upper.iter().fold(z, |acc, &a| acc * (a + kf));
        let den = lower.iter().fold(kf + one, |acc, &b| acc * (b + kf));
        term = term * num / den;
        scale += contract(term).norm();
        sum = sum + term;
    }
    Ok((contract(sum), scale))
}

/// Confluent hypergeometric function 1F1(a; b; z) by direct series.
pub fn hyp1f1(a: Complex64, b: Complex64, z: Complex64, policy: SeriesPolicy) -> Result<Complex64, SpecFunError> {
    if nonpositive_integer(b).is_some() {
        return Err(SpecFunError::DomainError(format!(
            "1F1 lower parameter {b} is a non-positive integer"
        )));
    }
    if nonpositive_integer(a).is_some() {
        return hyp_terminating(&[a], &[b], z);
    }
    let mut sum = CompensatedSum::new();
    let mut term = Complex64::new(1.0, 0.0);
    sum.add(term);
    let mut guard = TailGuard::default();
    for k in 0..policy.max_terms {
        let kf = k as f64;
        term = term * (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum.add(term);
        if guard.settled(term.norm(), sum.value().norm(), policy.rel_tol) {
            return Ok(sum.value());
        }
    }
    Err(SpecFunError::NoConvergence {
        max_terms: policy.max_terms,
    })
}

/// 0F1(; b; z) = Σ z^k / ((b)_k k!). This is Γ(b) (√z)^{1-b} I_{b-1}(2√z)
/// as an entire function of z, so it has no branch cut.
pub fn hyp0f1(b: Complex64, z: Complex64, policy: SeriesPolicy) -> Result<Complex64, SpecFunError> {
    if nonpositive_integer(b).is_some() {
        return Err(SpecFunError::DomainError(format!(
            "0F1 lower parameter {b} is a non-positive integer"
        )));
    }
    let mut sum = CompensatedSum::new();
    let mut term = Complex64::new(1.0, 0.0);
    sum.add(term);
    let mut guard = TailGuard::default();
    for k in 0..policy.max_terms {
        let kf = k as f64;
        term = term * z / ((b + kf) * (kf + 1.0));
        sum.add(term);
        if guard.settled(term.norm(), sum.value().norm(), policy.rel_tol) {
            return Ok(sum.value());
        }
    }
    Err(SpecFunError::NoConvergence {
        max_terms: policy.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::factorial;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_upper_parameter_gives_one() {
        let z = Complex64::new(-2.3, 0.7);
        assert_eq!(hyp_terminating(&[c(-0.0), c(1.7)], &[c(0.4)], z).unwrap(), c(1.0));
        assert_eq!(hyp_terminating(&[c(-2.0), c(-0.0)], &[c(2.5)], z).unwrap(), c(1.0));
    }

    #[test]
    fn two_term_expansion_matches_first_meixner_recurrence_step() {
        // 2F1(-1, -ξ; β; 1-1/γ) = 1 + (ξ/β)(1-1/γ); from the recurrence at n=0,
        // M_1 = [βγ - (1-γ)ξ] / (βγ).
        let (xi, beta, gamma) = (3.7, 2.0, 0.4);
        let z = c(1.0 - 1.0 / gamma);
        let got = hyp_terminating(&[c(-1.0), c(-xi)], &[c(beta)], z).unwrap();
        let two_term = 1.0 + (xi / beta) * (1.0 - 1.0 / gamma);
        let from_recurrence = (beta * gamma - (1.0 - gamma) * xi) / (beta * gamma);
        assert!((got.re - two_term).abs() < 1e-14);
        assert!((two_term - from_recurrence).abs() < 1e-14);
    }

    #[test]
    fn lower_pole_and_non_terminating_errors() {
        let z = c(0.5);
        assert!(matches!(
            hyp_terminating(&[c(-3.0)], &[c(-1.0)], z),
            Err(SpecFunError::LowerParamPole { .. })
        ));
        // pole exactly at the termination order is not reached
        assert!(hyp_terminating(&[c(-2.0)], &[c(-2.0)], z).is_ok());
        assert_eq!(
            hyp_terminating(&[c(0.5)], &[c(1.0)], z),
            Err(SpecFunError::NotTerminating)
        );
    }

    #[test]
    fn hyp1f1_trivial_cases() {
        let p = SeriesPolicy::default();
        let z = Complex64::new(0.3, -1.1);
        assert_eq!(hyp1f1(c(1.3), c(2.0), c(0.0), p).unwrap(), c(1.0));
        let beta = 2.7;
        let got = hyp1f1(c(-1.0), c(beta), z, p).unwrap();
        assert!((got - (1.0 - z / beta)).norm() < 1e-15);
        assert!(hyp1f1(c(1.0), c(-2.0), z, p).is_err());
    }

    #[test]
    fn hyp1f1_reports_non_convergence() {
        let p = SeriesPolicy::new(1e-14, 5).unwrap();
        assert!(matches!(
            hyp1f1(c(0.5), c(1.5), c(30.0), p),
            Err(SpecFunError::NoConvergence { max_terms: 5 })
        ));
    }

    #[test]
    fn hyp1f1_meixner_generating_function() {
        // e^t 1F1(-ξ; β; (1-γ)t/γ) = Σ M_n(ξ) t^n / n!,
        // with M_n from 2F1(-n,-ξ;β;1-1/γ); oracle summed until the tail < 1e-12.
        let (beta, gamma) = (2.0, 0.4);
        for xi in 0..=4 {
            for &t in &[0.2f64, -0.5, 1.3] {
                let closed = t.exp()
                    * hyp1f1(
                        c(-(xi as f64)),
                        c(beta),
                        c((1.0 - gamma) * t / gamma),
                        SeriesPolicy::default(),
                    )
                    .unwrap()
                    .re;
                let mut series = 0.0;
                for n in 0..80 {
                    let m = hyp_terminating(&[c(-(n as f64)), c(-(xi as f64))], &[c(beta)], c(1.0 - 1.0 / gamma))
                        .unwrap()
                        .re;
                    let term = m * t.powi(n as i32) / factorial(n);
                    series += term;
                    if n > 10 && term.abs() < 1e-16 {
                        break;
                    }
                }
                assert!(
                    (closed - series).abs() <= 1e-12 * series.abs().max(1.0),
                    "xi={xi} t={t}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn kummer_sanity(a_re in 0.1f64..4.0, z_re in -5.0f64..5.0, z_im in -3.0f64..3.0) {
            let z = Complex64::new(z_re, z_im);
            prop_assume!(z.norm() <= 5.0);
            let got = hyp1f1(c(a_re), c(a_re), z, SeriesPolicy::default()).unwrap();
            prop_assert!((got - z.exp()).norm() <= 1e-13 * z.exp().norm().max(1.0));
        }

        #[test]
        fn hyp0f1_matches_exponential_limit(z_re in -4.0f64..4.0) {
            // 0F1(;1/2; z²/4) = cosh z
            let z = c(z_re);
            let got = hyp0f1(c(0.5), z * z / 4.0, SeriesPolicy::default()).unwrap();
            prop_assert!((got.re - z_re.cosh()).abs() <= 1e-13 * z_re.cosh());
        }
    }
}
