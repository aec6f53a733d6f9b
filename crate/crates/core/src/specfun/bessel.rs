use std::f64::consts::PI;

use super::gamma::rgamma_real;
use super::{CompensatedSum, SeriesPolicy, SpecFunError, TailGuard};
use num_complex::Complex64;

/// Below this argument K is formed from the I series by reflection; above it
/// the cancellation I_{-α} - I_α costs more than e^{2x} ulps, so the integral
/// representation takes over.
const K_REFLECTION_MAX_X: f64 = 2.0;
const K_NEAR_INTEGER: f64 = 1e-6;
const K_ORDER_OFFSET: f64 = 1e-4;

/// Modified Bessel function of the first kind I_α(x), α > -1, x >= 0,
/// summed from (x/2)^α Σ (x²/4)^m / (m! Γ(m+α+1)).
pub fn bessel_i(alpha: f64, x: f64, policy: SeriesPolicy) -> Result<f64, SpecFunError> {
    if !(alpha > -1.0) || !(x >= 0.0) {
        return Err(SpecFunError::DomainError(format!(
            "bessel_i needs alpha > -1 and x >= 0, got ({alpha}, {x})"
        )));
    }
    if x == 0.0 {
        return match alpha {
            0.0 => Ok(1.0),
            a if a > 0.0 => Ok(0.0),
            _ => Err(SpecFunError::DomainError(format!("I_{alpha}(0) is infinite"))),
        };
    }
    i_series(alpha, x, policy)
}

/// I_α(x) for any real order and x > 0 (negative integer orders fold onto
/// their positive counterparts).
pub fn bessel_i_any_order(alpha: f64, x: f64, policy: SeriesPolicy) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::DomainError(format!(
            "bessel_i_any_order needs x > 0, got {x}"
        )));
    }
    let alpha = if alpha < 0.0 && alpha == alpha.round() {
        -alpha
    } else {
        alpha
    };
    i_series(alpha, x, policy)
}

fn i_series(alpha: f64, x: f64, policy: SeriesPolicy) -> Result<f64, SpecFunError> {
    let w = 0.25 * x * x;
    let mut term = (0.5 * x).powf(alpha) * rgamma_real(alpha + 1.0);
    let mut sum = CompensatedSum::new();
    sum.add(Complex64::new(term, 0.0));
    let mut guard = TailGuard::default();
    for m in 0..policy.max_terms {
        let mf = m as f64;
        term *= w / ((mf + 1.0) * (mf + 1.0 + alpha));
        sum.add(Complex64::new(term, 0.0));
        if guard.settled(term.abs(), sum.value().re.abs(), policy.rel_tol) {
            return Ok(sum.value().re);
        }
    }
    Err(SpecFunError::NoConvergence {
        max_terms: policy.max_terms,
    })
}

/// Modified Bessel function of the second kind K_α(x), x > 0.
///
/// For x <= 2: K_α = (π/2)(I_{-α} - I_α)/sin(απ); orders within 1e-6 of an
/// integer use the average of the values at α ± 1e-4 (error O(1e-8)).
/// For x > 2: [`bessel_k_integral`].
pub fn bessel_k(alpha: f64, x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::DomainError(format!("bessel_k needs x > 0, got {x}")));
    }
    let alpha = alpha.abs();
    if x > K_REFLECTION_MAX_X {
        return bessel_k_integral(alpha, x);
    }
    if (alpha - alpha.round()).abs() > K_NEAR_INTEGER {
        k_reflection(alpha, x)
    } else {
        let up = k_reflection(alpha + K_ORDER_OFFSET, x)?;
        let down = k_reflection(alpha - K_ORDER_OFFSET, x)?;
        Ok(0.5 * (up + down))
    }
}

fn k_reflection(alpha: f64, x: f64) -> Result<f64, SpecFunError> {
    let policy = SeriesPolicy::new(1e-16, 500)?;
    let i_neg = bessel_i_any_order(-alpha, x, policy)?;
    let i_pos = bessel_i_any_order(alpha, x, policy)?;
    Ok(0.5 * PI * (i_neg - i_pos) / (alpha * PI).sin())
}

/// K_α(x) = ∫_0^∞ e^{-x cosh t} cosh(αt) dt, summed with the trapezoidal
/// rule (step 0.1). The integrand is entire in t, so the rule converges
/// geometrically; all terms are positive.
pub fn bessel_k_integral(alpha: f64, x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::DomainError(format!(
            "bessel_k_integral needs x > 0, got {x}"
        )));
    }
    const STEP: f64 = 0.1;
    const MAX_NODES: usize = 20_000;
    let alpha = alpha.abs();
    // scaled by e^{x}; cosh(αt) split to keep the exponent finite
    let integrand = |t: f64| {
        let log_mag = -x * (t.cosh() - 1.0) + alpha * t;
        0.5 * log_mag.exp() * (1.0 + (-2.0 * alpha * t).exp())
    };
    let mut sum = CompensatedSum::new();
    sum.add(Complex64::new(0.5 * integrand(0.0), 0.0));
    let mut previous = f64::INFINITY;
    for k in 1..MAX_NODES {
        let term = integrand(k as f64 * STEP);
        sum.add(Complex64::new(term, 0.0));
        if term < previous && term <= 1e-18 * sum.value().re {
            return Ok(STEP * sum.value().re * (-x).exp());
        }
        previous = term;
    }
    Err(SpecFunError::NoConvergence { max_terms: MAX_NODES })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn i_at_zero() {
        let p = SeriesPolicy::default();
        assert_eq!(bessel_i(0.0, 0.0, p).unwrap(), 1.0);
        assert_eq!(bessel_i(1.3, 0.0, p).unwrap(), 0.0);
        assert!(bessel_i(-0.5, 0.0, p).is_err());
        assert!(bessel_i(-1.5, 1.0, p).is_err());
        assert!(bessel_i(0.5, -1.0, p).is_err());
    }

    #[test]
    fn i_half_order_closed_form() {
        // I_{1/2}(x) = √(2/(πx)) sinh x; oracle uses a denser-tolerance series too.
        let tight = SeriesPolicy::new(1e-17, 500).unwrap();
        for x in [0.5, 1.0, 2.0] {
            let closed = (2.0 / (PI * x)).sqrt() * f64::sinh(x);
            let got = bessel_i(0.5, x, SeriesPolicy::default()).unwrap();
            assert!(rel(got, closed) < 1e-14, "x={x}");
            assert!(rel(bessel_i(0.5, x, tight).unwrap(), closed) < 1e-15);
        }
    }

    #[test]
    fn k_half_order_closed_form() {
        // K_{1/2}(x) = √(π/(2x)) e^{-x}
        for x in [0.5, 1.0, 2.0, 3.0, 10.0, 40.0] {
            let closed = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!(rel(bessel_k(0.5, x).unwrap(), closed) < 1e-12, "x={x}");
            assert!(rel(bessel_k_integral(0.5, x).unwrap(), closed) < 1e-14, "x={x}");
        }
    }

    #[test]
    fn k_known_integer_orders() {
        // K_0(1) and K_1(1) reference values (A&S table 9.8)
        let k0 = 0.421_024_438_240_708_3;
        let k1 = 0.601_907_230_197_234_6;
        assert!(rel(bessel_k(0.0, 1.0).unwrap(), k0) < 1e-8);
        assert!(rel(bessel_k(1.0, 1.0).unwrap(), k1) < 1e-8);
        assert!(rel(bessel_k_integral(0.0, 1.0).unwrap(), k0) < 1e-14);
        assert!(rel(bessel_k_integral(1.0, 1.0).unwrap(), k1) < 1e-14);
    }

    #[test]
    fn k_domain() {
        assert!(bessel_k(0.7, 0.0).is_err());
        assert!(bessel_k(0.7, -1.0).is_err());
    }

    #[test]
    fn reflection_and_integral_agree_on_small_arguments() {
        for &alpha in &[0.3, 0.7, 1.5, 2.7, 3.2] {
            for &x in &[0.05, 0.3, 1.0, 1.9] {
                let a = bessel_k(alpha, x).unwrap();
                let b = bessel_k_integral(alpha, x).unwrap();
                assert!(rel(a, b) < 1e-11, "alpha={alpha} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn k_is_even_in_order() {
        for &alpha in &[0.2, 0.7, 1.5, 2.0, 3.3] {
            for &x in &[0.3, 1.3, 5.0] {
                let a = bessel_k(alpha, x).unwrap();
                let b = bessel_k(-alpha, x).unwrap();
                assert!((a - b).abs() / a <= 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn i_three_term_recurrence(alpha in 1.2f64..3.0, x in 0.1f64..10.0) {
            // I_{α-1} - I_{α+1} = (2α/x) I_α; α-1 stays above -1
            let p = SeriesPolicy::default();
            let lo = bessel_i(alpha - 1.0, x, p).unwrap();
            let hi = bessel_i(alpha + 1.0, x, p).unwrap();
            let mid = bessel_i(alpha, x, p).unwrap();
            let rhs = 2.0 * alpha / x * mid;
            prop_assert!(((lo - hi) - rhs).abs() <= 1e-10 * rhs.abs());
        }

        #[test]
        fn i_recurrence_low_orders(alpha in 0.2f64..1.2, x in 0.1f64..10.0) {
            let p = SeriesPolicy::default();
            let lo = bessel_i_any_order(alpha - 1.0, x, p).unwrap();
            let hi = bessel_i(alpha + 1.0, x, p).unwrap();
            let rhs = 2.0 * alpha / x * bessel_i(alpha, x, p).unwrap();
            prop_assert!(((lo - hi) - rhs).abs() <= 1e-10 * rhs.abs());
        }

        #[test]
        fn k_recurrence(alpha in 0.1f64..3.0, x in 0.2f64..30.0) {
            // K_{α+1} - K_{α-1} = (2α/x) K_α
            let hi = bessel_k(alpha + 1.0, x).unwrap();
            let lo = bessel_k(alpha - 1.0, x).unwrap();
            let rhs = 2.0 * alpha / x * bessel_k(alpha, x).unwrap();
            prop_assert!(((hi - lo) - rhs).abs() <= 1e-7 * rhs.abs());
        }
    }
}
