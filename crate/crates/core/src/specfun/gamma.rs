use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecFunError;

// Lanczos approximation, g = 7, nine coefficients (about 15 significant
// digits for Re z > 0).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// log Γ(z) for complex z.
///
/// For Re z >= 0.5 this is the analytic continuation of the real log-gamma
/// (the Lanczos sum is evaluated in log form). For Re z < 0.5 the reflection
/// formula is used; there the imaginary part is only determined modulo 2π,
/// which is all that exp(log Γ) and arg Γ need.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if is_nonpositive_integer(z) {
        return Err(SpecFunError::PoleError(z));
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        let reflected = ln_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - reflected);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &p) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln())
}

/// ln |Γ(x)| for real x.
pub fn ln_gamma_real(x: f64) -> Result<f64, SpecFunError> {
    if x <= 0.0 && x == x.round() {
        return Err(SpecFunError::PoleError(Complex64::new(x, 0.0)));
    }
    if x < 0.5 {
        let s = (PI * x).sin().abs();
        return Ok(PI.ln() - s.ln() - ln_gamma_real(1.0 - x)?);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &p) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln())
}

/// Γ(x) for real x (signed).
pub fn gamma_real(x: f64) -> Result<f64, SpecFunError> {
    let magnitude = ln_gamma_real(x)?.exp();
    Ok(if x > 0.0 { magnitude } else { gamma_sign(x) * magnitude })
}

fn gamma_sign(x: f64) -> f64 {
    // Γ alternates sign between consecutive negative integers.
    if x > 0.0 || (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// 1/Γ(x), which is entire: zero at the non-positive integers.
pub fn rgamma_real(x: f64) -> f64 {
    match gamma_real(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// |Γ(ν+iξ)|², computed as exp(log Γ(ν+iξ) + log Γ(ν−iξ)).
pub fn gamma_abs_sq(nu: f64, xi: f64) -> Result<f64, SpecFunError> {
    let a = ln_gamma(Complex64::new(nu, xi))?;
    let b = ln_gamma(Complex64::new(nu, -xi))?;
    Ok((a + b).re.exp())
}
