//! Acceptance run: thirteen numbered criteria, each evaluated over its
//! parameter grid against oracles computed here from elementary formulas.
//! Prints one PASS/FAIL line per criterion and exits non-zero on failure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::process::ExitCode;
use std::time::Instant;

use meixner_osc::coherent::{
    bg_expansion, bg_moment_density, bg_moment_problem, bg_norm_closed, bg_norm_series, bg_overlap, gram_matrix,
    perelomov_moment_density, perelomov_moment_problem, perelomov_overlap, verify_moments,
};
use meixner_osc::diffops::{
    action_residual, catalog, eigen_action_residual, eta_multiplier, meixner_basis_matrix, real_grid,
    relativistic_chain, DiffOpError, OperatorName, RelativisticParams,
};
use meixner_osc::oscillator::{hamiltonian_matrix, ladder_matrices, recurrence_for, sp2r_generators, OperatorMatrix};
use meixner_osc::polyfam::{
    meixner_function, meixner_raw, meixner_renorm, meixner_weight, mp_raw, mp_renorm, PolynomialFamily,
};
use meixner_osc::quadrature::QuadTolerance;
use meixner_osc::specfun::SeriesPolicy;
use meixner_osc::verify::{run_suite, suite_passed, RunConfig};
use nalgebra::DMatrix;
use num_complex::Complex64;

type Res<T> = Result<T, String>;

/// One measured quantity of a criterion and the bound it is held to.
struct Part {
    label: String,
    residual: f64,
    tolerance: f64,
}

fn part(label: impl Into<String>, residual: f64, tolerance: f64) -> Part {
    Part {
        label: label.into(),
        residual,
        tolerance,
    }
}

impl Part {
    fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

const BETAS: [f64; 3] = [1.5, 2.5, 3.7];
const GAMMAS: [f64; 3] = [0.25, 0.5, 0.75];
const NUS: [f64; 2] = [0.6, 1.2];
const PHIS: [f64; 2] = [FRAC_PI_3, FRAC_PI_2];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn meixner_grid() -> Vec<(f64, f64, PolynomialFamily)> {
    let mut out = Vec::new();
    for &b in &BETAS {
        for &g in &GAMMAS {
            out.push((b, g, PolynomialFamily::meixner(b, g).unwrap()));
        }
    }
    out
}

fn mp_grid() -> Vec<(f64, f64, PolynomialFamily)> {
    let mut out = Vec::new();
    for &nu in &NUS {
        for &phi in &PHIS {
            out.push((nu, phi, PolynomialFamily::meixner_pollaczek(nu, phi).unwrap()));
        }
    }
    out
}

fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).map(|k| a + k as f64).product()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn mu(n: usize, p: f64) -> f64 {
    ((n as f64 + 1.0) * (n as f64 + p)).sqrt()
}

/// M_0..=M_n at ξ from (γ-1)ξ M_k = γ(k+β)M_{k+1} - [k+(k+β)γ]M_k + k M_{k-1}.
fn meixner_oracle(n: usize, xi: Complex64, beta: f64, gamma: f64) -> Vec<Complex64> {
    let mut m = vec![c(1.0)];
    let mut prev = c(0.0);
    for k in 0..n {
        let kf = k as f64;
        let cur = m[k];
        let next = ((gamma - 1.0) * xi * cur + (kf + (kf + beta) * gamma) * cur - kf * prev) / (gamma * (kf + beta));
        prev = cur;
        m.push(next);
    }
    m
}

/// P_0..=P_n at ξ from (k+1)P_{k+1} = 2[ξ sinφ + (k+ν)cosφ]P_k - (k+2ν-1)P_{k-1}.
fn mp_oracle(n: usize, xi: Complex64, nu: f64, phi: f64) -> Vec<Complex64> {
    let mut p = vec![c(1.0)];
    let mut prev = c(0.0);
    for k in 0..n {
        let kf = k as f64;
        let cur = p[k];
        let next = (2.0 * (xi * phi.sin() + (kf + nu) * phi.cos()) * cur - (kf + 2.0 * nu - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        p.push(next);
    }
    p
}

/// ln Γ(z) for Re z > 0: upward recurrence to Re z ≥ 20, then Stirling.
fn ln_gamma_oracle(z: Complex64) -> Complex64 {
    let mut shift = c(0.0);
    let mut w = z;
    while w.re < 20.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let coeffs = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
    ];
    let mut series = c(0.0);
    let mut pow = inv;
    for a in coeffs {
        series += a * pow;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Double-exponential nodes for ∫₀^∞: x = exp(π/2 sinh t), step h.
fn exp_sinh_nodes(h: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let kmax = (4.5 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let x = (FRAC_PI_2 * t.sinh()).exp();
        let dx = x * FRAC_PI_2 * t.cosh();
        if x.is_finite() && x > 0.0 && dx.is_finite() {
            out.push((x, h * dx));
        }
    }
    out
}

/// Tanh-sinh nodes for ∫₀¹ as (x, 1-x, weight), the complement computed
/// without cancellation.
fn tanh_sinh_nodes(h: f64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let kmax = (4.0 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        // x = (1 + tanh u)/2 = 1/(1 + e^{-2u}), 1 - x = 1/(1 + e^{2u})
        let x = 1.0 / (1.0 + (-2.0 * u).exp());
        let xc = 1.0 / (1.0 + (2.0 * u).exp());
        let w = h * FRAC_PI_2 * t.cosh() / (2.0 * u.cosh().powi(2));
        if x > 0.0 && xc > 0.0 && w > 0.0 {
            out.push((x, xc, w));
        }
    }
    out
}

/// Discrete orthogonality of M̃_n under ρ̃, with the weight built from its
/// ratio ρ̃(ξ+1)/ρ̃(ξ) = γ(β+ξ)/(ξ+1).
fn criterion_1() -> Res<Vec<Part>> {
    let mut worst: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    let mut weight_gap: f64 = 0.0;
    for (beta, gamma, fam) in meixner_grid() {
        let mut gram = [[0.0f64; 16]; 16];
        let mut rho = (1.0 - gamma).powf(beta);
        let mut xi = 0usize;
        while rho > 1e-280 || xi < 50 {
            let x = c(xi as f64);
            let vals: Vec<f64> = (0..=15)
                .map(|n| meixner_renorm(n, x, &fam).map(|v| v.re))
                .collect::<Result<_, _>>()
                .map_err(e)?;
            for n in 0..=15 {
                for m in 0..=n {
                    gram[n][m] += rho * vals[n] * vals[m];
                }
            }
            if xi <= 40 {
                weight_gap = weight_gap.max((meixner_weight(xi as f64, &fam).map_err(e)? - rho).abs() / rho);
                let raw = meixner_oracle(15, x, beta, gamma);
                for (n, r) in raw.iter().enumerate() {
                    oracle_gap = oracle_gap.max(rel(meixner_raw(n, x, &fam).map_err(e)?, *r));
                }
            }
            rho *= gamma * (beta + xi as f64) / (xi as f64 + 1.0);
            xi += 1;
        }
        for n in 0..=15 {
            for m in 0..=n {
                let target = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((gram[n][m] - target).abs());
            }
        }
    }
    Ok(vec![
        part("max |sum rho~ M~_n M~_m - delta|, n, m <= 15", worst, 1e-8),
        part("M_n vs recurrence oracle", oracle_gap, 1e-9),
        part("rho~ vs ratio oracle", weight_gap, 1e-12),
    ])
}

/// Partial sums of Σ (β)_n M_n tⁿ/n! and Σ M_n tⁿ/n! against the closed
/// forms (1-t/γ)^ξ (1-t)^{-ξ-β} and e^t ₁F₁(-ξ; β; (1-γ)t/γ).
fn criterion_2() -> Res<Vec<Part>> {
    let mut worst: f64 = 0.0;
    let mut reduced = Vec::new();
    for (beta, gamma, fam) in meixner_grid() {
        // the binomial series converges only for |t| < γ
        let radius_binomial = 0.3f64.min(0.9 * gamma);
        if radius_binomial < 0.3 {
            reduced.push(format!("{gamma}"));
        }
        for xi in 0..=6usize {
            let x = xi as f64;
            for k in 0..12 {
                let dir = Complex64::from_polar(1.0, k as f64 * PI / 6.0 + 0.1);
                for (scale, binomial) in [(radius_binomial, true), (0.3, false), (0.15, true), (0.15, false)] {
                    let t = dir * scale;
                    let closed = if binomial {
                        (1.0 - t / gamma).powf(x) * (1.0 - t).powc(c(-x - beta))
                    } else {
                        let w = (1.0 - gamma) * t / gamma;
                        let mut sum = c(0.0);
                        let mut term = c(1.0);
                        for j in 0..=xi {
                            sum += term;
                            let jf = j as f64;
                            term *= (jf - x) * w / ((beta + jf) * (jf + 1.0));
                        }
                        t.exp() * sum
                    };
                    let mut partial = c(0.0);
                    let mut tn = c(1.0);
                    let mut small = 0;
                    for n in 0..4000 {
                        let coeff = if binomial {
                            pochhammer(beta, n) / factorial(n)
                        } else {
                            1.0 / factorial(n)
                        };
                        let coeff = if coeff.is_finite() { coeff } else { break };
                        let term = coeff * meixner_raw(n, c(x), &fam).map_err(e)? * tn;
                        partial += term;
                        small = if term.norm() < 1e-18 * partial.norm().max(1.0) {
                            small + 1
                        } else {
                            0
                        };
                        if small >= 5 {
                            break;
                        }
                        tn *= t;
                    }
                    worst = worst.max(rel(closed, partial));
                }
            }
        }
    }
    reduced.dedup();
    Ok(vec![part(
        format!(
            "relative error, xi <= 6; binomial |t| <= min(0.3, 0.9 gamma), reduced at gamma = {}",
            reduced.join(", ")
        ),
        worst,
        1e-10,
    )])
}

fn meixner_spectrum_oracle(n: usize, beta: f64, gamma: f64) -> f64 {
    if n == 0 {
        2.0 * beta * gamma / (gamma - 1.0).powi(2)
    } else {
        let nf = n as f64;
        (2.0 * gamma.sqrt() / (gamma - 1.0)).powi(2) * (nf * nf + nf * beta + 0.5 * beta)
    }
}

fn criterion_3() -> Res<Vec<Part>> {
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for (beta, gamma, fam) in meixner_grid() {
        let spec = recurrence_for(&fam).map_err(e)?;
        let h = hamiltonian_matrix(&spec, 64).map_err(e)?;
        let diag = h.interior_diagonal();
        rows = diag.len();
        for (n, d) in diag.iter().enumerate() {
            let target = meixner_spectrum_oracle(n, beta, gamma);
            worst = worst.max((d - target).norm() / target);
        }
    }
    Ok(vec![part(
        format!("relative, N = 64, interior of {rows} rows"),
        worst,
        1e-10,
    )])
}

/// Residual scaled by the largest interior entry of the products involved.
fn scaled(lhs: &OperatorMatrix, rhs: &OperatorMatrix, parts: &[&OperatorMatrix]) -> f64 {
    let scale = parts.iter().map(|p| p.interior_max_abs()).fold(1.0, f64::max);
    lhs.interior_distance(rhs) / scale
}

fn criterion_4() -> Res<Vec<Part>> {
    let order = 64;
    let mut worst: f64 = 0.0;
    let mut cases: Vec<(PolynomialFamily, f64)> = meixner_grid()
        .into_iter()
        .map(|(b, _, f)| (f, 0.5 * b * (0.5 * b - 1.0)))
        .collect();
    cases.extend(mp_grid().into_iter().map(|(nu, _, f)| (f, nu * (nu - 1.0))));
    for (fam, casimir) in cases {
        let spec = recurrence_for(&fam).map_err(e)?;
        let g = sp2r_generators(&spec, order).map_err(e)?;
        let (kp, km, k0) = (&g.k_plus, &g.k_minus, &g.k_zero);
        let (k0kp, kpk0) = (k0 * kp, kp * k0);
        worst = worst.max(scaled(&(&k0kp - &kpk0), kp, &[&k0kp, &kpk0, kp]));
        let (k0km, kmk0) = (k0 * km, km * k0);
        worst = worst.max(scaled(&(&k0km - &kmk0), &km.scale(c(-1.0)), &[&k0km, &kmk0, km]));
        let (kmkp, kpkm) = (km * kp, kp * km);
        worst = worst.max(scaled(&(&kmkp - &kpkm), &k0.scale(c(2.0)), &[&kmkp, &kpkm, k0]));
        let k0k0 = k0 * k0;
        let lhs = &(&k0k0 - k0) - &kpkm;
        let target = OperatorMatrix::identity(order).scale(c(casimir));
        worst = worst.max(scaled(&lhs, &target, &[&k0k0, &kpkm, k0, &target]));
    }
    Ok(vec![part(
        "N = 64, both families, interior residual / max(1, largest product entry)",
        worst,
        1e-12,
    )])
}

/// The diagonal of X̃²+P̃² against 4γ/(γ-1)²((n+β/2)² - (β/2)(β/2-1)).
fn criterion_5() -> Res<Vec<Part>> {
    let mut worst: f64 = 0.0;
    for (beta, gamma, fam) in meixner_grid() {
        let spec = recurrence_for(&fam).map_err(e)?;
        let h = hamiltonian_matrix(&spec, 34).map_err(e)?;
        let k0 = sp2r_generators(&spec, 34).map_err(e)?.k_zero;
        let w = 0.5 * beta;
        let pre = 4.0 * gamma / (gamma - 1.0).powi(2);
        for n in 0..=30 {
            let linear = n as f64 + w;
            let target = pre * (linear * linear - w * (w - 1.0));
            worst = worst.max((h.get(n, n) - target).norm() / target.max(1.0));
            worst = worst.max((k0.get(n, n) - linear).norm() / linear.max(1.0));
            worst = worst.max((target - meixner_spectrum_oracle(n, beta, gamma)).abs() / target.max(1.0));
        }
    }
    Ok(vec![part("relative, n <= 30", worst, 1e-10)])
}

/// d_k with ã⁻|k+1⟩ = d_k|k⟩ (Meixner) or K⁻|k+1⟩ = d_k|k⟩ (Meixner–Pollaczek).
fn bg_steps(fam: &PolynomialFamily, order: usize) -> Vec<f64> {
    match *fam {
        PolynomialFamily::Meixner { beta, gamma } => (0..order)
            .map(|k| 2f64.sqrt() * gamma.sqrt() / (gamma - 1.0) * ((beta + k as f64) * (k as f64 + 1.0)).sqrt())
            .collect(),
        PolynomialFamily::MeixnerPollaczek { nu, .. } => (0..order).map(|k| mu(k, 2.0 * nu)).collect(),
    }
}

/// Normalized coefficients zⁿ/(d_0⋯d_{n-1}) on levels 0..=order.
fn bg_oracle_coeffs(fam: &PolynomialFamily, z: Complex64, order: usize) -> (Vec<Complex64>, f64) {
    let d = bg_steps(fam, order);
    let mut coeffs = vec![c(1.0)];
    for k in 0..order {
        let next = coeffs[k] * z / d[k];
        coeffs.push(next);
    }
    let norm_sq: f64 = coeffs.iter().map(|v| v.norm_sqr()).sum();
    let scale = norm_sq.sqrt();
    (coeffs.into_iter().map(|v| v / scale).collect(), norm_sq)
}

fn all_families() -> Vec<PolynomialFamily> {
    meixner_grid()
        .into_iter()
        .map(|x| x.2)
        .chain(mp_grid().into_iter().map(|x| x.2))
        .collect()
}

fn criterion_6() -> Res<Vec<Part>> {
    let mut worst: f64 = 0.0;
    let mut series_gap: f64 = 0.0;
    for fam in all_families() {
        for r in [0.5, 1.0, 3.0] {
            let (_, oracle) = bg_oracle_coeffs(&fam, c(r), 400);
            let closed = bg_norm_closed(&fam, r * r).map_err(e)?;
            let series = bg_norm_series(&fam, r * r, SeriesPolicy::default()).map_err(e)?;
            worst = worst
                .max((closed - oracle).abs() / oracle)
                .max((closed - series).abs() / series);
            series_gap = series_gap.max((series - oracle).abs() / oracle);
        }
    }
    Ok(vec![
        part("closed form vs series, |z| in {0.5, 1, 3}", worst, 1e-10),
        part("library series vs oracle sum", series_gap, 1e-10),
    ])
}

fn test_points() -> Vec<Complex64> {
    let mut pts = Vec::new();
    for (k, r) in [0.5, 1.0, 2.0, 3.0].into_iter().enumerate() {
        for j in 0..3 {
            pts.push(Complex64::from_polar(r, 1.1 * j as f64 + 0.4 * k as f64));
        }
    }
    pts
}

fn criterion_7() -> Res<Vec<Part>> {
    let order = 64;
    let mut worst: f64 = 0.0;
    let mut coeff_gap: f64 = 0.0;
    for fam in all_families() {
        let spec = recurrence_for(&fam).map_err(e)?;
        let (_, minus) = ladder_matrices(&spec, order).map_err(e)?;
        let lowering = match fam {
            PolynomialFamily::Meixner { .. } => minus,
            PolynomialFamily::MeixnerPollaczek { phi, .. } => minus.scale(c(2f64.sqrt() * phi.sin())),
        };
        for z in test_points() {
            let state = bg_expansion(&fam, z, order - 2).map_err(e)?;
            let (oracle, _) = bg_oracle_coeffs(&fam, z, order - 2);
            for (a, b) in state.coeffs.iter().zip(&oracle) {
                coeff_gap = coeff_gap.max((a - b).norm());
            }
            let v = DMatrix::from_fn(order, 1, |i, _| state.coeffs.get(i).copied().unwrap_or(c(0.0)));
            worst = worst.max((lowering.entries() * &v - &v * z).norm());
        }
    }
    Ok(vec![
        part(
            "||(a- - z)|z>||, N = 64, |z| <= 3 (K- for Meixner-Pollaczek)",
            worst,
            1e-8,
        ),
        part("coefficients vs oracle", coeff_gap, 1e-12),
    ])
}

fn perelomov_oracle_coeffs(p: f64, zeta: Complex64) -> Vec<Complex64> {
    let x = zeta.norm_sqr();
    let mut coeffs = Vec::new();
    let mut cur = c((1.0 - x).powf(0.5 * p));
    let mut kept = 0.0;
    for n in 0..100_000 {
        coeffs.push(cur);
        kept += cur.norm_sqr();
        if 1.0 - kept < 1e-16 && cur.norm_sqr() < 1e-20 {
            break;
        }
        let k = n as f64;
        cur *= zeta * ((k + p) / (k + 1.0)).sqrt();
    }
    coeffs
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn min_eigenvalue(g: &DMatrix<Complex64>) -> f64 {
    g.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn criterion_8() -> Res<Vec<Part>> {
    let mut worst: f64 = 0.0;
    let mut lowest = f64::INFINITY;
    let pts = test_points();
    let discs: Vec<Complex64> = pts.iter().map(|z| z * 0.28).collect();
    for fam in all_families() {
        let states: Vec<_> = pts.iter().map(|&z| bg_oracle_coeffs(&fam, z, 120).0).collect();
        for (a, za) in states.iter().zip(&pts) {
            for (b, zb) in states.iter().zip(&pts) {
                worst = worst.max((inner(a, b) - bg_overlap(&fam, *za, *zb).map_err(e)?).norm());
            }
        }
        lowest = lowest.min(min_eigenvalue(
            &gram_matrix(&pts, |a, b| bg_overlap(&fam, a, b)).map_err(e)?,
        ));
        let p = fam.pochhammer_param();
        let states: Vec<_> = discs.iter().map(|&z| perelomov_oracle_coeffs(p, z)).collect();
        for (a, za) in states.iter().zip(&discs) {
            for (b, zb) in states.iter().zip(&discs) {
                worst = worst.max((inner(a, b) - perelomov_overlap(p, *za, *zb).map_err(e)?).norm());
            }
        }
        lowest = lowest.min(min_eigenvalue(
            &gram_matrix(&discs, |a, b| perelomov_overlap(p, a, b)).map_err(e)?,
        ));
    }
    Ok(vec![
        part("closed overlaps vs truncated inner products", worst, 1e-8),
        part(
            format!("negative part of the smallest Gram eigenvalue ({lowest:.3e})"),
            (-lowest).max(0.0),
            1e-10,
        ),
    ])
}

fn criterion_9() -> Res<Vec<Part>> {
    let quad = QuadTolerance {
        abs: 1e-300,
        rel: 1e-10,
        max_depth: 80,
    };
    let (mut library, mut oracle): (f64, f64) = (0.0, 0.0);
    let de = exp_sinh_nodes(1.0 / 64.0);
    let ts = tanh_sinh_nodes(1.0 / 64.0);
    for (beta, gamma, fam) in meixner_grid() {
        let kappa = (1.0 - gamma) / (2.0 * gamma).sqrt();
        let q = kappa * kappa;
        let target = |n: usize| q.powi(-(n as i32)) * factorial(n) * pochhammer(beta, n);
        for row in verify_moments(&bg_moment_problem(&fam).map_err(e)?, 8, quad).map_err(e)? {
            library = library.max((row.lhs - target(row.n)).abs() / target(row.n));
        }
        let mut sums = [0.0f64; 9];
        for &(x, w) in &de {
            let f = bg_moment_density(&fam, x).map_err(e)? * w * PI;
            for (n, s) in sums.iter_mut().enumerate() {
                *s += f * x.powi(n as i32);
            }
        }
        for (n, s) in sums.iter().enumerate() {
            oracle = oracle.max((s - target(n)).abs() / target(n));
        }
        // (β-1)∫ xⁿ (1-x)^{β-2} dx = n!/(β)_n
        let ptarget = |n: usize| factorial(n) / pochhammer(beta, n);
        for row in verify_moments(&perelomov_moment_problem(beta).map_err(e)?, 8, quad).map_err(e)? {
            library = library.max((row.lhs - ptarget(row.n)).abs() / ptarget(row.n));
        }
        let mut sums = [0.0f64; 9];
        for &(x, xc, w) in &ts {
            let f = (beta - 1.0) * xc.powf(beta - 2.0) * w;
            if x < 0.999 {
                let lib = perelomov_moment_density(beta, x).map_err(e)? * PI;
                oracle = oracle.max((lib - (beta - 1.0) * xc.powf(beta - 2.0)).abs() / lib);
            }
            for (n, s) in sums.iter_mut().enumerate() {
                *s += f * x.powi(n as i32);
            }
        }
        for (n, s) in sums.iter().enumerate() {
            oracle = oracle.max((s - ptarget(n)).abs() / ptarget(n));
        }
    }
    Ok(vec![
        part("relative, n <= 8, library quadrature", library, 1e-6),
        part("double-exponential oracle", oracle, 1e-6),
    ])
}

/// w(ξ) = (2 sinφ)^{2ν} e^{(2φ-π)ξ} |Γ(ν+iξ)|² / (2π Γ(2ν)).
fn mp_weight_oracle(xi: f64, nu: f64, phi: f64) -> f64 {
    let ln =
        2.0 * nu * (2.0 * phi.sin()).ln() + (2.0 * phi - PI) * xi + 2.0 * ln_gamma_oracle(Complex64::new(nu, xi)).re
            - (2.0 * PI).ln()
            - ln_gamma_oracle(c(2.0 * nu)).re;
    ln.exp()
}

fn criterion_10() -> Res<Vec<Part>> {
    let tol = QuadTolerance {
        abs: 1e-14,
        rel: 1e-10,
        max_depth: 48,
    };
    let (mut library, mut oracle): (f64, f64) = (0.0, 0.0);
    let mut poly_gap: f64 = 0.0;
    for (nu, phi, fam) in mp_grid() {
        let gram = meixner_osc::polyfam::mp_gram(&fam, 10, tol).map_err(e)?;
        for n in 0..=10 {
            for m in 0..=n {
                let target = if n == m { 1.0 } else { 0.0 };
                library = library.max((gram[n][m] - target).abs());
            }
        }
        // trapezoid rule on the line: exponentially accurate for this analytic,
        // rapidly decaying integrand
        let h = 0.05;
        let mut sums = [[0.0f64; 11]; 11];
        for k in -4000..=4000 {
            let xi = k as f64 * h;
            let w = mp_weight_oracle(xi, nu, phi) * h;
            if w == 0.0 {
                continue;
            }
            let vals: Vec<f64> = (0..=10)
                .map(|n| mp_renorm(n, c(xi), &fam).map(|v| v.re))
                .collect::<Result<_, _>>()
                .map_err(e)?;
            if k % 40 == 0 {
                let raw = mp_oracle(10, c(xi), nu, phi);
                for (n, r) in raw.iter().enumerate() {
                    poly_gap = poly_gap.max(rel(mp_raw(n, c(xi), &fam).map_err(e)?, *r));
                }
            }
            for n in 0..=10 {
                for m in 0..=n {
                    sums[n][m] += w * vals[n] * vals[m];
                }
            }
        }
        for n in 0..=10 {
            for m in 0..=n {
                let target = if n == m { 1.0 } else { 0.0 };
                oracle = oracle.max((sums[n][m] - target).abs());
            }
        }
    }
    Ok(vec![
        part("n, m <= 10, library quadrature", library, 1e-6),
        part("trapezoid oracle", oracle, 1e-6),
        part("P_n vs recurrence oracle", poly_gap, 1e-9),
    ])
}

fn criterion_11() -> Res<Vec<Part>> {
    let lattice: Vec<Complex64> = (0..=12).map(|k| c(k as f64)).collect();
    let line = real_grid(-4.0, 4.0, 0.25);
    let (mut meixner, mut mp, mut actions, mut bridge): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for (beta, gamma, fam) in meixner_grid() {
        for n in 0..=10 {
            let ev = n as f64 * (gamma - 1.0);
            for x in 0..=12 {
                let xi = x as f64;
                let y = |s: f64| meixner_raw(n, c(xi + s), &fam);
                let lhs = gamma * (xi + beta) * y(1.0).map_err(e)? - (xi + (xi + beta) * gamma) * y(0.0).map_err(e)?
                    + xi * y(-1.0).map_err(e)?;
                let y0 = y(0.0).map_err(e)?;
                meixner = meixner.max((lhs - ev * y0).norm() / y0.norm().max(1.0));
            }
            let schr = catalog(OperatorName::MeixnerSchrodinger, &fam, None).map_err(e)?;
            let renorm = |k: usize, z: Complex64| -> Result<Complex64, DiffOpError> { Ok(meixner_renorm(k, z, &fam)?) };
            meixner = meixner.max(eigen_action_residual(&schr, renorm, n, c(ev), &lattice).map_err(e)?);
            let h0 = catalog(OperatorName::MeixnerH0, &fam, None).map_err(e)?;
            let psi = |k: usize, z: Complex64| -> Result<Complex64, DiffOpError> {
                Ok(c(meixner_function(k, z.re as usize, &fam)?))
            };
            meixner = meixner.max(eigen_action_residual(&h0, psi, n, c(n as f64 + 0.5 * beta), &lattice).map_err(e)?);
        }
        let hat = |n: usize, z: Complex64| -> Result<Complex64, DiffOpError> {
            Ok(meixner_renorm(n, z, &fam)? * if n % 2 == 0 { 1.0 } else { -1.0 })
        };
        let kp = catalog(OperatorName::MeixnerKplusHat, &fam, None).map_err(e)?;
        let km = catalog(OperatorName::MeixnerKminusHat, &fam, None).map_err(e)?;
        let hh = catalog(OperatorName::MeixnerHhat, &fam, None).map_err(e)?;
        for n in 0..=10 {
            let up = action_residual(&kp, |z| hat(n, z), |z| Ok(hat(n + 1, z)? * mu(n, beta)), &lattice).map_err(e)?;
            let down = action_residual(
                &km,
                |z| hat(n, z),
                |z| {
                    if n == 0 {
                        Ok(c(0.0))
                    } else {
                        Ok(hat(n - 1, z)? * mu(n - 1, beta))
                    }
                },
                &lattice,
            )
            .map_err(e)?;
            let diag = eigen_action_residual(&hh, hat, n, c(n as f64 + 0.5 * beta), &lattice).map_err(e)?;
            actions = actions.max(up).max(down).max(diag);
        }
        let m = meixner_basis_matrix(&hh, &fam, 12).map_err(e)?;
        for r in 0..12 {
            for col in 0..12 {
                let target = if r == col { r as f64 + 0.5 * beta } else { 0.0 };
                bridge = bridge.max((m[(r, col)] - target).norm());
            }
        }
    }
    let i = Complex64::i();
    for (nu, phi, fam) in mp_grid() {
        for n in 0..=8 {
            for &xi in &line {
                let y = |s: Complex64| mp_raw(n, xi + s, &fam);
                let lhs = Complex64::from_polar(1.0, phi) * (nu - i * xi) * y(i).map_err(e)?
                    + 2.0 * i * (xi * phi.cos() - (n as f64 + nu) * phi.sin()) * y(c(0.0)).map_err(e)?
                    - Complex64::from_polar(1.0, -phi) * (nu + i * xi) * y(-i).map_err(e)?;
                mp = mp.max(lhs.norm() / y(c(0.0)).map_err(e)?.norm().max(1.0));
            }
        }
    }
    for nu in NUS {
        let fam = PolynomialFamily::meixner_pollaczek(nu, FRAC_PI_2).map_err(e)?;
        let p = |k: usize, z: Complex64| -> Result<Complex64, DiffOpError> { Ok(mp_renorm(k, z, &fam)?) };
        let h = catalog(OperatorName::MpH, &fam, None).map_err(e)?;
        let kp = catalog(OperatorName::MpKplus, &fam, None).map_err(e)?;
        let km = catalog(OperatorName::MpKminus, &fam, None).map_err(e)?;
        for n in 0..=8 {
            let diag = eigen_action_residual(&h, p, n, c(n as f64 + nu), &line).map_err(e)?;
            let up = action_residual(&kp, |z| p(n, z), |z| Ok(p(n + 1, z)? * mu(n, 2.0 * nu)), &line).map_err(e)?;
            let down = action_residual(
                &km,
                |z| p(n, z),
                |z| {
                    if n == 0 {
                        Ok(c(0.0))
                    } else {
                        Ok(p(n - 1, z)? * mu(n - 1, 2.0 * nu))
                    }
                },
                &line,
            )
            .map_err(e)?;
            actions = actions.max(diag).max(up).max(down);
        }
    }
    Ok(vec![
        part("Meixner difference equations, n <= 10, xi <= 12", meixner, 1e-9),
        part("Meixner-Pollaczek difference equation, n <= 8", mp, 1e-9),
        part("eigen-actions", actions, 1e-9),
        part("hat Hamiltonian matrix vs diag(n + beta/2)", bridge, 1e-12),
    ])
}

fn criterion_12() -> Res<Vec<Part>> {
    let x_grid = real_grid(-3.0, 3.0, 0.125);
    let (mut eta, mut chain): (f64, f64) = (0.0, 0.0);
    let mut orientation = String::new();
    let mut eta_worst = 0.0f64;
    for lambda in [0.8, 1.0, 1.7] {
        let m = eta_multiplier(lambda);
        let i = Complex64::i();
        for &x in &x_grid {
            for (s, expected) in [(1.0, lambda * lambda), (-1.0, 1.0 / (lambda * lambda))] {
                let ratio = m.value(x) / m.value(x + s * i * lambda);
                eta_worst = eta_worst.max((ratio - expected).norm() / expected);
            }
        }
        eta = eta.max(eta_worst);
        let params = RelativisticParams::new(lambda).map_err(e)?;
        let report = relativistic_chain(params, &x_grid).map_err(e)?;
        chain = chain.max(report.max_residual());
        orientation = format!(
            "{} ({:.1e})",
            report.orientation.selected().label,
            report.orientation.selected().residual
        );
    }
    Ok(vec![
        part("eta ratio, lambda in {0.8, 1, 1.7}", eta, 1e-13),
        part(
            format!("chain vs hRel on [-3, 3], orientation {orientation}"),
            chain,
            1e-10,
        ),
    ])
}

fn criterion_13() -> Res<Vec<Part>> {
    let configs = [
        RunConfig::default(),
        RunConfig {
            beta: 3.7,
            gamma: 0.75,
            nu: 0.6,
            phi: FRAC_PI_3,
            lambda: 1.7,
            ..RunConfig::default()
        },
        RunConfig {
            beta: 1.5,
            gamma: 0.25,
            nu: 1.2,
            phi: 1.1,
            lambda: 0.8,
            ..RunConfig::default()
        },
    ];
    let mut failures = Vec::new();
    let mut evidence = Vec::new();
    for cfg in &configs {
        let reports = run_suite(cfg).map_err(e)?;
        if !suite_passed(&reports) {
            let bad: Vec<_> = reports
                .iter()
                .filter(|r| !r.passed)
                .map(|r| format!("{} {:.3e}", r.name, r.max_residual))
                .collect();
            failures.push(format!("suite at beta = {}: {}", cfg.beta, bad.join(", ")));
        }
        let find = |name: &str| {
            reports
                .iter()
                .find(|r| r.name == name)
                .cloned()
                .ok_or(format!("missing entry {name}"))
        };
        let spectrum = find("mp-spectrum-alternative")?;
        let exponent = find("perelomov-exponent")?;
        let orientation = find("g-orientation")?;
        for r in [&spectrum, &exponent, &orientation] {
            if !(r.informational && r.passed && r.max_residual.is_finite()) {
                failures.push(format!("{} is not a passing informational entry", r.name));
            }
        }
        // constructed minus alternative spectrum is ν/sin²φ for n >= 1
        let gap = cfg.nu / cfg.phi.sin().powi(2);
        if (spectrum.max_residual - gap).abs() > 1e-12 * gap {
            failures.push(format!(
                "spectrum gap {} != nu/sin^2 phi = {gap}",
                spectrum.max_residual
            ));
        }
        if exponent.max_residual <= 1e-3 {
            failures.push(format!(
                "exponent variants indistinguishable: {}",
                exponent.max_residual
            ));
        }
        if orientation.max_residual > 1e-12 || !orientation.notes.contains("selected |Gamma(nu+i xi)|") {
            failures.push(format!("orientation: {}", orientation.notes));
        }
        evidence.push(format!(
            "{:.3}/{:.3}/{:.1e}",
            spectrum.max_residual, exponent.max_residual, orientation.max_residual
        ));
    }
    let label = if failures.is_empty() {
        format!(
            "3 configurations pass; spectrum/exponent/orientation gaps {}",
            evidence.join(", ")
        )
    } else {
        failures.join("; ")
    };
    Ok(vec![part(label, failures.len() as f64, 0.0)])
}

fn main() -> ExitCode {
    let table: [(usize, &str, fn() -> Res<Vec<Part>>); 13] = [
        (1, "discrete orthogonality", criterion_1),
        (2, "generating functions", criterion_2),
        (3, "spectrum of X~^2+P~^2", criterion_3),
        (4, "sp(2,R) relations and Casimir", criterion_4),
        (5, "Hamiltonian relation", criterion_5),
        (6, "BG normalization", criterion_6),
        (7, "BG eigenstate", criterion_7),
        (8, "overlaps and Gram PSD", criterion_8),
        (9, "moment problems", criterion_9),
        (10, "MP continuous orthogonality", criterion_10),
        (11, "difference equations and eigen-actions", criterion_11),
        (12, "conjugation chain", criterion_12),
        (13, "discrepancy artifacts", criterion_13),
    ];
    let start = Instant::now();
    let mut all = true;
    for (id, title, run) in table {
        let t = Instant::now();
        let parts = run().unwrap_or_else(|msg| vec![part(format!("error: {msg}"), f64::INFINITY, 0.0)]);
        let ok = parts.iter().all(Part::passed);
        all &= ok;
        let summary = parts
            .iter()
            .map(|p| format!("{}: {:.3e} (tol {:.0e})", p.label, p.residual, p.tolerance))
            .collect::<Vec<_>>()
            .join("; ");
        println!(
            "{} criterion {:>2} {} [{:.2}s] {}",
            if ok { "PASS" } else { "FAIL" },
            id,
            title,
            t.elapsed().as_secs_f64(),
            summary
        );
    }
    println!(
        "acceptance: {} in {:.2}s",
        if all { "all criteria passed" } else { "FAILED" },
        start.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
