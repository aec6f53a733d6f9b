//! Command-line front end: `eval` prints single quantities, `verify` runs
//! the suite and writes a report. Exit status 0 means success (every check
//! passed), 1 a failed check and 2 a usage or configuration error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::coherent::{
    bg_evaluate_closed, bg_evaluate_series, bg_expansion, bg_measure_density, bg_norm_closed, bg_overlap,
    bg_required_order, mandel_q, perelomov_amplitude_closed, perelomov_expansion, perelomov_measure_density,
    perelomov_overlap, perelomov_required_order, PerelomovExponent,
};
use crate::oscillator::SpectrumFormula;
use crate::polyfam::{
    meixner_raw, meixner_renorm, meixner_weight, mp_raw, mp_renorm, mp_weight_density, FamilyKind, PolynomialFamily,
};
use crate::verify::{run_suite, suite_passed, CheckReport, OutputFormat, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "meixner-osc",
    version,
    about = "Meixner and Meixner-Pollaczek oscillators: evaluation and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one quantity.
    Eval {
        #[command(subcommand)]
        what: EvalWhat,
    },
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Meixner,
    #[value(alias = "meixner-pollaczek")]
    Mp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StateArg {
    Bg,
    Perelomov,
}

#[derive(Debug, Clone, Args)]
struct Common {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, default_value_t = 2.5)]
    beta: f64,
    #[arg(long, default_value_t = 0.4)]
    gamma: f64,
    #[arg(long, default_value_t = 1.2)]
    nu: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    phi: f64,
    /// λ of the relativistic chain.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Truncation order of operator matrices and expansions.
    #[arg(long = "order", short = 'N', default_value_t = 64)]
    order: usize,
    #[arg(long, default_value_t = 1e-12)]
    identity_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    quad_tol: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Run only the named checks (repeatable or comma separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum EvalWhat {
    /// M_n(ξ) or P_n(ξ); `--normalized` gives M̃_n or P̂_n.
    Poly {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        xi: Complex64,
        #[arg(long)]
        normalized: bool,
    },
    /// The orthogonality weight at ξ.
    Weight {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
    },
    /// λ_n of the quadratic Hamiltonian.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
    },
    /// Barut–Girardello state: normalization, series and closed amplitude.
    BgState {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
    },
    /// Perelomov state: series and closed amplitude.
    PerelomovState {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        zeta: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
    },
    /// ⟨z₁|z₂⟩ for either kind of state.
    Overlap {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z1: Complex64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z2: Complex64,
        #[arg(long, value_enum, default_value_t = StateArg::Bg)]
        kind: StateArg,
    },
    /// Resolution-of-unity measure density at |z|.
    Measure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        abs_z: f64,
        #[arg(long, value_enum, default_value_t = StateArg::Bg)]
        kind: StateArg,
    },
}

/// Parses "a+bi", "a-bi", "a", "bi", "i" and "-i" (whitespace ignored).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse {text:?} as a complex number a+bi");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

/// x with 17 significant digits, trailing zeros dropped (C's %.17g).
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..17).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

/// "a+bi" with both parts in [`format_g17`].
pub fn format_complex(z: Complex64) -> String {
    let im = format_g17(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", format_g17(z.re))
}

/// Ceiling for the doubling search of the Perelomov amplitude truncation.
const AMPLITUDE_MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Real(f64),
    Complex(Complex64),
    Int(usize),
    Bool(bool),
    Text(String),
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn render_values(fields: &[(&str, Value)], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let body = fields
                .iter()
                .map(|(k, v)| {
                    let value = match v {
                        Value::Real(x) => format_g17(*x),
                        Value::Complex(z) => format!("{{\"re\":{},\"im\":{}}}", format_g17(z.re), format_g17(z.im)),
                        Value::Int(n) => n.to_string(),
                        Value::Bool(b) => b.to_string(),
                        Value::Text(t) => json_string(t),
                    };
                    format!("{}:{value}", json_string(k))
                })
                .collect::<Vec<_>>()
                .join(",");
            format!("{{{body}}}\n")
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(fields.iter().map(|(k, _)| *k)).expect("in-memory write");
            w.write_record(fields.iter().map(|(_, v)| match v {
                Value::Real(x) => format_g17(*x),
                Value::Complex(z) => format_complex(*z),
                Value::Int(n) => n.to_string(),
                Value::Bool(b) => b.to_string(),
                Value::Text(t) => t.clone(),
            }))
            .expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
    }
}

/// The report as a flat JSON array with one record per line.
pub fn render_reports_json(reports: &[CheckReport]) -> String {
    let lines: Vec<String> = reports
        .iter()
        .map(|r| serde_json::to_string(r).expect("reports serialize"))
        .collect();
    if lines.is_empty() {
        return "[]\n".into();
    }
    format!("[\n{}\n]\n", lines.join(",\n"))
}

/// The report as RFC 4180 CSV with a header row.
pub fn render_reports_csv(reports: &[CheckReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name",
        "anchor",
        "max_residual",
        "tolerance",
        "passed",
        "informational",
        "notes",
    ])
    .expect("in-memory write");
    for r in reports {
        w.write_record([
            r.name.clone(),
            r.anchor.clone(),
            format_g17(r.max_residual),
            format_g17(r.tolerance),
            r.passed.to_string(),
            r.informational.to_string(),
            r.notes.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn config_from(common: &Common, only: Vec<String>) -> RunConfig {
    RunConfig {
        beta: common.beta,
        gamma: common.gamma,
        nu: common.nu,
        phi: common.phi,
        lambda: common.lambda,
        order: common.order,
        identity_tol: common.identity_tol,
        quad_tol: common.quad_tol,
        format: match common.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        },
        seed: common.seed,
        jobs: common.jobs,
        family: common.family.map(|f| match f {
            FamilyArg::Meixner => FamilyKind::Meixner,
            FamilyArg::Mp => FamilyKind::MeixnerPollaczek,
        }),
        only,
    }
}

fn family_of(common: &Common) -> Result<PolynomialFamily, String> {
    let fam = match common.family.unwrap_or(FamilyArg::Meixner) {
        FamilyArg::Meixner => PolynomialFamily::meixner(common.beta, common.gamma),
        FamilyArg::Mp => PolynomialFamily::meixner_pollaczek(common.nu, common.phi),
    };
    fam.map_err(|e| e.to_string())
}

fn family_name(fam: &PolynomialFamily) -> Value {
    Value::Text(match fam.kind() {
        FamilyKind::Meixner => "meixner".into(),
        FamilyKind::MeixnerPollaczek => "meixner-pollaczek".into(),
    })
}

fn evaluate(what: &EvalWhat) -> Result<(Vec<(&'static str, Value)>, OutputFormat), String> {
    let e = |err: &dyn std::fmt::Display| err.to_string();
    let common = match what {
        EvalWhat::Poly { common, .. }
        | EvalWhat::Weight { common, .. }
        | EvalWhat::Spectrum { common, .. }
        | EvalWhat::BgState { common, .. }
        | EvalWhat::PerelomovState { common, .. }
        | EvalWhat::Overlap { common, .. }
        | EvalWhat::Measure { common, .. } => common,
    };
    let cfg = config_from(common, Vec::new());
    let fam = family_of(common)?;
    let fields = match what {
        EvalWhat::Poly { n, xi, normalized, .. } => {
            let value = match (fam.kind(), normalized) {
                (FamilyKind::Meixner, false) => meixner_raw(*n, *xi, &fam),
                (FamilyKind::Meixner, true) => meixner_renorm(*n, *xi, &fam),
                (FamilyKind::MeixnerPollaczek, false) => mp_raw(*n, *xi, &fam),
                (FamilyKind::MeixnerPollaczek, true) => mp_renorm(*n, *xi, &fam),
            }
            .map_err(|x| e(&x))?;
            vec![
                ("family", family_name(&fam)),
                ("n", Value::Int(*n)),
                ("xi", Value::Complex(*xi)),
                ("normalized", Value::Bool(*normalized)),
                ("value", Value::Complex(value)),
            ]
        }
        EvalWhat::Weight { xi, .. } => {
            let w = match fam.kind() {
                FamilyKind::Meixner => meixner_weight(*xi, &fam),
                FamilyKind::MeixnerPollaczek => mp_weight_density(*xi, &fam),
            }
            .map_err(|x| e(&x))?;
            vec![
                ("family", family_name(&fam)),
                ("xi", Value::Real(*xi)),
                ("weight", Value::Real(w)),
            ]
        }
        EvalWhat::Spectrum { n, .. } => {
            let lambda = SpectrumFormula::closed_form(&fam).lambda(*n);
            vec![
                ("family", family_name(&fam)),
                ("n", Value::Int(*n)),
                ("lambda", Value::Real(lambda)),
            ]
        }
        EvalWhat::BgState { z, xi, .. } => {
            let required = bg_required_order(&fam, z.norm()).map_err(|x| e(&x))?;
            let order = required.max(cfg.order);
            let state = bg_expansion(&fam, *z, order).map_err(|x| e(&x))?;
            let series = bg_evaluate_series(&fam, *z, *xi, order).map_err(|x| e(&x))?;
            let closed = bg_evaluate_closed(&fam, *z, *xi).map_err(|x| e(&x))?;
            vec![
                ("family", family_name(&fam)),
                ("z", Value::Complex(*z)),
                ("xi", Value::Real(*xi)),
                ("truncation", Value::Int(order)),
                ("norm_sq", Value::Real(state.norm_sq)),
                (
                    "norm_sq_closed",
                    Value::Real(bg_norm_closed(&fam, z.norm_sqr()).map_err(|x| e(&x))?),
                ),
                ("mandel_q", Value::Real(mandel_q(&state))),
                ("amplitude_series", Value::Complex(series)),
                ("amplitude_closed", Value::Complex(closed)),
            ]
        }
        EvalWhat::PerelomovState { zeta, xi, .. } => {
            let p = fam.pochhammer_param();
            // The amplitude tail decays only like the square root of the weight tail, so the
            // truncation is doubled until the amplitude series settles.
            let at = Complex64::new(*xi, 0.0);
            let mut order = perelomov_required_order(p, zeta.norm()).map_err(|x| e(&x))?.max(8);
            let mut state = perelomov_expansion(&fam, *zeta, order).map_err(|x| e(&x))?;
            let mut series = state.amplitude(at).map_err(|x| e(&x))?;
            while order < AMPLITUDE_MAX_ORDER {
                let next_state = perelomov_expansion(&fam, *zeta, 2 * order).map_err(|x| e(&x))?;
                let next = next_state.amplitude(at).map_err(|x| e(&x))?;
                let settled = (next - series).norm() <= 1e-15 * next.norm().max(1.0);
                order *= 2;
                state = next_state;
                series = next;
                if settled {
                    break;
                }
            }
            let closed = perelomov_amplitude_closed(&fam, *zeta, *xi, PerelomovExponent::Derived).map_err(|x| e(&x))?;
            vec![
                ("family", family_name(&fam)),
                ("zeta", Value::Complex(*zeta)),
                ("xi", Value::Real(*xi)),
                ("truncation", Value::Int(order)),
                ("mandel_q", Value::Real(mandel_q(&state))),
                ("amplitude_series", Value::Complex(series)),
                ("amplitude_closed", Value::Complex(closed)),
            ]
        }
        EvalWhat::Overlap { z1, z2, kind, .. } => {
            let value = match kind {
                StateArg::Bg => bg_overlap(&fam, *z1, *z2),
                StateArg::Perelomov => perelomov_overlap(fam.pochhammer_param(), *z1, *z2),
            }
            .map_err(|x| e(&x))?;
            vec![
                ("family", family_name(&fam)),
                ("z1", Value::Complex(*z1)),
                ("z2", Value::Complex(*z2)),
                ("overlap", Value::Complex(value)),
            ]
        }
        EvalWhat::Measure { abs_z, kind, .. } => {
            let value = match kind {
                StateArg::Bg => bg_measure_density(&fam, *abs_z),
                StateArg::Perelomov => perelomov_measure_density(fam.pochhammer_param(), abs_z * abs_z),
            }
            .map_err(|x| e(&x))?;
            vec![
                ("family", family_name(&fam)),
                ("abs_z", Value::Real(*abs_z)),
                ("density", Value::Real(value)),
            ]
        }
    };
    Ok((fields, cfg.format))
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cfg = config_from(&args.common, args.only.clone());
    let reports = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match cfg.format {
        OutputFormat::Json => render_reports_json(&reports),
        OutputFormat::Csv => render_reports_csv(&reports),
    };
    let written = match &args.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    let mut summary = format!("{} checks, {} failed", reports.len(), failed.len());
    if !failed.is_empty() {
        let _ = write!(summary, ": {}", failed.join(", "));
    }
    let _ = writeln!(stderr, "{summary}");
    if suite_passed(&reports) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Parses `args` (program name first) and runs the command, writing to the
/// given streams. Returns the exit status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match &cli.command {
        Command::Verify(args) => verify(args, stdout, stderr),
        Command::Eval { what } => match evaluate(what) {
            Ok((fields, format)) => {
                let _ = stdout.write_all(render_values(&fields, format).as_bytes());
                EXIT_OK
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_USAGE
            }
        },
    }
}
