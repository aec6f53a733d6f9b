//! C ABI for `meixner-osc`.
//!
//! Families and coherent-state expansions are opaque handles created by
//! `mx_*_new` functions and released by the matching `mx_*_free`. Every
//! fallible call returns an [`MxStatus`] and writes its result through an
//! out-pointer; on failure the message is kept per thread and can be read
//! with [`mx_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use meixner_osc::coherent::{
    bg_expansion, bg_overlap, bg_required_order, mandel_q, perelomov_expansion, perelomov_overlap,
    perelomov_required_order, CoherentError, CoherentStateExpansion,
};
use meixner_osc::oscillator::SpectrumFormula;
use meixner_osc::polyfam::{
    meixner_raw, meixner_renorm, meixner_weight, mp_raw, mp_renorm, mp_weight_density, FamilyKind, PolyError,
    PolynomialFamily,
};
use num_complex::Complex64;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MxStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Family parameters outside their admissible range.
    InvalidParameter = 2,
    /// An argument outside the domain of the requested quantity.
    DomainError = 3,
    /// The requested truncation order leaves too large a tail.
    TruncationTooSmall = 4,
    /// A numerical routine failed to converge.
    NumericalFailure = 5,
    /// The output buffer is too short.
    BufferTooSmall = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

/// A complex number laid out as two doubles.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MxComplex {
    pub re: f64,
    pub im: f64,
}

impl From<MxComplex> for Complex64 {
    fn from(z: MxComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for MxComplex {
    fn from(z: Complex64) -> Self {
        MxComplex { re: z.re, im: z.im }
    }
}

/// Opaque polynomial family (Meixner or Meixner–Pollaczek).
pub struct MxFamily(PolynomialFamily);

/// Opaque truncated coherent state.
pub struct MxState(CoherentStateExpansion);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn poly_status(e: &PolyError) -> MxStatus {
    match e {
        PolyError::InvalidFamily(_) => MxStatus::InvalidParameter,
        PolyError::WrongFamily { .. } | PolyError::DomainError(_) | PolyError::NotReal { .. } => MxStatus::DomainError,
        PolyError::SpecFun(_) | PolyError::Quadrature(_) => MxStatus::NumericalFailure,
    }
}

fn coherent_status(e: &CoherentError) -> MxStatus {
    match e {
        CoherentError::TruncationTooSmall { .. } => MxStatus::TruncationTooSmall,
        CoherentError::DomainError(_) => MxStatus::DomainError,
        CoherentError::Poly(p) => poly_status(p),
        CoherentError::Osc(_) | CoherentError::SpecFun(_) | CoherentError::Quadrature(_) => MxStatus::NumericalFailure,
    }
}

struct Failure(MxStatus, String);

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure(poly_status(&e), e.to_string())
    }
}

impl From<CoherentError> for Failure {
    fn from(e: CoherentError) -> Self {
        Failure(coherent_status(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(MxStatus::NullPointer, format!("{name} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Failure> + UnwindSafe>(body: F) -> MxStatus {
    match catch_unwind(body) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            MxStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MxStatus::Panic
        }
    }
}

unsafe fn family_ref<'a>(family: *const MxFamily) -> Result<&'a PolynomialFamily, Failure> {
    family.as_ref().map(|f| &f.0).ok_or_else(|| null("family"))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn new_family(fam: Result<PolynomialFamily, PolyError>, out: *mut *mut MxFamily) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(ptr::null_mut());
    out.write(Box::into_raw(Box::new(MxFamily(fam?))));
    Ok(())
}

/// Creates a Meixner family with β > 0 and 0 < γ < 1.
///
/// # Safety
/// `out` must be null or valid for writing one pointer. The handle written
/// there must be released with [`mx_family_free`].
#[no_mangle]
pub unsafe extern "C" fn mx_family_meixner(beta: f64, gamma: f64, out: *mut *mut MxFamily) -> MxStatus {
    guard(|| new_family(PolynomialFamily::meixner(beta, gamma), out))
}

/// Creates a Meixner–Pollaczek family with ν > 0 and 0 < φ < π.
///
/// # Safety
/// As for [`mx_family_meixner`].
#[no_mangle]
pub unsafe extern "C" fn mx_family_meixner_pollaczek(nu: f64, phi: f64, out: *mut *mut MxFamily) -> MxStatus {
    guard(|| new_family(PolynomialFamily::meixner_pollaczek(nu, phi), out))
}

/// Releases a family handle. Null is ignored.
///
/// # Safety
/// `family` must be null or a handle from `mx_family_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mx_family_free(family: *mut MxFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// 1 for a Meixner family, 2 for Meixner–Pollaczek, 0 for null.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mx_family_kind(family: *const MxFamily) -> i32 {
    match family.as_ref().map(|f| f.0.kind()) {
        Some(FamilyKind::Meixner) => 1,
        Some(FamilyKind::MeixnerPollaczek) => 2,
        None => 0,
    }
}

/// M_n(ξ) or P_n(ξ); with `normalized` nonzero, M̃_n(ξ) or P̂_n(ξ).
///
/// # Safety
/// `family` must be a live handle and `out` valid for one `MxComplex`.
#[no_mangle]
pub unsafe extern "C" fn mx_poly_eval(
    family: *const MxFamily,
    n: usize,
    xi: MxComplex,
    normalized: i32,
    out: *mut MxComplex,
) -> MxStatus {
    guard(|| {
        let fam = family_ref(family)?;
        let xi = Complex64::from(xi);
        let value = match (fam.kind(), normalized != 0) {
            (FamilyKind::Meixner, false) => meixner_raw(n, xi, fam)?,
            (FamilyKind::Meixner, true) => meixner_renorm(n, xi, fam)?,
            (FamilyKind::MeixnerPollaczek, false) => mp_raw(n, xi, fam)?,
            (FamilyKind::MeixnerPollaczek, true) => mp_renorm(n, xi, fam)?,
        };
        write(out, value.into(), "out")
    })
}

/// The orthogonality weight at ξ: ρ̃(ξ) for Meixner, the density w(ξ) for
/// Meixner–Pollaczek.
///
/// # Safety
/// `family` must be a live handle and `out` valid for one double.
#[no_mangle]
pub unsafe extern "C" fn mx_weight(family: *const MxFamily, xi: f64, out: *mut f64) -> MxStatus {
    guard(|| {
        let fam = family_ref(family)?;
        let w = match fam.kind() {
            FamilyKind::Meixner => meixner_weight(xi, fam)?,
            FamilyKind::MeixnerPollaczek => mp_weight_density(xi, fam)?,
        };
        write(out, w, "out")
    })
}

/// λ_n, the n-th eigenvalue of the quadratic Hamiltonian X̃² + P̃².
///
/// # Safety
/// `family` must be a live handle and `out` valid for one double.
#[no_mangle]
pub unsafe extern "C" fn mx_spectrum(family: *const MxFamily, n: usize, out: *mut f64) -> MxStatus {
    guard(|| {
        let fam = family_ref(family)?;
        write(out, SpectrumFormula::closed_form(fam).lambda(n), "out")
    })
}

unsafe fn new_state(state: CoherentStateExpansion, out: *mut *mut MxState) -> Result<(), Failure> {
    out.write(Box::into_raw(Box::new(MxState(state))));
    Ok(())
}

/// Barut–Girardello state |z⟩ truncated at `order` levels; 0 picks the
/// smallest order meeting the tail bound.
///
/// # Safety
/// `family` must be a live handle and `out` valid for writing one pointer.
/// The handle must be released with [`mx_state_free`].
#[no_mangle]
pub unsafe extern "C" fn mx_bg_state_new(
    family: *const MxFamily,
    z: MxComplex,
    order: usize,
    out: *mut *mut MxState,
) -> MxStatus {
    guard(|| {
        let fam = family_ref(family)?;
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let z = Complex64::from(z);
        let order = if order == 0 {
            bg_required_order(fam, z.norm())?
        } else {
            order
        };
        new_state(bg_expansion(fam, z, order)?, out)
    })
}

/// Perelomov state |ζ⟩, |ζ| < 1; `order` as for [`mx_bg_state_new`].
///
/// The automatic order drops a weight tail below 1e-16. The amplitude tail then is
/// only about its square root, so pass a larger explicit order for amplitudes.
///
/// # Safety
/// As for [`mx_bg_state_new`].
#[no_mangle]
pub unsafe extern "C" fn mx_perelomov_state_new(
    family: *const MxFamily,
    zeta: MxComplex,
    order: usize,
    out: *mut *mut MxState,
) -> MxStatus {
    guard(|| {
        let fam = family_ref(family)?;
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(ptr::null_mut());
        let zeta = Complex64::from(zeta);
        let order = if order == 0 {
            perelomov_required_order(fam.pochhammer_param(), zeta.norm())?
        } else {
            order
        };
        new_state(perelomov_expansion(fam, zeta, order)?, out)
    })
}

/// Releases a state handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle from `mx_*_state_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mx_state_free(state: *mut MxState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of stored Fock coefficients (truncation order + 1), 0 for null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mx_state_len(state: *const MxState) -> usize {
    state.as_ref().map_or(0, |s| s.0.coeffs.len())
}

/// Copies the normalized coefficients into `buf`, which holds `capacity`
/// entries.
///
/// # Safety
/// `state` must be a live handle and `buf` valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn mx_state_coefficients(
    state: *const MxState,
    buf: *mut MxComplex,
    capacity: usize,
) -> MxStatus {
    guard(|| {
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let n = s.0.coeffs.len();
        if capacity < n {
            return Err(Failure(
                MxStatus::BufferTooSmall,
                format!("buffer holds {capacity}, state has {n} coefficients"),
            ));
        }
        for (k, c) in s.0.coeffs.iter().enumerate() {
            buf.add(k).write((*c).into());
        }
        Ok(())
    })
}

/// The normalization 𝒩² of the untruncated state.
///
/// # Safety
/// `state` must be a live handle and `out` valid for one double.
#[no_mangle]
pub unsafe extern "C" fn mx_state_norm_sq(state: *const MxState, out: *mut f64) -> MxStatus {
    guard(|| {
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        write(out, s.0.norm_sq, "out")
    })
}

/// Mandel Q parameter of the truncated state.
///
/// # Safety
/// `state` must be a live handle and `out` valid for one double.
#[no_mangle]
pub unsafe extern "C" fn mx_state_mandel_q(state: *const MxState, out: *mut f64) -> MxStatus {
    guard(|| {
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        write(out, mandel_q(&s.0), "out")
    })
}

/// Σ c_n p_n(ξ), the state in the polynomial realization.
///
/// # Safety
/// `state` must be a live handle and `out` valid for one `MxComplex`.
#[no_mangle]
pub unsafe extern "C" fn mx_state_amplitude(state: *const MxState, xi: MxComplex, out: *mut MxComplex) -> MxStatus {
    guard(|| {
        let s = state.as_ref().ok_or_else(|| null("state"))?;
        write(out, s.0.amplitude(xi.into())?.into(), "out")
    })
}

/// ⟨z₁|z₂⟩ of two Barut–Girardello states, closed form.
///
/// # Safety
/// `family` must be a live handle and `out` valid for one `MxComplex`.
#[no_mangle]
pub unsafe extern "C" fn mx_bg_overlap(
    family: *const MxFamily,
    z1: MxComplex,
    z2: MxComplex,
    out: *mut MxComplex,
) -> MxStatus {
    guard(|| {
        let fam = family_ref(family)?;
        write(out, bg_overlap(fam, z1.into(), z2.into())?.into(), "out")
    })
}

/// ⟨ζ₁|ζ₂⟩ of two Perelomov states, closed form.
///
/// # Safety
/// As for [`mx_bg_overlap`].
#[no_mangle]
pub unsafe extern "C" fn mx_perelomov_overlap(
    family: *const MxFamily,
    zeta1: MxComplex,
    zeta2: MxComplex,
    out: *mut MxComplex,
) -> MxStatus {
    guard(|| {
        let fam = family_ref(family)?;
        write(
            out,
            perelomov_overlap(fam.pochhammer_param(), zeta1.into(), zeta2.into())?.into(),
            "out",
        )
    })
}

/// Copies the calling thread's last error message, NUL terminated and cut
/// to fit, into `buf`. Returns the full message length without the NUL;
/// 0 when the last call succeeded.
///
/// # Safety
/// `buf` must be null or valid for `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn mx_last_error_message(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(msg) = slot.as_ref() else {
            if !buf.is_null() && capacity > 0 {
                buf.write(0);
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            buf.add(n).write(0);
        }
        bytes.len()
    })
}

/// A static, NUL-terminated name for a status code.
#[no_mangle]
pub extern "C" fn mx_status_name(status: MxStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        MxStatus::Ok => b"ok\0",
        MxStatus::NullPointer => b"null pointer\0",
        MxStatus::InvalidParameter => b"invalid parameter\0",
        MxStatus::DomainError => b"domain error\0",
        MxStatus::TruncationTooSmall => b"truncation too small\0",
        MxStatus::NumericalFailure => b"numerical failure\0",
        MxStatus::BufferTooSmall => b"buffer too small\0",
        MxStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}
