#ifndef MEIXNER_OSC_H
#define MEIXNER_OSC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum {
  MX_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MX_STATUS_NULL_POINTER = 1,
  /**
   * Family parameters outside their admissible range.
   */
  MX_STATUS_INVALID_PARAMETER = 2,
  /**
   * An argument outside the domain of the requested quantity.
   */
  MX_STATUS_DOMAIN_ERROR = 3,
  /**
   * The requested truncation order leaves too large a tail.
   */
  MX_STATUS_TRUNCATION_TOO_SMALL = 4,
  /**
   * A numerical routine failed to converge.
   */
  MX_STATUS_NUMERICAL_FAILURE = 5,
  /**
   * The output buffer is too short.
   */
  MX_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * An internal panic was caught at the boundary.
   */
  MX_STATUS_PANIC = 7,
} MxStatus;

/**
 * Opaque polynomial family (Meixner or Meixner–Pollaczek).
 */
typedef struct MxFamily MxFamily;

/**
 * Opaque truncated coherent state.
 */
typedef struct MxState MxState;

/**
 * A complex number laid out as two doubles.
 */
typedef struct {
  double re;
  double im;
} MxComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a Meixner family with β > 0 and 0 < γ < 1.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer. The handle written
 * there must be released with [`mx_family_free`].
 */
MxStatus mx_family_meixner(double beta, double gamma, MxFamily **out);

/**
 * Creates a Meixner–Pollaczek family with ν > 0 and 0 < φ < π.
 *
 * # Safety
 * As for [`mx_family_meixner`].
 */
MxStatus mx_family_meixner_pollaczek(double nu, double phi, MxFamily **out);

/**
 * Releases a family handle. Null is ignored.
 *
 * # Safety
 * `family` must be null or a handle from `mx_family_*` not yet freed.
 */
void mx_family_free(MxFamily *family);

/**
 * 1 for a Meixner family, 2 for Meixner–Pollaczek, 0 for null.
 *
 * # Safety
 * `family` must be null or a live handle.
 */
int32_t mx_family_kind(const MxFamily *family);

/**
 * M_n(ξ) or P_n(ξ); with `normalized` nonzero, M̃_n(ξ) or P̂_n(ξ).
 *
 * # Safety
 * `family` must be a live handle and `out` valid for one `MxComplex`.
 */
MxStatus mx_poly_eval(const MxFamily *family,
                      size_t n,
                      MxComplex xi,
                      int32_t normalized,
                      MxComplex *out);

/**
 * The orthogonality weight at ξ: ρ̃(ξ) for Meixner, the density w(ξ) for
 * Meixner–Pollaczek.
 *
 * # Safety
 * `family` must be a live handle and `out` valid for one double.
 */
MxStatus mx_weight(const MxFamily *family, double xi, double *out);

/**
 * λ_n, the n-th eigenvalue of the quadratic Hamiltonian X̃² + P̃².
 *
 * # Safety
 * `family` must be a live handle and `out` valid for one double.
 */
MxStatus mx_spectrum(const MxFamily *family, size_t n, double *out);

/**
 * Barut–Girardello state |z⟩ truncated at `order` levels; 0 picks the
 * smallest order meeting the tail bound.
 *
 * # Safety
 * `family` must be a live handle and `out` valid for writing one pointer.
 * The handle must be released with [`mx_state_free`].
 */
MxStatus mx_bg_state_new(const MxFamily *family, MxComplex z, size_t order, MxState **out);

/**
 * Perelomov state |ζ⟩, |ζ| < 1; `order` as for [`mx_bg_state_new`].
 *
 * The automatic order drops a weight tail below 1e-16. The amplitude tail then is
 * only about its square root, so pass a larger explicit order for amplitudes.
 *
 * # Safety
 * As for [`mx_bg_state_new`].
 */
MxStatus mx_perelomov_state_new(const MxFamily *family,
                                MxComplex zeta,
                                size_t order,
                                MxState **out);

/**
 * Releases a state handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle from `mx_*_state_new` not yet freed.
 */
void mx_state_free(MxState *state);

/**
 * Number of stored Fock coefficients (truncation order + 1), 0 for null.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t mx_state_len(const MxState *state);

/**
 * Copies the normalized coefficients into `buf`, which holds `capacity`
 * entries.
 *
 * # Safety
 * `state` must be a live handle and `buf` valid for `capacity` writes.
 */
MxStatus mx_state_coefficients(const MxState *state, MxComplex *buf, size_t capacity);

/**
 * The normalization 𝒩² of the untruncated state.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for one double.
 */
MxStatus mx_state_norm_sq(const MxState *state, double *out);

/**
 * Mandel Q parameter of the truncated state.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for one double.
 */
MxStatus mx_state_mandel_q(const MxState *state, double *out);

/**
 * Σ c_n p_n(ξ), the state in the polynomial realization.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for one `MxComplex`.
 */
MxStatus mx_state_amplitude(const MxState *state, MxComplex xi, MxComplex *out);

/**
 * ⟨z₁|z₂⟩ of two Barut–Girardello states, closed form.
 *
 * # Safety
 * `family` must be a live handle and `out` valid for one `MxComplex`.
 */
MxStatus mx_bg_overlap(const MxFamily *family, MxComplex z1, MxComplex z2, MxComplex *out);

/**
 * ⟨ζ₁|ζ₂⟩ of two Perelomov states, closed form.
 *
 * # Safety
 * As for [`mx_bg_overlap`].
 */
MxStatus mx_perelomov_overlap(const MxFamily *family,
                              MxComplex zeta1,
                              MxComplex zeta2,
                              MxComplex *out);

/**
 * Copies the calling thread's last error message, NUL terminated and cut
 * to fit, into `buf`. Returns the full message length without the NUL;
 * 0 when the last call succeeded.
 *
 * # Safety
 * `buf` must be null or valid for `capacity` bytes.
 */
size_t mx_last_error_message(char *buf, size_t capacity);

/**
 * A static, NUL-terminated name for a status code.
 */
const char *mx_status_name(MxStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEIXNER_OSC_H */
