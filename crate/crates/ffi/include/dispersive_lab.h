#ifndef DISPERSIVE_LAB_H
#define DISPERSIVE_LAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_NULL_POINTER = 1,
  DL_STATUS_INVALID_INPUT = 2,
  DL_STATUS_DOMAIN = 3,
  DL_STATUS_NON_CONVERGENCE = 4,
  DL_STATUS_PRECONDITION = 5,
  DL_STATUS_BUFFER_TOO_SMALL = 6,
  DL_STATUS_PANIC = 7,
  DL_STATUS_OTHER = 8,
} DlStatus;

// Band-limited function on a periodic grid.
typedef struct DlFunction DlFunction;

// Maximal function sampled on a grid.
typedef struct DlProfile DlProfile;

// Nonincreasing time sequence in `(0, 1]`.
typedef struct DlSequence DlSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *dl_version(void);

// Copies the calling thread's last error message into `buf` (truncated,
// always NUL-terminated when `len > 0`). Returns the full message length
// without the terminator.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
uintptr_t dl_last_error_message(char *buf, uintptr_t len);

// Function with the given Fourier coefficients (FFT order, `n_points`
// of them) on the grid of `n_points` points over `[0, period)`.
//
// # Safety
// `re` and `im` must point to `n_points` values; `out` must be writable.
enum DlStatus dl_function_new(uintptr_t n_points,
                              double period,
                              const double *re,
                              const double *im,
                              struct DlFunction **out);

// Seeded random function: Gaussian coefficients damped by
// `(1+ξ²)^{-decay/2}` on `|ξ| <= max_freq`.
//
// # Safety
// `out` must be writable.
enum DlStatus dl_function_random(uintptr_t n_points,
                                 double period,
                                 double max_freq,
                                 double decay,
                                 uint64_t seed,
                                 struct DlFunction **out);

// Number of grid points (and coefficients); 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
uintptr_t dl_function_len(const struct DlFunction *f);

// Writes the coefficients into `re`/`im`, each holding `len` values.
//
// # Safety
// `f` must be a live handle; `re`, `im` must point to `len` writable values.
enum DlStatus dl_function_coeffs(const struct DlFunction *f, double *re, double *im, uintptr_t len);

// Samples `f(x_j)` into `re`/`im`.
//
// # Safety
// As for [`dl_function_coeffs`].
enum DlStatus dl_function_samples(const struct DlFunction *f,
                                  double *re,
                                  double *im,
                                  uintptr_t len);

// `‖f‖_{H^s}`; `s = 0` gives the L² norm.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum DlStatus dl_function_sobolev_norm(const struct DlFunction *f, double s, double *out);

// # Safety
// `f` must be null or a handle not yet freed.
void dl_function_free(struct DlFunction *f);

// New function `e^{it|D|^a} f`.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum DlStatus dl_evolve(const struct DlFunction *f, double t, double a, struct DlFunction **out);

// `t_n = n^{-gamma}`, `n = 1..=n_terms`.
//
// # Safety
// `out` must be writable.
enum DlStatus dl_sequence_power(double gamma, uintptr_t n_terms, struct DlSequence **out);

// Custom sequence from `len` nonincreasing values in `(0, 1]`.
//
// # Safety
// `values` must point to `len` values; `out` must be writable.
enum DlStatus dl_sequence_from_values(const double *values, uintptr_t len, struct DlSequence **out);

// Number of terms; 0 for a null handle.
//
// # Safety
// `seq` must be null or a live handle.
uintptr_t dl_sequence_len(const struct DlSequence *seq);

// # Safety
// `seq` must be a live handle; `buf` must point to `len` writable values.
enum DlStatus dl_sequence_values(const struct DlSequence *seq, double *buf, uintptr_t len);

// `sup_k t_k^r · #{n : t_n >= t_k}`.
//
// # Safety
// `seq` must be a live handle; `out` must be writable.
enum DlStatus dl_lorentz_quasinorm(const struct DlSequence *seq, double r, double *out);

// # Safety
// `seq` must be null or a handle not yet freed.
void dl_sequence_free(struct DlSequence *seq);

// `sup_n |e^{i t_n |D|^a} f|` on the grid of `f`.
//
// # Safety
// `f`, `seq` must be live handles; `out` must be writable.
enum DlStatus dl_maximal_profile(const struct DlFunction *f,
                                 const struct DlSequence *seq,
                                 double a,
                                 struct DlProfile **out);

// Number of grid points; 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
uintptr_t dl_profile_len(const struct DlProfile *p);

// Profile values and, when `argmax` is not null, the 0-based index of the
// attaining time.
//
// # Safety
// `p` must be a live handle; `values` (and `argmax` when given) must point
// to `len` writable entries.
enum DlStatus dl_profile_values(const struct DlProfile *p,
                                double *values,
                                uintptr_t *argmax,
                                uintptr_t len);

// `‖profile‖_{L²}` over the period.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum DlStatus dl_profile_l2_norm(const struct DlProfile *p, double *out);

// # Safety
// `p` must be null or a handle not yet freed.
void dl_profile_free(struct DlProfile *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISPERSIVE_LAB_H */
