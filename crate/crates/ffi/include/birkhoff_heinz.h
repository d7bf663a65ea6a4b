#ifndef BIRKHOFF_HEINZ_H
#define BIRKHOFF_HEINZ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum BhStatus {
  BH_STATUS_OK = 0,
  BH_STATUS_NULL_POINTER = 1,
  BH_STATUS_INVALID_UTF8 = 2,
  BH_STATUS_PARSE_ERROR = 3,
  BH_STATUS_INVALID_NORM = 4,
  BH_STATUS_INVALID_ARGUMENT = 5,
  BH_STATUS_ESTIMATOR_ERROR = 6,
  BH_STATUS_PANIC = 7,
} BhStatus;

/**
 * Opaque norm handle.
 */
typedef struct BhNorm BhNorm;

/**
 * Grid parameters; obtain defaults from `bh_grid_default`.
 */
typedef struct BhGrid {
  uint32_t theta_count;
  uint32_t psi_scan;
  uint32_t refinement_levels;
  double scan_tol;
  double admit_tol;
  double value_tol;
} BhGrid;

/**
 * A constant estimate with its witness pair, given by sphere angles.
 */
typedef struct BhEstimate {
  double value;
  double theta_x;
  double theta_y;
  double defect;
} BhEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses norm text (`kind=... key=value ...`) into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum BhStatus bh_norm_from_spec(const char *text, struct BhNorm **out);

/**
 * Builds a handle from a built-in alias such as `"hexagon"` or `"lp:4"`.
 *
 * # Safety
 * `alias` must be a NUL-terminated string; `out` must be writable.
 */
enum BhStatus bh_norm_from_alias(const char *alias, struct BhNorm **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `norm` must come from this library and not be freed twice.
 */
void bh_norm_free(struct BhNorm *norm);

/**
 * `‖(x, y)‖`.
 *
 * # Safety
 * `norm` must be a live handle; `out` must be writable.
 */
enum BhStatus bh_norm_evaluate(const struct BhNorm *norm, double x, double y, double *out);

/**
 * Birkhoff orthogonality defect `‖x‖ − min_λ ‖x + λy‖`.
 *
 * # Safety
 * `norm` must be a live handle; `out` must be writable.
 */
enum BhStatus bh_defect(const struct BhNorm *norm,
                        double x1,
                        double x2,
                        double y1,
                        double y2,
                        double *out);

/**
 * `(a^ν b^{1−ν} + a^{1−ν} b^ν) / 2` for `a, b > 0`, `ν ∈ [0, 1]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BhStatus bh_heinz_mean(double a, double b, double nu, double *out);

struct BhGrid bh_grid_default(void);

/**
 * Estimates the constant named by `kind` (`"H"`, `"J_B"`, `"A2_B"`,
 * `"delta_B"`, `"rho_B"`, `"mu_B"`, `"J"`, `"S"`, `"A2"`). `nu` is used only
 * for `"H"`. A null `grid` means the default grid.
 *
 * # Safety
 * `norm` must be a live handle, `kind` a NUL-terminated string, `grid` null
 * or readable, and `out` writable.
 */
enum BhStatus bh_estimate(const struct BhNorm *norm,
                          const char *kind,
                          double nu,
                          const struct BhGrid *grid,
                          struct BhEstimate *out);

/**
 * Largest reverse defect over sampled orthogonal pairs; near zero exactly
 * on Radon planes.
 *
 * # Safety
 * `norm` must be a live handle, `grid` null or readable, `out` writable.
 */
enum BhStatus bh_radon_defect(const struct BhNorm *norm, const struct BhGrid *grid, double *out);

/**
 * Runs the inequality catalog for `nu_count` values of ν and returns the
 * JSON report in `*out_json`. `*all_passed` receives 1 or 0 when non-null.
 *
 * # Safety
 * `norm` must be a live handle, `nus` must point to `nu_count` doubles,
 * `grid` null or readable, `out_json` writable; `all_passed` may be null.
 */
enum BhStatus bh_verify_json(const struct BhNorm *norm,
                             const double *nus,
                             size_t nu_count,
                             const struct BhGrid *grid,
                             char **out_json,
                             int32_t *all_passed);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void bh_string_free(char *s);

/**
 * Error message from the most recent call on this thread; empty after a
 * success. The pointer is valid until the next call on the same thread.
 */
const char *bh_last_error_message(void);

/**
 * Canonical norm text for a handle, returned in `*out`.
 *
 * # Safety
 * `norm` must be a live handle and `out` writable.
 */
enum BhStatus bh_norm_spec_string(const struct BhNorm *norm, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIRKHOFF_HEINZ_H */
