#ifndef TRANSVERSAL_H
#define TRANSVERSAL_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible entry point.
 */
typedef enum TvStatus {
  TV_STATUS_OK = 0,
  TV_STATUS_NULL_POINTER = 1,
  TV_STATUS_INVALID_ARGUMENT = 2,
  TV_STATUS_PARSE_ERROR = 3,
  TV_STATUS_VALIDATION_ERROR = 4,
  TV_STATUS_SOLVE_FAILED = 5,
  TV_STATUS_OUT_OF_RANGE = 6,
  TV_STATUS_PANIC = 7,
} TvStatus;

typedef enum TvContact {
  TV_CONTACT_VERTEX = 0,
  TV_CONTACT_EDGE = 1,
  TV_CONTACT_NONE = 2,
} TvContact;

/**
 * Opaque configuration of convex polygons.
 */
typedef struct TvConfiguration TvConfiguration;

/**
 * Opaque solver result.
 */
typedef struct TvSolution TvSolution;

/**
 * Solver settings; obtain defaults from [`tv_solver_options_default`].
 */
typedef struct TvSolverOptions {
  size_t grid_size;
  double angle_tol;
  double value_tol;
  double collinear_tol;
  double certificate_tol;
} TvSolverOptions;

/**
 * One tangent polygon of a certificate.
 */
typedef struct TvTangency {
  size_t polygon;
  /**
   * -1 or +1: side of the line holding the centroid.
   */
  int8_t side;
  enum TvContact contact;
  double residual;
} TvTangency;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *tv_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated
 * and NUL-terminated) and returns the full message length in bytes,
 * excluding the terminator. Returns 0 when there is no message.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t tv_last_error_message(char *buf, size_t len);

struct TvSolverOptions tv_solver_options_default(void);

/**
 * Builds a configuration from flat arrays. Polygon `k` has
 * `vertex_counts[k]` vertices; all coordinates are packed as
 * `x0, y0, x1, y1, ...` in `coords`, which holds `2 * sum(vertex_counts)`
 * values.
 *
 * # Safety
 * `vertex_counts` must point to `n_polygons` values, `coords` to
 * `2 * sum(vertex_counts)` values, and `out` must be writable.
 */
enum TvStatus tv_configuration_from_arrays(size_t n_polygons,
                                           const size_t *vertex_counts,
                                           const double *coords,
                                           struct TvConfiguration **out);

/**
 * Parses an instance document (UTF-8 JSON).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 */
enum TvStatus tv_configuration_from_json(const char *json, struct TvConfiguration **out);

/**
 * Serializes the configuration as an instance document. Release the
 * string with [`tv_string_free`].
 *
 * # Safety
 * `config` must be a live handle and `out` must be writable.
 */
enum TvStatus tv_configuration_to_json(const struct TvConfiguration *config, char **out);

/**
 * Number of polygons, or 0 for a null handle.
 *
 * # Safety
 * `config` must be null or a live handle.
 */
size_t tv_configuration_len(const struct TvConfiguration *config);

/**
 * # Safety
 * `config` must be null or a handle not yet freed.
 */
void tv_configuration_free(struct TvConfiguration *config);

/**
 * Solves for the minimal homothety ratio. `options` may be null for
 * defaults.
 *
 * # Safety
 * `config` must be a live handle, `options` null or valid, `out` writable.
 */
enum TvStatus tv_solve(const struct TvConfiguration *config,
                       const struct TvSolverOptions *options,
                       struct TvSolution **out);

/**
 * # Safety
 * `solution` must be null or a handle not yet freed.
 */
void tv_solution_free(struct TvSolution *solution);

/**
 * Minimal ratio, or NaN for a null handle.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
double tv_solution_c_m(const struct TvSolution *solution);

/**
 * # Safety
 * `solution` must be null or a live handle.
 */
bool tv_solution_is_degenerate(const struct TvSolution *solution);

/**
 * True when the original configuration already has a transversal.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
bool tv_solution_has_transversal(const struct TvSolution *solution);

/**
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t tv_solution_line_count(const struct TvSolution *solution);

/**
 * Line `index` as normal angle `theta` in `[0, pi)` and offset: the set of
 * points `p` with `cos(theta) p.x + sin(theta) p.y = offset`.
 *
 * # Safety
 * `solution` must be a live handle; `theta` and `offset` writable.
 */
enum TvStatus tv_solution_line(const struct TvSolution *solution,
                               size_t index,
                               double *theta,
                               double *offset);

/**
 * Number of tangent polygons in the certificate of line `index`.
 * Degenerate solutions carry no certificates.
 *
 * # Safety
 * `solution` must be a live handle and `count` writable.
 */
enum TvStatus tv_solution_certificate_len(const struct TvSolution *solution,
                                          size_t index,
                                          size_t *count);

/**
 * Entry `entry` of the certificate of line `index`.
 *
 * # Safety
 * `solution` must be a live handle and `out` writable.
 */
enum TvStatus tv_solution_certificate_entry(const struct TvSolution *solution,
                                            size_t index,
                                            size_t entry,
                                            struct TvTangency *out);

/**
 * Result document for `solution`, computed on `config`. Release the
 * string with [`tv_string_free`].
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum TvStatus tv_solution_to_json(const struct TvSolution *solution,
                                  const struct TvConfiguration *config,
                                  char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void tv_string_free(char *s);

/**
 * Correcting factor of polygon `polygon` for the line with normal angle
 * `theta` and offset `offset`.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum TvStatus tv_correcting_factor(const struct TvConfiguration *config,
                                   size_t polygon,
                                   double theta,
                                   double offset,
                                   double *out);

/**
 * Independent estimate of the minimal ratio by exhaustive angle scan.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum TvStatus tv_brute_force_c_m(const struct TvConfiguration *config,
                                 size_t angle_steps,
                                 double c_tol,
                                 double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRANSVERSAL_H */
