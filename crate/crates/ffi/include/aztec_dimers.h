#ifndef AZTEC_DIMERS_H
#define AZTEC_DIMERS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AztecStatus {
  AZTEC_STATUS_OK = 0,
  AZTEC_STATUS_NULL_POINTER = 1,
  AZTEC_STATUS_INVALID_ARGUMENT = 2,
  AZTEC_STATUS_INVALID_WEIGHTS = 3,
  AZTEC_STATUS_BUFFER_TOO_SMALL = 4,
  AZTEC_STATUS_SINGULAR = 5,
  AZTEC_STATUS_DOMAIN = 6,
  AZTEC_STATUS_INTERNAL = 7,
} AztecStatus;

/**
 * An Aztec diamond with precomputed shuffling tables.
 */
typedef struct AztecSampler AztecSampler;

/**
 * A periodic weight scheme.
 */
typedef struct AztecWeights AztecWeights;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *aztec_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`) and returns the full length including the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t aztec_last_error(char *buf, size_t len);

/**
 * Parses a weight scheme from JSON `{"k","l","alpha","beta","gamma"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum AztecStatus aztec_weights_from_json(const char *json, struct AztecWeights **out);

/**
 * The symmetric 2x2 family with parameter `a`.
 *
 * # Safety
 * `out` must be writable.
 */
enum AztecStatus aztec_weights_symmetric(double a, struct AztecWeights **out);

/**
 * # Safety
 * `w` must be null or a handle from this library not yet freed.
 */
void aztec_weights_free(struct AztecWeights *w);

/**
 * `ln |det K|` for the diamond of the given order.
 *
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum AztecStatus aztec_ln_partition_function(const struct AztecWeights *w,
                                             size_t order,
                                             double *out);

/**
 * A sampler for the diamond of order `k l periods`.
 *
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum AztecStatus aztec_sampler_new(const struct AztecWeights *w,
                                   size_t periods,
                                   struct AztecSampler **out);

/**
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void aztec_sampler_free(struct AztecSampler *s);

/**
 * Order of the diamond, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t aztec_sampler_order(const struct AztecSampler *s);

/**
 * Number of white vertices (and of matched edges).
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t aztec_sampler_num_white(const struct AztecSampler *s);

/**
 * Number of faces (length of a height array).
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t aztec_sampler_num_faces(const struct AztecSampler *s);

/**
 * Plane positions `(x, y)` of the faces, interleaved into `xy[2 * len]`.
 *
 * # Safety
 * `s` must be a live handle; `xy` must point to `len` writable values.
 */
enum AztecStatus aztec_sampler_face_positions(const struct AztecSampler *s,
                                              int64_t *xy,
                                              size_t len);

/**
 * Sample `index` of the batch keyed by `seed`: `partners[w]` receives the
 * black vertex matched to white `w`, and `heights` (if non-null) the
 * height of every face. Results depend only on `(seed, index)`.
 *
 * # Safety
 * `s` must be a live handle; `partners` must hold `num_white` values and
 * `heights`, if non-null, `num_faces` values.
 */
enum AztecStatus aztec_sample(const struct AztecSampler *s,
                              uint64_t seed,
                              uint64_t index,
                              uint32_t *partners,
                              size_t partners_len,
                              int64_t *heights,
                              size_t heights_len);

/**
 * `Im B` of the genus-1 curve of the symmetric 2x2 family (`Re B = 0`).
 *
 * # Safety
 * `out` must be writable.
 */
enum AztecStatus aztec_period_genus1(double a, double *out);

/**
 * Genus-1 theta function `theta(z; b)`.
 *
 * # Safety
 * `out_re` and `out_im` must be writable.
 */
enum AztecStatus aztec_theta(double z_re,
                             double z_im,
                             double b_re,
                             double b_im,
                             double *out_re,
                             double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AZTEC_DIMERS_H */
