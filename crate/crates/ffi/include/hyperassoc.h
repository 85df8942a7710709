#ifndef HYPERASSOC_H
#define HYPERASSOC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum HaStatus {
  HA_STATUS_OK = 0,
  HA_STATUS_NULL_POINTER = 1,
  HA_STATUS_INVALID_UTF8 = 2,
  HA_STATUS_CONFIG = 3,
  HA_STATUS_MALFORMED_TRIPLES = 4,
  HA_STATUS_DOMAIN = 5,
  HA_STATUS_SEMIRING_MISMATCH = 6,
  HA_STATUS_PARSE = 7,
  HA_STATUS_FORMAT = 8,
  HA_STATUS_IO = 9,
  HA_STATUS_OUT_OF_RANGE = 10,
  HA_STATUS_PANIC = 11,
} HaStatus;

// An associative array.
typedef struct HaAssoc HaAssoc;

// A hierarchical array.
typedef struct HaHier HaHier;

// Triples exported from an array, in row-major key order.
typedef struct HaTriples HaTriples;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *ha_last_error(void);

// An empty array under the named semiring (`plus_times`, `max_plus`,
// `min_plus`, `max_times`, `min_times`, `max_min`, `min_max`).
//
// # Safety
// `semiring_name` must be a valid C string and `out` writable.
enum HaStatus ha_assoc_empty(const char *semiring_name, struct HaAssoc **out);

// Builds an array from `len` parallel triples; duplicates are folded with
// the semiring's addition.
//
// # Safety
// `rows` and `cols` must point to `len` valid C strings and `vals` to `len`
// doubles (any of them may be null when `len` is 0).
enum HaStatus ha_assoc_from_triples(const char *semiring_name,
                                    const char *const *rows,
                                    const char *const *cols,
                                    const double *vals,
                                    size_t len,
                                    struct HaAssoc **out);

// Releases an array. Null is ignored.
//
// # Safety
// `a` must come from this library and not be used afterwards.
void ha_assoc_free(struct HaAssoc *a);

// Element-wise sum `a ⊕ b`.
//
// # Safety
// `a` and `b` must be live arrays and `out` writable.
enum HaStatus ha_assoc_add(const struct HaAssoc *a, const struct HaAssoc *b, struct HaAssoc **out);

// Element-wise product `a ⊗ b`.
//
// # Safety
// `a` and `b` must be live arrays and `out` writable.
enum HaStatus ha_assoc_mult(const struct HaAssoc *a, const struct HaAssoc *b, struct HaAssoc **out);

// Array product `a ⊕.⊗ b`.
//
// # Safety
// `a` and `b` must be live arrays and `out` writable.
enum HaStatus ha_assoc_matmul(const struct HaAssoc *a,
                              const struct HaAssoc *b,
                              struct HaAssoc **out);

// # Safety
// `a` must be a live array and `out` writable.
enum HaStatus ha_assoc_transpose(const struct HaAssoc *a, struct HaAssoc **out);

// Number of stored entries.
//
// # Safety
// `a` must be a live array and `out` writable.
enum HaStatus ha_assoc_nnz(const struct HaAssoc *a, size_t *out);

// Looks up one entry. Absent entries set `found` to false and `value` to
// the semiring zero.
//
// # Safety
// `a` must be a live array, the keys valid C strings and the outputs
// writable.
enum HaStatus ha_assoc_get(const struct HaAssoc *a,
                           const char *row,
                           const char *col,
                           double *value,
                           bool *found);

// Whether two arrays hold the same triples under the same semiring.
//
// # Safety
// `a` and `b` must be live arrays and `out` writable.
enum HaStatus ha_assoc_equal(const struct HaAssoc *a, const struct HaAssoc *b, bool *out);

// Copies the stored entries out of `a`.
//
// # Safety
// `a` must be a live array and `out` writable.
enum HaStatus ha_assoc_triples(const struct HaAssoc *a, struct HaTriples **out);

// Number of exported triples; 0 for null.
//
// # Safety
// `t` must be null or live.
size_t ha_triples_len(const struct HaTriples *t);

// Triple `index`. The key pointers stay valid until `t` is freed.
//
// # Safety
// `t` must be live and the outputs writable.
enum HaStatus ha_triples_get(const struct HaTriples *t,
                             size_t index,
                             const char **row,
                             const char **col,
                             double *value);

// # Safety
// `t` must come from [`ha_assoc_triples`] and not be used afterwards.
void ha_triples_free(struct HaTriples *t);

// Writes `a` as tab-separated triples.
//
// # Safety
// `a` must be a live array and `path` a valid C string.
enum HaStatus ha_assoc_write(const struct HaAssoc *a, const char *path);

// Reads tab-separated triples, folding duplicate lines with `⊕`.
//
// # Safety
// `path` and `semiring_name` must be valid C strings and `out` writable.
enum HaStatus ha_assoc_read(const char *path, const char *semiring_name, struct HaAssoc **out);

// A hierarchical array. `cuts` is `none`, `few-wide`, `many-narrow`,
// `layers:N` or a comma-separated list of strictly increasing cut values.
//
// # Safety
// `semiring_name` and `cuts` must be valid C strings and `out` writable.
enum HaStatus ha_hier_new(const char *semiring_name, const char *cuts, struct HaHier **out);

// Adds a copy of `batch` into the hierarchy, cascading full layers.
//
// # Safety
// `h` and `batch` must be live.
enum HaStatus ha_hier_update(struct HaHier *h, const struct HaAssoc *batch);

// Sum of all layers as a new array; the hierarchy is unchanged.
//
// # Safety
// `h` must be live and `out` writable.
enum HaStatus ha_hier_flush(const struct HaHier *h, struct HaAssoc **out);

// Number of layers, one more than the number of cuts.
//
// # Safety
// `h` must be live and `out` writable.
enum HaStatus ha_hier_layer_count(const struct HaHier *h, size_t *out);

// Stored entries in layer `layer` (0-based).
//
// # Safety
// `h` must be live and `out` writable.
enum HaStatus ha_hier_layer_nnz(const struct HaHier *h, size_t layer, size_t *out);

// Stored entries summed over all layers (an upper bound on the flushed
// nnz).
//
// # Safety
// `h` must be live and `out` writable.
enum HaStatus ha_hier_nnz(const struct HaHier *h, size_t *out);

// # Safety
// `h` must come from [`ha_hier_new`] and not be used afterwards.
void ha_hier_free(struct HaHier *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERASSOC_H */
