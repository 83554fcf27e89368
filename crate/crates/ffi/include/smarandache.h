/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SMARANDACHE_H
#define SMARANDACHE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  SMD_BASE_NATURAL = 0,
  SMD_BASE_TRIANGULAR = 1,
} SmdBase;

typedef enum {
  SMD_KIND_CONSECUTIVE = 0,
  SMD_KIND_REVERSED = 1,
  SMD_KIND_MIRROR = 2,
  SMD_KIND_SYMMETRIC = 3,
} SmdKind;

typedef enum {
  SMD_PRIME_STATUS_COMPOSITE = 0,
  SMD_PRIME_STATUS_PRIME = 1,
  SMD_PRIME_STATUS_PROBABLE_PRIME = 2,
} SmdPrimeStatus;

typedef enum {
  SMD_STATUS_OK = 0,
  SMD_STATUS_INVALID_ARGUMENT = 1,
  SMD_STATUS_NULL_POINTER = 2,
  SMD_STATUS_PARSE = 3,
  SMD_STATUS_OVERFLOW = 4,
  SMD_STATUS_IO = 5,
  SMD_STATUS_REPORT = 6,
  SMD_STATUS_CHECKPOINT_MISMATCH = 7,
  SMD_STATUS_CORRUPT_CHECKPOINT = 8,
  SMD_STATUS_VERIFY_FAILED = 9,
  SMD_STATUS_PANIC = 10,
} SmdStatus;

/**
 * Iterator over the terms of one sequence.
 */
typedef struct SmdGenerator SmdGenerator;

typedef struct {
  uint64_t records;
  uint64_t prime_hits;
  uint64_t triangular_hits;
  /**
   * First index processed by this call; 0 when nothing was resumed.
   */
  uint64_t resumed_at;
} SmdScanResult;

typedef struct {
  uint64_t records;
  uint64_t mismatches;
  uint64_t prime_hits;
  uint64_t triangular_hits;
} SmdVerifyResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *smd_version(void);

/**
 * Message for the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *smd_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void smd_string_free(char *s);

/**
 * Digit count of term `index` (>= 1), without building the term.
 *
 * # Safety
 * `out` must be valid for a write.
 */
SmdStatus smd_digits_at(SmdKind kind, SmdBase base, uint64_t index, uint64_t *out);

/**
 * Decimal value of term `index` (>= 1). Free `*out` with `smd_string_free`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
SmdStatus smd_term_at(SmdKind kind, SmdBase base, uint64_t index, char **out);

/**
 * Concatenation of two canonical decimal strings. Free `*out` with
 * `smd_string_free`.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated; `out` must be valid for a write.
 */
SmdStatus smd_conc(const char *a, const char *b, char **out);

/**
 * Sets `*is_triangular_out` to 1 when `x = k(k+1)/2` for some `k`, else 0.
 * When `k_out` is not NULL and `x` is triangular, `*k_out` receives `k`
 * (free with `smd_string_free`); otherwise it is set to NULL.
 *
 * # Safety
 * `x` must be NUL-terminated; `is_triangular_out` must be valid for a write;
 * `k_out` must be NULL or valid for a write.
 */
SmdStatus smd_is_triangular(const char *x, int32_t *is_triangular_out, char **k_out);

/**
 * Classifies `x` with trial division up to `trial_bound` (0 for the
 * default), then the deterministic or BPSW path plus `extra_rounds`
 * seeded Miller-Rabin rounds.
 *
 * # Safety
 * `x` must be NUL-terminated; `out` must be valid for a write.
 */
SmdStatus smd_is_probable_prime(const char *x,
                                uint32_t trial_bound,
                                uint32_t extra_rounds,
                                uint64_t seed,
                                SmdPrimeStatus *out);

/**
 * Creates a generator positioned before term 1.
 *
 * # Safety
 * `out` must be valid for a write.
 */
SmdStatus smd_generator_new(SmdKind kind, SmdBase base, SmdGenerator **out);

/**
 * Moves the generator so that the next term produced is `index` (>= 1).
 * Moving backwards restarts from term 1.
 *
 * # Safety
 * `generator` must come from `smd_generator_new`.
 */
SmdStatus smd_generator_skip_to(SmdGenerator *generator, uint64_t index);

/**
 * Produces the next term. `index` may be NULL; `*value` must be freed with
 * `smd_string_free`.
 *
 * # Safety
 * `generator` must come from `smd_generator_new`; `value` must be valid
 * for a write; `index` must be NULL or valid for a write.
 */
SmdStatus smd_generator_next(SmdGenerator *generator, uint64_t *index, char **value);

/**
 * Releases a generator. NULL is ignored.
 *
 * # Safety
 * `generator` must come from `smd_generator_new` and must not be used
 * afterwards.
 */
void smd_generator_free(SmdGenerator *generator);

/**
 * Runs a scan described by flat `key = value` text (keys as the command
 * line flags: `kind`, `base`, `from`, `to`, `check`, `out`, `checkpoint`,
 * `workers`, `seed`, `mr_rounds`, `trial_bound`, `full_values`, `timings`).
 * `out` may be NULL.
 *
 * # Safety
 * `config_text` must be NUL-terminated; `out` must be NULL or valid for a
 * write.
 */
SmdStatus smd_scan(const char *config_text, SmdScanResult *out);

/**
 * Re-derives every record of the report at `path`. Returns
 * `SMD_STATUS_VERIFY_FAILED` when any record disagrees; `out` is filled in
 * either case. With `use_seed` zero the seed is derived from the report.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be NULL or valid for a write.
 */
SmdStatus smd_verify_report(const char *path,
                            int32_t use_seed,
                            uint64_t seed,
                            uint32_t workers,
                            SmdVerifyResult *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SMARANDACHE_H */
