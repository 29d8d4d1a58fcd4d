#ifndef QBRACKETS_H
#define QBRACKETS_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QbStatus {
  QB_STATUS_OK = 0,
  QB_STATUS_VERIFICATION_FAILED = 1,
  QB_STATUS_INVALID_ARGUMENT = 2,
  QB_STATUS_NOT_APPLICABLE = 3,
  QB_STATUS_INSUFFICIENT = 4,
  QB_STATUS_NULL_POINTER = 5,
  QB_STATUS_PANIC = 6,
} QbStatus;

/**
 * Opaque verification report.
 */
typedef struct QbReport QbReport;

/**
 * Opaque truncated q-expansion.
 */
typedef struct QbSeries QbSeries;

/**
 * Parameters for [`qb_verify`]. Zero means "not given" (or the default
 * truncation for `terms` and `units`).
 */
typedef struct QbVerifyParams {
  uint64_t p;
  uint32_t r;
  uint32_t k;
  uint32_t k1;
  uint32_t k2;
  uint32_t i_max;
  uint32_t terms;
  int64_t units;
} QbVerifyParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * `calQ_k` (`p == 0`) or `calQ_k^(p)` through `q^terms`, by the closed
 * double-sum formula.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QbStatus qb_calq(uint32_t k, uint32_t terms, uint64_t p, struct QbSeries **out);

/**
 * Normalized Eisenstein series `E_k` through `q^terms`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QbStatus qb_eisenstein(uint32_t k, uint32_t terms, struct QbSeries **out);

/**
 * The correction series `f_k^(p)` through `q^terms`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QbStatus qb_correction(uint32_t k, uint64_t p, uint32_t terms, struct QbSeries **out);

/**
 * Number of known coefficients (`q^0` up to `q^{n-1}`); 0 for null.
 *
 * # Safety
 * `series` must be null or a live handle.
 */
uint64_t qb_series_len(const struct QbSeries *series);

/**
 * Coefficient of `q^n` as "a" or "a/b"; null when out of range. Free with
 * [`qb_string_free`].
 *
 * # Safety
 * `series` must be null or a live handle.
 */
char *qb_series_coefficient(const struct QbSeries *series, uint64_t n);

/**
 * JSON document for the series. Free with [`qb_string_free`].
 *
 * # Safety
 * `series` must be null or a live handle.
 */
char *qb_series_to_json(const struct QbSeries *series);

/**
 * # Safety
 * `series` must be null or a handle not yet freed.
 */
void qb_series_free(struct QbSeries *series);

/**
 * Runs one check. Returns `QB_STATUS_OK`, `QB_STATUS_VERIFICATION_FAILED` or
 * `QB_STATUS_NOT_APPLICABLE` with a report handle, or an error status
 * without one.
 *
 * # Safety
 * `claim` must be a NUL-terminated string, `params` null or valid, and
 * `out` a valid pointer to writable storage for one handle.
 */
enum QbStatus qb_verify(const char *claim,
                        const struct QbVerifyParams *params,
                        struct QbReport **out);

/**
 * JSON document for the report. Free with [`qb_string_free`].
 *
 * # Safety
 * `report` must be null or a live handle.
 */
char *qb_report_to_json(const struct QbReport *report);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void qb_report_free(struct QbReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void qb_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qb_last_error_message(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QBRACKETS_H */
