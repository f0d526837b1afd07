#ifndef WILDRAM_H
#define WILDRAM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  WR_STATUS_OK = 0,
  WR_STATUS_NULL_POINTER = 1,
  WR_STATUS_INVALID_UTF8 = 2,
  WR_STATUS_PARSE_ERROR = 3,
  WR_STATUS_INVARIANT_VIOLATION = 4,
  WR_STATUS_INSUFFICIENT_PRECISION = 5,
  WR_STATUS_PRECONDITION_VIOLATION = 6,
  WR_STATUS_UNKNOWN_SUITE = 7,
  WR_STATUS_WRONG_INPUT_KIND = 8,
  WR_STATUS_BUFFER_TOO_SMALL = 9,
  WR_STATUS_COMPUTATION_ERROR = 10,
  WR_STATUS_PANIC = 11,
} WrStatus;

/**
 * The outcome of a verification suite.
 */
typedef struct WrReport WrReport;

/**
 * A wild series over `F_p`.
 */
typedef struct WrSeries WrSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * A static, NUL-terminated description of `status`.
 */
const char *wr_status_str(WrStatus status);

/**
 * Copy the calling thread's last error message into `buf`.
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes; `needed` must be null or valid.
 */
WrStatus wr_last_error(char *buf, size_t cap, size_t *needed);

/**
 * Parse a JSON series spec over `F_p` into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_series` must be valid.
 */
WrStatus wr_series_from_json(const char *json, WrSeries **out_series);

/**
 * Release a series handle. Null is ignored.
 *
 * # Safety
 * `series` must come from this library and not be used afterwards.
 */
void wr_series_free(WrSeries *series);

/**
 * Serialize a series back to its JSON spec.
 *
 * # Safety
 * `series` must be a live handle; `buf`/`needed` as for [`wr_last_error`].
 */
WrStatus wr_series_to_json(const WrSeries *series, char *buf, size_t cap, size_t *needed);

/**
 * The characteristic `p` and the precision of a series.
 *
 * # Safety
 * `series` must be a live handle; the outputs must be valid.
 */
WrStatus wr_series_info(const WrSeries *series, uint32_t *p, size_t *prec);

/**
 * `q = mult(f) - 1`.
 *
 * # Safety
 * `series` must be a live handle; `q` must be valid.
 */
WrStatus wr_series_q(const WrSeries *series, size_t *q);

/**
 * `pind_j(f)` as an integer in `[0, p)`.
 *
 * # Safety
 * `series` must be a live handle; `value` must be valid.
 */
WrStatus wr_series_pind(const WrSeries *series, size_t j, uint32_t *value);

/**
 * `resit(f)`; requires odd `p`.
 *
 * # Safety
 * `series` must be a live handle; `value` must be valid.
 */
WrStatus wr_series_resit(const WrSeries *series, uint32_t *value);

/**
 * The least `j` with `pind_j != 0`, or 0 if every `pind_j` vanishes.
 *
 * # Safety
 * `series` must be a live handle; `j` must be valid.
 */
WrStatus wr_series_smallest_index(const WrSeries *series, size_t *j);

/**
 * Fill `values[0..=n_max]` with `i_0..i_{n_max}` and `exact[n]` with 1 when
 * `i_n` is resolved (otherwise `values[n]` is a lower bound). Both arrays
 * must hold `n_max + 1` entries.
 *
 * # Safety
 * `values` and `exact` must be valid for `n_max + 1` writes.
 */
WrStatus wr_series_ramification(const WrSeries *series,
                                size_t n_max,
                                uint64_t *values,
                                uint8_t *exact);

/**
 * Conjugate to the normal form for index `j`; the result is a new handle.
 *
 * # Safety
 * `series` must be a live handle; `out_series` must be valid.
 */
WrStatus wr_series_normal_form(const WrSeries *series, size_t j, WrSeries **out_series);

/**
 * Run a verification suite. `params_json` may be null for defaults, or a
 * JSON object with any of `p`, `q`, `q_max`, `n_max`, `samples`, `cases`.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `params_json` null or one, and
 * `out_report` valid.
 */
WrStatus wr_run_suite(const char *name,
                      uint64_t seed,
                      const char *params_json,
                      WrReport **out_report);

/**
 * Sample, pass and fail counts; `all_passed` is 1 when nothing failed.
 *
 * # Safety
 * `report` must be a live handle; null outputs are skipped.
 */
WrStatus wr_report_counts(const WrReport *report,
                          size_t *samples,
                          size_t *pass,
                          size_t *fail_count,
                          uint8_t *all_passed);

/**
 * Copy the report's JSON into `buf`. Call with a null `buf` to size it.
 *
 * # Safety
 * `report` must be a live handle; `buf`/`needed` as for [`wr_last_error`].
 */
WrStatus wr_report_json(const WrReport *report, char *buf, size_t cap, size_t *needed);

/**
 * Release a report handle. Null is ignored.
 *
 * # Safety
 * `report` must come from this library and not be used afterwards.
 */
void wr_report_free(WrReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WILDRAM_H */
