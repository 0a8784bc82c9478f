#ifndef TROPLIN_H
#define TROPLIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define TROPLIN_METHOD_AUTO 0

#define TROPLIN_METHOD_EXACT 1

#define TROPLIN_METHOD_LIFTING 2

#define TROPLIN_STRATEGY_ORIGINAL 0

#define TROPLIN_STRATEGY_OPTIMIZED 1

#define TROPLIN_STRATEGY_AGG 2

#define TROPLIN_STRATEGY_COMBINED_MAX 3

#define TROPLIN_STRATEGY_COMBINED_MIN 4

typedef enum TroplinStatus {
  TROPLIN_STATUS_OK = 0,
  TROPLIN_STATUS_NULL_POINTER = 1,
  TROPLIN_STATUS_INVALID_ARGUMENT = 2,
  TROPLIN_STATUS_DIMENSION_MISMATCH = 3,
  TROPLIN_STATUS_OUT_OF_RANGE = 4,
  TROPLIN_STATUS_PARSE = 5,
  TROPLIN_STATUS_INTERNAL = 6,
  TROPLIN_STATUS_PANIC = 7,
} TroplinStatus;

/**
 * Opaque matrix handle.
 */
typedef struct TroplinMatrix TroplinMatrix;

/**
 * Opaque solve result handle.
 */
typedef struct TroplinOutcome TroplinOutcome;

typedef struct TroplinSolveOptions {
  /**
   * One of the `TROPLIN_METHOD_*` constants.
   */
  uint32_t method;
  /**
   * One of the `TROPLIN_STRATEGY_*` constants; used by the lifting method.
   */
  uint32_t strategy;
  /**
   * Guard bound for lifting; values `<= 0` select the default.
   */
  int64_t guard_bound;
  bool memoize;
} TroplinSolveOptions;

typedef struct TroplinStats {
  uint64_t lifts;
  uint64_t touched_columns;
  uint64_t guard_trips;
  uint64_t recursion_nodes;
  uint64_t memo_hits;
  uint64_t assignment_calls;
  uint64_t micros;
} TroplinStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default options: automatic method, combined-max lifting, default guard,
 * memoization on.
 */
struct TroplinSolveOptions troplin_default_solve_options(void);

/**
 * Builds a `rows x cols` matrix from row-major `data`.
 */
enum TroplinStatus troplin_matrix_new(uintptr_t rows,
                                      uintptr_t cols,
                                      const int64_t *data,
                                      struct TroplinMatrix **out);

/**
 * Parses the text instance format (`m n` header, then `m` rows).
 */
enum TroplinStatus troplin_matrix_parse(const char *text, struct TroplinMatrix **out);

void troplin_matrix_free(struct TroplinMatrix *m);

/**
 * Number of rows, or 0 for a null handle.
 */
uintptr_t troplin_matrix_rows(const struct TroplinMatrix *m);

/**
 * Number of columns, or 0 for a null handle.
 */
uintptr_t troplin_matrix_cols(const struct TroplinMatrix *m);

/**
 * Checks whether `x` (length `len`) solves the system.
 */
enum TroplinStatus troplin_verify_solution(const struct TroplinMatrix *m,
                                           const int64_t *x,
                                           uintptr_t len,
                                           bool *out);

/**
 * Solves the system. `opts` may be null for defaults. The outcome handle
 * must be released with [`troplin_outcome_free`].
 */
enum TroplinStatus troplin_solve(const struct TroplinMatrix *m,
                                 const struct TroplinSolveOptions *opts,
                                 struct TroplinOutcome **out);

void troplin_outcome_free(struct TroplinOutcome *o);

/**
 * False for infeasible outcomes and null handles.
 */
bool troplin_outcome_is_feasible(const struct TroplinOutcome *o);

/**
 * Length of the solution vector; 0 when infeasible.
 */
uintptr_t troplin_outcome_solution_len(const struct TroplinOutcome *o);

/**
 * Copies the solution into `buf`, which must hold at least
 * [`troplin_outcome_solution_len`] values.
 */
enum TroplinStatus troplin_outcome_copy_solution(const struct TroplinOutcome *o,
                                                 int64_t *buf,
                                                 uintptr_t len);

enum TroplinStatus troplin_outcome_stats(const struct TroplinOutcome *o, struct TroplinStats *out);

/**
 * Minimum-weight perfect matching value of a square matrix.
 */
enum TroplinStatus troplin_tropical_permanent(const struct TroplinMatrix *m, int64_t *out);

/**
 * Whether the optimal matching of a square matrix is attained twice.
 */
enum TroplinStatus troplin_is_singular(const struct TroplinMatrix *m, bool *out);

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes). Returns the full message length in bytes.
 */
uintptr_t troplin_last_error_message(char *buf, uintptr_t len);

/**
 * Static description of a status code.
 */
const char *troplin_status_string(enum TroplinStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPLIN_H */
