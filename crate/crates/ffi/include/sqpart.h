/* C ABI for the sqpart library. Generated by cbindgen; do not edit. */

#ifndef SQPART_H
#define SQPART_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which estimate a log-estimate call should produce. Passed as a plain
 * u32 so that out-of-range values can be rejected instead of being
 * undefined behavior.
 */
typedef enum SqpartEstimateMethod {
  SqpartEstimateMethod_Main = 0,
  SqpartEstimateMethod_Simple = 1,
  SqpartEstimateMethod_Difference = 2,
} SqpartEstimateMethod;

/**
 * Status codes returned by every fallible call.
 */
typedef enum SqpartStatus {
  SqpartStatus_Ok = 0,
  /**
   * A precondition on an argument was violated.
   */
  SqpartStatus_InvalidArgument = 1,
  /**
   * A configured memory or size cap was exceeded.
   */
  SqpartStatus_ResourceLimit = 2,
  /**
   * An iteration failed to converge or produced a non-finite value.
   */
  SqpartStatus_NumericFailure = 3,
  /**
   * A membership table does not cover the requested range.
   */
  SqpartStatus_TableTooSmall = 4,
  /**
   * An I/O error (unused by the in-memory API, reserved).
   */
  SqpartStatus_Io = 5,
  /**
   * A required pointer argument was NULL.
   */
  SqpartStatus_NullPointer = 6,
  /**
   * The library panicked; state may be inconsistent.
   */
  SqpartStatus_Panic = 7,
} SqpartStatus;

/**
 * Opaque membership table handle.
 */
typedef struct SqpartMembership SqpartMembership;

/**
 * Opaque exact partition table handle.
 */
typedef struct SqpartPartitionTable SqpartPartitionTable;

/**
 * Opaque saddle evaluation context handle.
 */
typedef struct SqpartSaddleContext SqpartSaddleContext;

/**
 * A solved saddle point.
 */
typedef struct SqpartSaddlePoint {
  double x;
  double rho;
  /**
   * X = 1 / log(1/rho).
   */
  double scale;
  /**
   * Signed defect rho Phi'(rho) - x.
   */
  double residual;
} SqpartSaddlePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *sqpart_status_message(enum SqpartStatus status);

/**
 * Sieves the members of S up to `limit`. `cap` = 0 uses the default cap.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SqpartStatus sqpart_membership_sieve(uint64_t limit,
                                          uint64_t cap,
                                          struct SqpartMembership **out);

/**
 * Frees a membership handle. NULL is a no-op.
 *
 * # Safety
 * `handle` must be NULL or a pointer returned by this library and not
 * yet freed.
 */
void sqpart_membership_free(struct SqpartMembership *handle);

/**
 * Writes the table limit to `out`.
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_membership_limit(const struct SqpartMembership *handle, uint64_t *out);

/**
 * Writes whether `n` is a sum of two squares to `out` (requires
 * 1 <= n <= limit).
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_membership_contains(const struct SqpartMembership *handle,
                                             uint64_t n,
                                             bool *out);

/**
 * Writes S(x) = #{members <= x} to `out` (requires 1 <= x <= limit).
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_membership_count_up_to(const struct SqpartMembership *handle,
                                                uint64_t x,
                                                uint64_t *out);

/**
 * Membership by the even-multiplicity factorization criterion.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SqpartStatus sqpart_is_member_by_factorization(uint64_t n, bool *out);

/**
 * Landau-Ramanujan constant to `target_abs_error` in (0, 0.1].
 * Writes the value, its certified error bound, and the series terms used.
 *
 * # Safety
 * Out-pointers may be NULL to skip that field, except `out_value`.
 */
enum SqpartStatus sqpart_landau_constant(double target_abs_error,
                                         double *out_value,
                                         double *out_error_bound,
                                         uint64_t *out_terms);

/**
 * The reference curve K x / sqrt(log x) (requires x > e).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SqpartStatus sqpart_landau_reference(double x, double k, double *out);

/**
 * Exact counts of partitions into sums of two squares, for 0..=n_max.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SqpartStatus sqpart_partition_table_two_squares(uint64_t n_max,
                                                     uint64_t cap,
                                                     struct SqpartPartitionTable **out);

/**
 * Exact unrestricted partition counts for 0..=n_max.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SqpartStatus sqpart_partition_table_all(uint64_t n_max,
                                             uint64_t cap,
                                             struct SqpartPartitionTable **out);

/**
 * Exact counts for an explicit strictly increasing part list.
 *
 * # Safety
 * `parts` must point to `len` readable u64 values; `out` must be valid.
 */
enum SqpartStatus sqpart_partition_table_explicit(const uint64_t *parts,
                                                  uintptr_t len,
                                                  uint64_t n_max,
                                                  uint64_t cap,
                                                  struct SqpartPartitionTable **out);

/**
 * Frees a partition table handle. NULL is a no-op.
 *
 * # Safety
 * `handle` must be NULL or a pointer returned by this library and not
 * yet freed.
 */
void sqpart_partition_table_free(struct SqpartPartitionTable *handle);

/**
 * Writes the table's n_max to `out`.
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_partition_table_nmax(const struct SqpartPartitionTable *handle,
                                              uint64_t *out);

/**
 * The exact count at `n` as a decimal string (caller frees with
 * [`sqpart_string_free`]).
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_partition_count_decimal(const struct SqpartPartitionTable *handle,
                                                 uint64_t n,
                                                 char **out);

/**
 * Natural log of the exact count at `n` (-inf if the count is 0).
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_partition_count_log(const struct SqpartPartitionTable *handle,
                                             uint64_t n,
                                             double *out);

/**
 * `counts[n+1] - counts[n]` as a decimal string (possibly negative for
 * part sets without 1). Caller frees with [`sqpart_string_free`].
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_partition_difference_decimal(const struct SqpartPartitionTable *handle,
                                                      uint64_t n,
                                                      char **out);

/**
 * Frees a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void sqpart_string_free(char *s);

/**
 * Context sized for saddle solves with targets up to `x_max` (>= 10).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SqpartStatus sqpart_saddle_context_for_target(double x_max, struct SqpartSaddleContext **out);

/**
 * Context sized for direct phi evaluations at scales X up to `scale`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SqpartStatus sqpart_saddle_context_for_scale(double scale, struct SqpartSaddleContext **out);

/**
 * Frees a saddle context handle. NULL is a no-op.
 *
 * # Safety
 * `handle` must be NULL or a pointer returned by this library and not
 * yet freed.
 */
void sqpart_saddle_context_free(struct SqpartSaddleContext *handle);

/**
 * The Landau-Ramanujan constant held by the context.
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_saddle_context_landau_k(const struct SqpartSaddleContext *handle,
                                                 double *out);

/**
 * (rho d/drho)^m Phi(rho) with certified truncation tail (m <= 4).
 *
 * # Safety
 * `handle` must be a live handle; `out_value` must be valid;
 * `out_tail_bound` may be NULL.
 */
enum SqpartStatus sqpart_phi_log_derivative(const struct SqpartSaddleContext *handle,
                                            double rho,
                                            uint32_t m,
                                            double *out_value,
                                            double *out_tail_bound);

/**
 * Solves x = rho Phi'(rho) (x >= 10).
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_solve_saddle(const struct SqpartSaddleContext *handle,
                                      double x,
                                      struct SqpartSaddlePoint *out);

/**
 * log of the requested estimate of p_S(n) (n >= 100). `method` is a
 * `SqpartEstimateMethod` value. The saddle point used is written to
 * `out_point` when non-NULL.
 *
 * # Safety
 * `handle` must be a live handle; `out_log` must be valid; `out_point`
 * may be NULL.
 */
enum SqpartStatus sqpart_estimate_log(const struct SqpartSaddleContext *handle,
                                      uint64_t n,
                                      uint32_t method,
                                      double *out_log,
                                      struct SqpartSaddlePoint *out_point);

/**
 * Closed-form saddle asymptotes: which = 1 for x log(1/rho), 2 for
 * Phi(rho(x)) (m ignored for both), 3 for the m-th log-derivative
 * leading term (1 <= m <= 4).
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_saddle_asymptote(const struct SqpartSaddleContext *handle,
                                          double x,
                                          uint32_t which,
                                          uint32_t m,
                                          double *out);

/**
 * The reference curve K zeta(2) Gamma(m+1) X^{m+1} / sqrt(log X)
 * (X >= 10, m <= 4).
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid.
 */
enum SqpartStatus sqpart_log_derivative_reference(const struct SqpartSaddleContext *handle,
                                                  double scale,
                                                  uint32_t m,
                                                  double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SQPART_H */
