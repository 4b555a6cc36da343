/* Demo of the sqpart C API.
 *
 * Build (from the workspace root, after `cargo build -p sqpart-ffi`):
 *   cc crates/ffi/examples/demo.c -Icrates/ffi/include \
 *      -Ltarget/debug -lsqpart_ffi -lm -o demo
 *   LD_LIBRARY_PATH=target/debug ./demo
 */
#include <stdio.h>
#include <stdlib.h>

#include "sqpart.h"

static void check(SqpartStatus status, const char *what) {
    if (status != SqpartStatus_Ok) {
        fprintf(stderr, "%s failed: %s\n", what, sqpart_status_message(status));
        exit(1);
    }
}

int main(void) {
    /* Landau-Ramanujan constant. */
    double k = 0.0, bound = 0.0;
    uint64_t terms = 0;
    check(sqpart_landau_constant(1e-9, &k, &bound, &terms), "landau constant");
    printf("K = %.9f (+- %.2e, %llu series terms)\n", k, bound,
           (unsigned long long)terms);

    /* Sieve and count. */
    SqpartMembership *sieve = NULL;
    check(sqpart_membership_sieve(1000000, 0, &sieve), "sieve");
    uint64_t count = 0;
    check(sqpart_membership_count_up_to(sieve, 1000000, &count), "count");
    printf("S(10^6) = %llu\n", (unsigned long long)count);
    sqpart_membership_free(sieve);

    /* Exact partition counts. */
    SqpartPartitionTable *table = NULL;
    check(sqpart_partition_table_two_squares(1000, 0, &table), "table");
    char *decimal = NULL;
    check(sqpart_partition_count_decimal(table, 1000, &decimal), "count decimal");
    printf("p_S(1000) = %s\n", decimal);
    sqpart_string_free(decimal);
    double exact_log = 0.0;
    check(sqpart_partition_count_log(table, 1000, &exact_log), "count log");
    sqpart_partition_table_free(table);

    /* Saddle-point estimate. */
    SqpartSaddleContext *ctx = NULL;
    check(sqpart_saddle_context_for_target(1000.0, &ctx), "context");
    SqpartSaddlePoint point;
    double estimate_log = 0.0;
    check(sqpart_estimate_log(ctx, 1000, SqpartEstimateMethod_Main,
                              &estimate_log, &point),
          "estimate");
    printf("log p_S(1000): exact %.6f, estimate %.6f (rho = %.9f, X = %.3f)\n",
           exact_log, estimate_log, point.rho, point.scale);
    sqpart_saddle_context_free(ctx);
    return 0;
}
