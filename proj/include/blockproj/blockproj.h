/* blockproj: exact and worst-case probabilities that random b x b block
 * projections preserve a matrix's minimal polynomial over a finite field,
 * plus Monte-Carlo and exhaustive validation of those formulas.
 *
 * C API over the C++ core.  All functions returning bp_status set a
 * thread-local message retrievable with bp_last_error() on failure.
 * Strings returned through char** are heap-allocated; release them with
 * bp_string_free().
 */
#ifndef BLOCKPROJ_H
#define BLOCKPROJ_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bp_status {
    BP_OK = 0,
    BP_ERR_INVALID_ARGUMENT = 1,
    BP_ERR_NOT_PRIME = 2,
    BP_ERR_DIVISION_BY_ZERO = 3,
    BP_ERR_PARSE = 4,
    BP_ERR_NOT_MONIC = 5,
    BP_ERR_NOT_IRREDUCIBLE = 6,
    BP_ERR_SEQUENCE_TOO_SHORT = 7,
    BP_ERR_DIMENSION_MISMATCH = 8,
    BP_ERR_INSUFFICIENT_IRREDUCIBLES = 9,
    BP_ERR_LIMIT_EXCEEDED = 10,
    BP_ERR_INTERNAL = 99
} bp_status;

const char* bp_version(void);
/* Message for the most recent failing call on this thread ("" if none). */
const char* bp_last_error(void);
void bp_string_free(char* s);

/* Elementary-divisor description of a matrix similarity class.  JSON form:
 *   {"q": 7, "blocks": [{"poly": "6,3,1", "exps": [1]},
 *                       {"poly": "4,1",  "exps": [1,1,1]}]}
 * "degree": d may replace "poly" (the irreducible is then drawn at build
 * time).  Polynomials accept ascending coefficient lists ("6,3,1") or
 * algebraic text ("x^2+3x+6").
 */
typedef struct bp_spec bp_spec;

bp_status bp_spec_parse_json(const char* json, bp_spec** out);
void bp_spec_free(bp_spec* spec);
bp_status bp_spec_dimension(const bp_spec* spec, uint64_t* n);
bp_status bp_spec_field_size(const bp_spec* spec, uint64_t* q);
/* Minimal polynomial as algebraic text; requires explicit polynomials. */
bp_status bp_spec_minpoly(const bp_spec* spec, char** text);

/* Exact probability that a uniform b x b projection preserves the minimal
 * polynomial.  `decimal` gets a fixed-point rendering with `digits`
 * decimals (digits = 0 selects the adaptive table precision); `rational`
 * (optional, may be NULL) gets the exact fraction "num/den". */
bp_status bp_pmp_exact(const bp_spec* spec, uint32_t b, uint32_t digits,
                       char** decimal, char** rational);

/* Worst case over all n x n matrices.  The per-degree reading is the
 * default; the flat reading applies the top-degree count to every factor
 * and exists for comparison. */
typedef enum bp_worst_reading {
    BP_READING_PER_DEGREE = 0,
    BP_READING_FLAT = 1
} bp_worst_reading;

bp_status bp_pmpmin_exact(uint64_t q, uint64_t n, uint32_t b,
                          bp_worst_reading reading, uint32_t digits,
                          char** decimal, char** rational);
/* Log-space evaluation for large n (up to 2e9): success and failure
 * probabilities with full double accuracy. */
bp_status bp_pmpmin_log(uint64_t q, uint64_t n, uint32_t b, double* pmpmin,
                        double* failure);
/* Harmonic-number approximation; regime: 0 none, 1 large field (q >= n),
 * 2 sqrt regime (n > q >= sqrt(n)).  `simple` is set for regimes 1 and 2. */
bp_status bp_pmpmin_approx(uint64_t q, uint64_t n, uint32_t b,
                           double* harmonic, int* regime, double* simple);
/* Worst-case degree profile as JSON:
 * {"q":..,"n":..,"m":..,"residual":..,"counts":[c_1,...,c_m]} */
bp_status bp_worst_profile_json(uint64_t q, uint64_t n, char** json);

/* Number of monic irreducibles of degree m over a size-q field (exact,
 * arbitrary precision, rendered as a decimal integer string). */
bp_status bp_count_irreducibles(uint64_t q, uint32_t m, char** count);
/* Newline-separated algebraic listing; requires prime p. */
bp_status bp_list_irreducibles(uint64_t p, uint32_t d, char** listing);
int bp_is_prime_power(uint64_t q);

/* Lower-bound comparison in the one-sided b = 1 setting. */
bp_status bp_comparison_bounds(uint64_t q, uint64_t n, double* wiedemann,
                               double* kaltofen_pan, double* ours);

typedef struct bp_trial_report {
    uint64_t trials;
    uint64_t successes;
    double estimate;
    double exact;
    double z;
    double ci_lo;
    double ci_hi;
    uint64_t seed;
    double elapsed_seconds;
} bp_trial_report;

/* Monte-Carlo estimate; deterministic in (seed, trials) for any thread
 * count. */
bp_status bp_simulate(const bp_spec* spec, uint32_t b, uint64_t trials,
                      uint64_t seed, uint32_t threads, bp_trial_report* out);

/* Exhaustive enumeration of all (U, V) pairs (guarded by pair_limit on
 * q^(2nb)); exact success fraction. */
bp_status bp_exhaustive_pmp(const bp_spec* spec, uint32_t b,
                            uint64_t pair_limit, uint32_t threads,
                            uint32_t digits, char** decimal, char** rational);

/* CSV emission.  Columns:
 * case,q,n,b,exact,estimate,trials,successes,z,ci_lo,ci_hi,seed */
const char* bp_sweep_csv_header(void);
bp_status bp_simulate_csv_row(const bp_spec* spec, const char* label,
                              uint32_t b, const bp_trial_report* report,
                              char** row);
/* The golden 5 x 4 example grid (adaptive precision, exact column only). */
bp_status bp_table1_csv(char** csv);
/* Worst-case failure probabilities over a (q, b) grid at dimension n; the
 * exact column carries 1 - pmpmin. */
bp_status bp_figure1_csv(uint64_t n, const char* qs_comma_separated,
                         uint32_t b_max, char** csv);

#ifdef __cplusplus
}
#endif

#endif /* BLOCKPROJ_H */
