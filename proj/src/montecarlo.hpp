#ifndef BLOCKPROJ_MONTECARLO_HPP
#define BLOCKPROJ_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exactprob.hpp"
#include "jordan.hpp"

namespace blockproj {

struct TrialReport {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    ExactProb exact;       // always filled from the exact formula
    double z_score = 0.0;  // (estimate - exact) / binomial sigma
    double ci_lo = 0.0;    // Wilson score interval, 95%
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
    double elapsed_seconds = 0.0;
};

/// Monte-Carlo estimate of the projection success probability.  Trial i
/// draws fresh uniform U (b x n), V (n x b) from rng child i and succeeds
/// iff the recovered minimal generating polynomial of the 2n+2-term block
/// sequence equals the spec's minimal polynomial.  Deterministic in
/// (seed, trials) regardless of `threads`.
TrialReport estimate_pmp(const ElementaryDivisorSpec& spec, std::uint32_t b,
                         std::uint64_t trials, std::uint64_t seed,
                         std::uint32_t threads = 1);

/// Ground-truth oracle: iterates every (U, V) pair in lexicographic order
/// and returns the exact success fraction as a rational.  Guarded by
/// q^(2nb) <= pair_limit.  Degree-only entries are resolved from a fixed
/// seed so repeated calls see the same matrix.
ExactProb exhaustive_pmp(const ElementaryDivisorSpec& spec, std::uint32_t b,
                         std::uint64_t pair_limit = (1ull << 26),
                         std::uint32_t threads = 1);

/// Per-pair success predicate used by exhaustive_pmp, exposed so tests can
/// cross-check it against the Berlekamp-Massey recovery route.  `resolved`
/// must carry explicit polynomials (a build result qualifies).
bool projection_preserves_minpoly(const BlackBoxMatrix& a,
                                  const ElementaryDivisorSpec& resolved,
                                  const Matrix& u, const Matrix& v);

// One output row of a sweep; optional fields stay empty in the CSV.
struct SweepRow {
    std::string label;
    std::uint64_t q = 0;
    std::uint64_t n = 0;
    std::uint32_t b = 0;
    std::string exact; // decimal string (success prob, or failure prob for worst-case rows)
    std::optional<double> estimate;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> successes;
    std::optional<double> z;
    std::optional<double> ci_lo;
    std::optional<double> ci_hi;
    std::optional<std::uint64_t> seed;
};

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// One row per (spec, b): exact probability, plus simulation columns when
/// trials > 0.
std::vector<SweepRow> sweep_specs(
    const std::vector<std::pair<std::string, ElementaryDivisorSpec>>& specs,
    std::uint32_t b_min, std::uint32_t b_max, std::uint64_t trials,
    std::uint64_t seed, std::uint32_t threads = 1);

/// Worst-case failure probabilities 1 - pmpmin(n) over a (q, b) grid; the
/// exact column carries the failure probability (the plotted quantity).
std::vector<SweepRow> sweep_worst_failure(std::uint64_t n,
                                          const std::vector<std::uint64_t>& qs,
                                          std::uint32_t b_max);

/// The golden grid as CSV (exact column rendered at table precision).
std::string table1_csv();

} // namespace blockproj

#endif
