#ifndef BLOCKPROJ_EXACTPROB_HPP
#define BLOCKPROJ_EXACTPROB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "intmath.hpp"
#include "jordan.hpp"

namespace blockproj {

/// Exact probability: arbitrary-precision rational in [0, 1].
using ExactProb = mpq_class;

/// Fixed-point decimal rendering with round-half-even ties.
std::string decimal_string(const mpq_class& v, unsigned digits);

/// Rendering that widens just enough to see past a leading run of 9s:
/// max(3, run + 1) decimals.  Matches the precision conventions of the
/// reference tables this library reproduces.
std::string adaptive_decimal(const mpq_class& v);

/// log10 of a positive rational, to double precision.
double log10_rational(const mpq_class& v);

// Rank-one update step probabilities over a field of size Q in dimension b
// (Q is an extension size q^d in every use here).
struct Dun {
    mpq_class down; // rank r -> r-1
    mpq_class up;   // rank r -> r+1
    mpq_class none; // rank unchanged
};

Dun dun(const mpz_class& Q, std::uint32_t b, std::uint32_t r);
Dun dun(std::uint64_t Q, std::uint32_t b, std::uint32_t r);

// Distribution of the rank of a sum of t uniform rank-one outer products
// over a field of size Q in dimension b.
struct RankDistribution {
    mpz_class Q;
    std::uint32_t b = 0;
    std::uint32_t t = 0;
    std::vector<mpq_class> probs; // index r = 0 .. min(t, b)

    const mpq_class& at(std::uint32_t r) const;
};

RankDistribution rank_distribution(const mpz_class& Q, std::uint32_t b, std::uint32_t t);
RankDistribution rank_distribution(std::uint64_t Q, std::uint32_t b, std::uint32_t t);

/// Probability that a uniform b x b projection preserves the minimal
/// polynomial of a matrix with the given elementary divisors:
/// prod_i (1 - RankDist(q^{d_i}, b, s_i)(0)) with s_i the multiplicity of
/// the top exponent of irreducible i.
ExactProb pmp_exact(const ElementaryDivisorSpec& spec, std::uint32_t b);

/// Single Jordan block J_{f^e}, deg f = d: (1 - 1/q^(db))^2, independent
/// of e.
ExactProb pmp_single_block(std::uint64_t q, std::uint32_t d, std::uint32_t e,
                           std::uint32_t b);

// Degree profile of the worst-case (minimum-probability) n x n matrix:
// all irreducibles of degree < m, then as many of degree m as fit.
struct WorstCaseProfile {
    std::uint64_t q = 0;
    std::uint64_t n = 0;
    std::uint32_t m = 0;              // cutoff degree (counts[m-1] > 0)
    std::vector<std::uint64_t> counts; // counts[d-1] = c_d for d = 1..m
    std::uint64_t residual = 0;        // r = n - sum_{d<m} d L_q(d)
};

WorstCaseProfile worst_profile(std::uint64_t q, std::uint64_t n);

// The worst-case product can be read with a per-degree exponent 2 c_d
// (the reading consistent with the q >= n specialization and with the
// extremal examples) or with the flat exponent 2 c_m on every factor.
// PerDegree is the default everywhere; Flat exists for side-by-side
// comparison.
enum class WorstReading { per_degree, flat };

/// Exact worst case: prod_{d=1}^m (1 - 1/q^(db))^(2 c_d).
/// Throws limit_exceeded above `exact_limit` (use pmpmin_log there).
ExactProb pmpmin_exact(std::uint64_t q, std::uint64_t n, std::uint32_t b,
                       WorstReading reading = WorstReading::per_degree,
                       std::uint64_t exact_limit = 10000);

struct LogProb {
    double pmpmin = 0.0;
    double failure = 0.0; // 1 - pmpmin, computed in extended precision
};

/// Log-space evaluation of the worst-case product for n up to 1e9.
/// Computed with 256-bit floats: each factor contributes < 1 ulp of error
/// and there are at most m*b of them, leaving far more than 10 correct
/// significant digits in the failure probability.
LogProb pmpmin_log(std::uint64_t q, std::uint64_t n, std::uint32_t b,
                   WorstReading reading = WorstReading::per_degree);

struct ApproxProb {
    double harmonic = 0.0;             // e^(-2 H_m / q^b)
    std::optional<double> simple;      // regime formula when applicable
    enum class Regime { none, large_field, sqrt_field } regime = Regime::none;
};

/// Closed-form approximations: the harmonic-number bound, plus the
/// simplified large-field regimes (q >= n, and n > q >= sqrt(n)).
ApproxProb pmpmin_approx(std::uint64_t q, std::uint64_t n, std::uint32_t b);

struct ComparisonBounds {
    double wiedemann = 0.0;    // 1 / (6 log_q n)
    double kaltofen_pan = 0.0; // max(0, 1 - n/q)
    double ours = 0.0;         // one-sided worst case at b = 1
};

/// Three-way bound comparison in the one-sided, b = 1 setting.
ComparisonBounds comparison_bounds(std::uint64_t q, std::uint64_t n);

/// The five 5 x 5 reference matrices over F_7 used by the golden table.
std::vector<std::pair<std::string, ElementaryDivisorSpec>> example_specs();

struct Table1Cell {
    std::string label;
    std::uint32_t b = 0;
    ExactProb exact;
    std::string rendered; // adaptive precision
};

/// The golden 5 x 4 grid: exact projection probabilities of the example
/// matrices for b = 1..4.
std::vector<Table1Cell> table1();

} // namespace blockproj

#endif
