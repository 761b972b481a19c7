#include "exactprob.hpp"

#include <algorithm>
#include <cmath>

#include <mpfr.h>

namespace blockproj {

std::string decimal_string(const mpq_class& v, unsigned digits) {
    if (sgn(v) < 0)
        fail(ErrorCode::invalid_argument, "decimal rendering expects v >= 0");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    mpz_class num = v.get_num() * scale;
    mpz_class quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
                v.get_den().get_mpz_t());
    const mpz_class two_rem = 2 * rem;
    const int c = cmp(two_rem, v.get_den());
    if (c > 0 || (c == 0 && mpz_odd_p(quot.get_mpz_t())))
        ++quot;
    std::string s = quot.get_str();
    if (s.size() <= digits)
        s.insert(0, digits + 1 - s.size(), '0');
    if (digits > 0)
        s.insert(s.size() - digits, ".");
    return s;
}

namespace {

/// Digits of the fractional part that equal 9, scanning left to right.
unsigned leading_nines(const mpq_class& v) {
    if (v >= 1 || v < 0) return 0;
    mpz_class num = v.get_num();
    const mpz_class& den = v.get_den();
    unsigned run = 0;
    while (run < 64) {
        num *= 10;
        mpz_class digit = num / den;
        if (digit != 9) break;
        num -= digit * den;
        ++run;
    }
    return run;
}

} // namespace

std::string adaptive_decimal(const mpq_class& v) {
    const unsigned digits = std::max(3u, leading_nines(v) + 1);
    return decimal_string(v, digits);
}

double log10_rational(const mpq_class& v) {
    if (sgn(v) <= 0)
        fail(ErrorCode::invalid_argument, "log10 of a non-positive rational");
    mpfr_t x;
    mpfr_init2(x, 128);
    mpfr_set_q(x, v.get_mpq_t(), MPFR_RNDN);
    mpfr_log10(x, x, MPFR_RNDN);
    const double out = mpfr_get_d(x, MPFR_RNDN);
    mpfr_clear(x);
    return out;
}

namespace {

mpz_class zpow(const mpz_class& base, std::uint64_t e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return out;
}

} // namespace

Dun dun(const mpz_class& Q, std::uint32_t b, std::uint32_t r) {
    if (Q < 2)
        fail(ErrorCode::invalid_argument, "field size must be >= 2");
    if (r > b)
        fail(ErrorCode::invalid_argument, "rank may not exceed the dimension");
    const mpz_class q2b = zpow(Q, 2ull * b);
    Dun out;
    if (r == 0) {
        out.down = 0;
    } else {
        out.down = mpq_class(zpow(Q, r - 1) * (zpow(Q, r) - 1), q2b);
        out.down.canonicalize();
    }
    if (r == b) {
        out.up = 0;
    } else {
        mpz_class diff = zpow(Q, b - r) - 1;
        out.up = mpq_class(diff * diff, zpow(Q, 2ull * (b - r)));
        out.up.canonicalize();
    }
    out.none = 1 - out.down - out.up;
    if (sgn(out.none) < 0)
        fail(ErrorCode::invalid_argument, "rank-step probabilities out of range");
    return out;
}

Dun dun(std::uint64_t Q, std::uint32_t b, std::uint32_t r) {
    return dun(mpz_class(static_cast<unsigned long>(Q)), b, r);
}

const mpq_class& RankDistribution::at(std::uint32_t r) const {
    static const mpq_class zero(0);
    return r < probs.size() ? probs[r] : zero;
}

RankDistribution rank_distribution(const mpz_class& Q, std::uint32_t b, std::uint32_t t) {
    if (b < 1)
        fail(ErrorCode::invalid_argument, "dimension must be >= 1");
    RankDistribution dist;
    dist.Q = Q;
    dist.b = b;
    dist.t = t;
    const std::uint32_t rmax = std::min(t, b);
    // Step probabilities are rank-dependent but t-independent; compute once.
    std::vector<Dun> step(b + 1);
    for (std::uint32_t r = 0; r <= b; ++r)
        step[r] = dun(Q, b, r);
    std::vector<mpq_class> cur(rmax + 2, mpq_class(0)); // one slot of slack
    cur[0] = 1;
    for (std::uint32_t k = 1; k <= t; ++k) {
        std::vector<mpq_class> next(cur.size(), mpq_class(0));
        const std::uint32_t hi = std::min(k, b);
        for (std::uint32_t r = 0; r <= hi && r <= rmax; ++r) {
            mpq_class acc(0);
            if (r >= 1)
                acc += cur[r - 1] * step[r - 1].up;
            acc += cur[r] * step[r].none;
            if (r + 1 <= b && r + 1 < cur.size())
                acc += cur[r + 1] * step[r + 1].down;
            next[r] = acc;
        }
        cur.swap(next);
    }
    dist.probs.assign(cur.begin(), cur.begin() + rmax + 1);
    mpq_class mass(0);
    for (const auto& p : dist.probs) mass += p;
    if (mass != 1)
        fail(ErrorCode::invalid_argument, "rank distribution mass != 1 (internal)");
    return dist;
}

RankDistribution rank_distribution(std::uint64_t Q, std::uint32_t b, std::uint32_t t) {
    return rank_distribution(mpz_class(static_cast<unsigned long>(Q)), b, t);
}

ExactProb pmp_exact(const ElementaryDivisorSpec& spec, std::uint32_t b) {
    spec.validate();
    if (b < 1)
        fail(ErrorCode::invalid_argument, "block size must be >= 1");
    mpq_class out(1);
    const mpz_class q(std::to_string(spec.q));
    for (const auto& entry : spec.entries) {
        const mpz_class ext = zpow(q, entry.degree);
        RankDistribution dist = rank_distribution(ext, b, entry.top_multiplicity());
        out *= 1 - dist.at(0);
    }
    return out;
}

ExactProb pmp_single_block(std::uint64_t q, std::uint32_t d, std::uint32_t e,
                           std::uint32_t b) {
    if (q < 2 || d < 1 || e < 1 || b < 1)
        fail(ErrorCode::invalid_argument, "pmp_single_block needs q >= 2 and d, e, b >= 1");
    (void)e; // the probability does not depend on the exponent
    const mpz_class qdb = zpow(mpz_class(std::to_string(q)), std::uint64_t{d} * b);
    mpq_class factor(qdb - 1, qdb);
    factor.canonicalize();
    return factor * factor;
}

WorstCaseProfile worst_profile(std::uint64_t q, std::uint64_t n) {
    if (q < 2 || n < 1)
        fail(ErrorCode::invalid_argument, "worst_profile needs q >= 2, n >= 1");
    WorstCaseProfile profile;
    profile.q = q;
    profile.n = n;

    // Find the cutoff m: all irreducibles of degree < m fit inside n,
    // degree m no longer does in full.
    std::uint32_t m = 1;
    mpz_class sum_below = 0; // sum_{d < m} d L_q(d)
    std::vector<mpz_class> counts_full;
    for (;;) {
        mpz_class L = count_irreducibles(q, m);
        if (sum_below + m * L > n) {
            // c_m = min(L, floor(r / m)); if that is zero the top degree
            // contributes nothing and the profile ends one degree earlier.
            mpz_class r = n - sum_below;
            mpz_class cm = r / m;
            if (cm > L) cm = L;
            if (cm == 0 && m > 1) {
                --m;
                counts_full.pop_back();
                sum_below -= m * count_irreducibles(q, m);
                r = n - sum_below;
                cm = r / m;
                mpz_class L_prev = count_irreducibles(q, m);
                if (cm > L_prev) cm = L_prev;
            }
            profile.m = m;
            profile.residual = static_cast<std::uint64_t>(mpz_get_ui(r.get_mpz_t()));
            for (const auto& c : counts_full)
                profile.counts.push_back(mpz_get_ui(c.get_mpz_t()));
            profile.counts.push_back(mpz_get_ui(cm.get_mpz_t()));
            return profile;
        }
        counts_full.push_back(L);
        sum_below += m * L;
        ++m;
    }
}

namespace {

std::vector<std::uint64_t> reading_exponents(const WorstCaseProfile& profile,
                                             WorstReading reading) {
    std::vector<std::uint64_t> c = profile.counts;
    if (reading == WorstReading::flat) {
        const std::uint64_t top = c.back();
        std::fill(c.begin(), c.end(), top);
    }
    return c;
}

} // namespace

ExactProb pmpmin_exact(std::uint64_t q, std::uint64_t n, std::uint32_t b,
                       WorstReading reading, std::uint64_t exact_limit) {
    if (b < 1)
        fail(ErrorCode::invalid_argument, "block size must be >= 1");
    if (n > exact_limit)
        fail(ErrorCode::limit_exceeded,
             "n exceeds the exact-mode limit; use the log-space evaluation");
    const WorstCaseProfile profile = worst_profile(q, n);
    const std::vector<std::uint64_t> counts = reading_exponents(profile, reading);
    const mpz_class qz(std::to_string(q));
    mpq_class out(1);
    for (std::uint32_t d = 1; d <= profile.m; ++d) {
        const std::uint64_t c = counts[d - 1];
        if (c == 0) continue;
        const mpz_class qdb = zpow(qz, std::uint64_t{d} * b);
        mpq_class factor(qdb - 1, qdb);
        factor.canonicalize();
        mpq_class powed;
        mpz_pow_ui(powed.get_num_mpz_t(), factor.get_num_mpz_t(),
                   static_cast<unsigned long>(2 * c));
        mpz_pow_ui(powed.get_den_mpz_t(), factor.get_den_mpz_t(),
                   static_cast<unsigned long>(2 * c));
        out *= powed;
    }
    return out;
}

LogProb pmpmin_log(std::uint64_t q, std::uint64_t n, std::uint32_t b,
                   WorstReading reading) {
    if (b < 1)
        fail(ErrorCode::invalid_argument, "block size must be >= 1");
    if (n > 2000000000ull)
        fail(ErrorCode::limit_exceeded, "log-space evaluation supports n <= 2e9");
    const WorstCaseProfile profile = worst_profile(q, n);
    const std::vector<std::uint64_t> counts = reading_exponents(profile, reading);

    mpfr_t sum, term, qdb;
    mpfr_init2(sum, 256);
    mpfr_init2(term, 256);
    mpfr_init2(qdb, 256);
    mpfr_set_zero(sum, 1);
    for (std::uint32_t d = 1; d <= profile.m; ++d) {
        const std::uint64_t c = counts[d - 1];
        if (c == 0) continue;
        mpfr_ui_pow_ui(qdb, static_cast<unsigned long>(q),
                       static_cast<unsigned long>(std::uint64_t{d} * b), MPFR_RNDN);
        mpfr_ui_div(term, 1, qdb, MPFR_RNDN);
        mpfr_neg(term, term, MPFR_RNDN);
        mpfr_log1p(term, term, MPFR_RNDN); // log(1 - q^{-db})
        mpfr_mul_ui(term, term, static_cast<unsigned long>(2 * c), MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
    }
    LogProb out;
    mpfr_t val;
    mpfr_init2(val, 256);
    mpfr_exp(val, sum, MPFR_RNDN);
    out.pmpmin = mpfr_get_d(val, MPFR_RNDN);
    mpfr_expm1(val, sum, MPFR_RNDN);
    mpfr_neg(val, val, MPFR_RNDN); // 1 - e^sum
    out.failure = mpfr_get_d(val, MPFR_RNDN);
    mpfr_clears(sum, term, qdb, val, static_cast<mpfr_ptr>(nullptr));
    return out;
}

ApproxProb pmpmin_approx(std::uint64_t q, std::uint64_t n, std::uint32_t b) {
    if (b < 1)
        fail(ErrorCode::invalid_argument, "block size must be >= 1");
    const WorstCaseProfile profile = worst_profile(q, n);
    ApproxProb out;
    double harmonic = 0.0;
    for (std::uint32_t k = 1; k <= profile.m; ++k)
        harmonic += 1.0 / k;
    const double qb = std::pow(static_cast<double>(q), static_cast<double>(b));
    out.harmonic = std::exp(-2.0 * harmonic / qb);
    const double nd = static_cast<double>(n);
    const double qd = static_cast<double>(q);
    if (qd >= nd) {
        out.regime = ApproxProb::Regime::large_field;
        out.simple = std::exp(-2.0 * nd / qb);
    } else if (qd * qd >= nd) {
        out.regime = ApproxProb::Regime::sqrt_field;
        const double qb1 = std::pow(qd, static_cast<double>(b) - 1.0);
        out.simple = std::exp(-(2.0 / qb1 + (nd - qd) / (qb * qb)));
    }
    return out;
}

ComparisonBounds comparison_bounds(std::uint64_t q, std::uint64_t n) {
    if (q < 2 || n < 2)
        fail(ErrorCode::invalid_argument, "comparison_bounds needs q >= 2, n >= 2");
    ComparisonBounds out;
    out.wiedemann = std::log(static_cast<double>(q)) / (6.0 * std::log(static_cast<double>(n)));
    out.kaltofen_pan = std::max(0.0, 1.0 - static_cast<double>(n) / static_cast<double>(q));

    // One-sided analog of the worst case at b = 1: each factor appears once.
    const WorstCaseProfile profile = worst_profile(q, n);
    mpfr_t sum, term, qd;
    mpfr_init2(sum, 256);
    mpfr_init2(term, 256);
    mpfr_init2(qd, 256);
    mpfr_set_zero(sum, 1);
    for (std::uint32_t d = 1; d <= profile.m; ++d) {
        const std::uint64_t c = profile.counts[d - 1];
        if (c == 0) continue;
        mpfr_ui_pow_ui(qd, static_cast<unsigned long>(q),
                       static_cast<unsigned long>(d), MPFR_RNDN);
        mpfr_ui_div(term, 1, qd, MPFR_RNDN);
        mpfr_neg(term, term, MPFR_RNDN);
        mpfr_log1p(term, term, MPFR_RNDN);
        mpfr_mul_ui(term, term, static_cast<unsigned long>(c), MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
    }
    mpfr_exp(sum, sum, MPFR_RNDN);
    out.ours = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(sum, term, qd, static_cast<mpfr_ptr>(nullptr));
    return out;
}

std::vector<std::pair<std::string, ElementaryDivisorSpec>> example_specs() {
    PrimeField f7(7);
    const Poly f(f7, {6, 3, 1}); // x^2+3x+6
    const Poly g(f7, {4, 1});    // x+4

    const auto entry = [](const Poly& p, std::vector<std::uint32_t> exps) {
        DivisorEntry e;
        e.poly = p;
        e.degree = static_cast<std::uint32_t>(p.degree());
        e.exps = std::move(exps);
        return e;
    };

    std::vector<std::pair<std::string, ElementaryDivisorSpec>> out;
    ElementaryDivisorSpec a1{7, {entry(f, {1}), entry(g, {1, 1, 1})}};
    ElementaryDivisorSpec a2{7, {entry(f, {2}), entry(g, {1})}};
    ElementaryDivisorSpec a3{7, {entry(f, {1, 1}), entry(g, {1})}};
    ElementaryDivisorSpec a4{7, {entry(f, {1}), entry(g, {2, 1})}};
    ElementaryDivisorSpec a5{7, {}};
    for (Fel c : {2, 3, 4, 5, 6})
        a5.entries.push_back(entry(Poly(f7, {c, 1}), {1}));
    out.emplace_back("A1", std::move(a1));
    out.emplace_back("A2", std::move(a2));
    out.emplace_back("A3", std::move(a3));
    out.emplace_back("A4", std::move(a4));
    out.emplace_back("A5", std::move(a5));
    return out;
}

std::vector<Table1Cell> table1() {
    std::vector<Table1Cell> cells;
    for (const auto& [label, spec] : example_specs()) {
        for (std::uint32_t b = 1; b <= 4; ++b) {
            Table1Cell cell;
            cell.label = label;
            cell.b = b;
            cell.exact = pmp_exact(spec, b);
            cell.rendered = adaptive_decimal(cell.exact);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

} // namespace blockproj
