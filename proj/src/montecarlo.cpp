#include "montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace blockproj {

namespace {

struct WilsonInterval {
    double lo;
    double hi;
};

// Wilson score interval: stays inside [0,1] and behaves near the endpoints,
// where the simulated probabilities actually live.
WilsonInterval wilson95(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

} // namespace

TrialReport estimate_pmp(const ElementaryDivisorSpec& spec, std::uint32_t b,
                         std::uint64_t trials, std::uint64_t seed,
                         std::uint32_t threads) {
    if (trials < 1)
        fail(ErrorCode::invalid_argument, "need at least one trial");
    if (b < 1)
        fail(ErrorCode::invalid_argument, "block size must be >= 1");
    if (threads < 1) threads = 1;
    const auto t0 = std::chrono::steady_clock::now();

    // The master stream resolves degree-only entries; trial i always uses
    // child stream i, so the result is independent of the worker count.
    Rng master(seed);
    BuildResult built = build(spec, master);
    const BlackBoxMatrix& a = built.matrix;
    const Poly target = spec_minpoly(built.resolved);
    const std::size_t n = a.dim();
    const std::size_t seq_len = 2 * n + 2;
    const PrimeField field = a.field();

    const std::uint32_t workers =
        static_cast<std::uint32_t>(std::min<std::uint64_t>(threads, trials));
    std::vector<std::uint64_t> counts(workers, 0);
    auto run = [&](std::uint32_t w) {
        std::uint64_t local = 0;
        for (std::uint64_t t = w; t < trials; t += workers) {
            Rng rng = master.child(t);
            Matrix u = random_matrix(rng, field, b, n);
            Matrix v = random_matrix(rng, field, n, b);
            BlockSequence seq = project_sequence(a, u, v, seq_len);
            if (minpoly_block_sequence(seq, field) == target)
                ++local;
        }
        counts[w] = local;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint32_t w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
        for (auto& th : pool)
            th.join();
    }
    std::uint64_t successes = 0;
    for (std::uint64_t c : counts) successes += c;

    TrialReport report;
    report.trials = trials;
    report.successes = successes;
    report.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    report.exact = pmp_exact(built.resolved, b);
    const double p = report.exact.get_d();
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    report.z_score = sigma > 0 ? (report.estimate - p) / sigma : 0.0;
    const WilsonInterval ci = wilson95(successes, trials);
    report.ci_lo = ci.lo;
    report.ci_hi = ci.hi;
    report.seed = seed;
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

namespace {

// Per-pair machinery for the exhaustive oracle.
//
// minpoly(U A^k V) always divides g = minpoly(A); it falls short of g
// exactly when some maximal divisor g/f_i already annihilates the
// projected sequence.  (g/f_i)(U A^k V) = U (g/f_i)(A) A^k V, and that
// sequence is linearly generated of order <= deg g, so vanishing of its
// first deg g terms makes it vanish identically.  Hence per V we form
//   M_i = (g/f_i)(A) * [V | AV | ... | A^(deg g - 1) V]
// and a pair succeeds iff U M_i != 0 for every i.  This is the
// definitional minimality test, just batched; the Berlekamp-Massey route
// must agree pairwise (covered by tests).
struct AnnihilatorOracle {
    const BlackBoxMatrix& a;
    PrimeField field;
    std::size_t n;
    std::size_t b;
    std::size_t order;            // deg g
    std::vector<Poly> cofactors;  // g / f_i

    AnnihilatorOracle(const BlackBoxMatrix& matrix,
                      const ElementaryDivisorSpec& resolved, std::size_t block)
        : a(matrix), field(matrix.field()), n(matrix.dim()), b(block) {
        const Poly g = spec_minpoly(resolved);
        order = static_cast<std::size_t>(g.degree());
        for (const auto& entry : resolved.entries)
            cofactors.push_back(g.divmod(*entry.poly).first);
    }

    // h(A) w by Horner, black-box applies only.
    std::vector<Fel> eval_poly_apply(const Poly& h, const std::vector<Fel>& w) const {
        std::vector<Fel> acc(n, 0), tmp(n, 0);
        for (int k = h.degree(); k >= 0; --k) {
            if (k != h.degree()) {
                a.apply(acc, tmp);
                acc.swap(tmp);
            }
            const Fel c = h.coeff(static_cast<std::size_t>(k));
            if (c != 0)
                for (std::size_t i = 0; i < n; ++i)
                    acc[i] = field.add(acc[i], field.mul(c, w[i]));
        }
        return acc;
    }

    // Column blocks M_i for a fixed V; M[i] holds b*order columns of length n.
    std::vector<std::vector<std::vector<Fel>>> prepare(const Matrix& v) const {
        std::vector<std::vector<Fel>> krylov;
        krylov.reserve(order * b);
        Matrix x = v;
        for (std::size_t k = 0; k < order; ++k) {
            for (std::size_t j = 0; j < b; ++j) {
                std::vector<Fel> col(n);
                for (std::size_t i = 0; i < n; ++i)
                    col[i] = x.at(i, j);
                krylov.push_back(std::move(col));
            }
            if (k + 1 < order)
                a.apply_to_matrix(x);
        }
        std::vector<std::vector<std::vector<Fel>>> m(cofactors.size());
        for (std::size_t i = 0; i < cofactors.size(); ++i) {
            m[i].reserve(krylov.size());
            for (const auto& col : krylov)
                m[i].push_back(eval_poly_apply(cofactors[i], col));
        }
        return m;
    }

    // Success for U against prepared blocks: every U M_i nonzero.
    bool test_u(const std::vector<std::vector<std::vector<Fel>>>& m,
                const std::vector<Fel>& u_rowmajor) const {
        const std::uint64_t p = field.p();
        // For small p the dot product cannot overflow 64 bits unreduced.
        const bool small = p <= (1u << 16);
        for (const auto& cols : m) {
            bool nonzero = false;
            for (const auto& col : cols) {
                for (std::size_t r = 0; r < b && !nonzero; ++r) {
                    std::uint64_t acc = 0;
                    const Fel* urow = u_rowmajor.data() + r * n;
                    if (small) {
                        for (std::size_t k = 0; k < n; ++k)
                            acc += std::uint64_t{urow[k]} * col[k];
                    } else {
                        for (std::size_t k = 0; k < n; ++k)
                            acc = (acc + std::uint64_t{urow[k]} * col[k]) % p;
                    }
                    if (acc % p != 0)
                        nonzero = true;
                }
                if (nonzero) break;
            }
            if (!nonzero)
                return false;
        }
        return true;
    }
};

void decode_base_q(std::uint64_t index, std::uint64_t q, std::vector<Fel>& digits) {
    for (auto& d : digits) {
        d = static_cast<Fel>(index % q);
        index /= q;
    }
}

} // namespace

bool projection_preserves_minpoly(const BlackBoxMatrix& a,
                                  const ElementaryDivisorSpec& resolved,
                                  const Matrix& u, const Matrix& v) {
    AnnihilatorOracle oracle(a, resolved, u.rows);
    auto m = oracle.prepare(v);
    return oracle.test_u(m, u.a);
}

ExactProb exhaustive_pmp(const ElementaryDivisorSpec& spec, std::uint32_t b,
                         std::uint64_t pair_limit, std::uint32_t threads) {
    if (b < 1)
        fail(ErrorCode::invalid_argument, "block size must be >= 1");
    if (threads < 1) threads = 1;
    Rng fixed(0); // deterministic resolution of degree-only entries
    BuildResult built = build(spec, fixed);
    const BlackBoxMatrix& a = built.matrix;
    const std::size_t n = a.dim();
    const std::uint64_t q = spec.q;

    // q^(2nb) pairs, with overflow-safe limit checking.
    long double total_ld = 1.0L;
    for (std::size_t i = 0; i < 2 * n * b; ++i) total_ld *= static_cast<long double>(q);
    if (total_ld > static_cast<long double>(pair_limit))
        fail(ErrorCode::limit_exceeded,
             "q^(2nb) exceeds the exhaustive enumeration limit");
    std::uint64_t side = 1; // q^(nb), the number of U (and of V)
    for (std::size_t i = 0; i < n * b; ++i) side *= q;

    AnnihilatorOracle oracle(a, built.resolved, b);
    const std::uint32_t workers =
        static_cast<std::uint32_t>(std::min<std::uint64_t>(threads, side));
    std::vector<std::uint64_t> counts(workers, 0);
    auto run = [&](std::uint32_t w) {
        std::uint64_t local = 0;
        Matrix v(a.field(), n, b);
        std::vector<Fel> u(static_cast<std::size_t>(b) * n, 0);
        for (std::uint64_t vi = w; vi < side; vi += workers) {
            decode_base_q(vi, q, v.a);
            auto m = oracle.prepare(v);
            for (std::uint64_t ui = 0; ui < side; ++ui) {
                decode_base_q(ui, q, u);
                if (oracle.test_u(m, u))
                    ++local;
            }
        }
        counts[w] = local;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint32_t w = 0; w < workers; ++w)
            pool.emplace_back(run, w);
        for (auto& th : pool)
            th.join();
    }
    std::uint64_t successes = 0;
    for (std::uint64_t c : counts) successes += c;

    mpq_class out(mpz_class(static_cast<unsigned long>(successes)),
                  mpz_class(static_cast<unsigned long>(side)) *
                      mpz_class(static_cast<unsigned long>(side)));
    out.canonicalize();
    return out;
}

std::string sweep_csv_header() {
    return "case,q,n,b,exact,estimate,trials,successes,z,ci_lo,ci_hi,seed";
}

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

std::string sweep_csv_row(const SweepRow& row) {
    std::ostringstream os;
    os << row.label << ',' << row.q << ',' << row.n << ',' << row.b << ','
       << row.exact << ',';
    if (row.estimate) os << fmt_double(*row.estimate);
    os << ',';
    if (row.trials) os << *row.trials;
    os << ',';
    if (row.successes) os << *row.successes;
    os << ',';
    if (row.z) os << fmt_double(*row.z);
    os << ',';
    if (row.ci_lo) os << fmt_double(*row.ci_lo);
    os << ',';
    if (row.ci_hi) os << fmt_double(*row.ci_hi);
    os << ',';
    if (row.seed) os << *row.seed;
    return os.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << sweep_csv_header() << '\n';
    for (const auto& row : rows)
        os << sweep_csv_row(row) << '\n';
    return os.str();
}

std::vector<SweepRow> sweep_specs(
    const std::vector<std::pair<std::string, ElementaryDivisorSpec>>& specs,
    std::uint32_t b_min, std::uint32_t b_max, std::uint64_t trials,
    std::uint64_t seed, std::uint32_t threads) {
    std::vector<SweepRow> rows;
    for (const auto& [label, spec] : specs) {
        for (std::uint32_t b = b_min; b <= b_max; ++b) {
            SweepRow row;
            row.label = label;
            row.q = spec.q;
            row.n = spec.dimension();
            row.b = b;
            row.exact = decimal_string(pmp_exact(spec, b), 12);
            if (trials > 0) {
                TrialReport rep = estimate_pmp(spec, b, trials, seed, threads);
                row.estimate = rep.estimate;
                row.trials = rep.trials;
                row.successes = rep.successes;
                row.z = rep.z_score;
                row.ci_lo = rep.ci_lo;
                row.ci_hi = rep.ci_hi;
                row.seed = rep.seed;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<SweepRow> sweep_worst_failure(std::uint64_t n,
                                          const std::vector<std::uint64_t>& qs,
                                          std::uint32_t b_max) {
    std::vector<SweepRow> rows;
    for (std::uint64_t q : qs) {
        for (std::uint32_t b = 1; b <= b_max; ++b) {
            SweepRow row;
            row.label = "worst";
            row.q = q;
            row.n = n;
            row.b = b;
            row.exact = fmt_double(pmpmin_log(q, n, b).failure);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string table1_csv() {
    std::vector<SweepRow> rows;
    for (const auto& cell : table1()) {
        SweepRow row;
        row.label = cell.label;
        row.q = 7;
        row.n = 5;
        row.b = cell.b;
        row.exact = cell.rendered;
        rows.push_back(std::move(row));
    }
    return sweep_to_csv(rows);
}

} // namespace blockproj
