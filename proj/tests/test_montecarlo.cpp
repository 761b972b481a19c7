#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "montecarlo.hpp"

using namespace blockproj;

namespace {

ElementaryDivisorSpec spec_from(const char* json) { return parse_spec_json(json); }

std::size_t count_columns(const std::string& csv_row) {
    return static_cast<std::size_t>(std::count(csv_row.begin(), csv_row.end(), ',')) + 1;
}

} // namespace

TEST_CASE("simulation is deterministic and thread-count independent") {
    auto spec = spec_from(R"({"q": 7, "blocks": [{"poly": "6,3,1", "exps": [1]},
                                                  {"poly": "4,1", "exps": [1, 1, 1]}]})");
    TrialReport r1 = estimate_pmp(spec, 2, 4000, 123, 1);
    TrialReport r2 = estimate_pmp(spec, 2, 4000, 123, 1);
    TrialReport r3 = estimate_pmp(spec, 2, 4000, 123, 3);
    CHECK(r1.successes == r2.successes);
    CHECK(r1.successes == r3.successes);
    CHECK(r1.estimate == r3.estimate);
    CHECK(r1.trials == 4000);
    CHECK(r1.seed == 123);
    CHECK(r1.ci_lo <= r1.estimate);
    CHECK(r1.estimate <= r1.ci_hi);
}

TEST_CASE("estimates sit near the exact values") {
    // Modest trial counts; |z| <= 4 under the frozen seed.
    const char* cases[] = {
        R"({"q": 7, "blocks": [{"poly": "2,1", "exps": [1]}, {"poly": "3,1", "exps": [1]},
             {"poly": "4,1", "exps": [1]}, {"poly": "5,1", "exps": [1]}, {"poly": "6,1", "exps": [1]}]})",
        R"({"q": 2, "blocks": [{"poly": "1,1,1", "exps": [2]}, {"poly": "1,1", "exps": [1]}]})",
        R"({"q": 3, "blocks": [{"degree": 2, "exps": [1, 1]}, {"degree": 1, "exps": [2]}]})",
    };
    for (const char* text : cases) {
        auto spec = spec_from(text);
        for (std::uint32_t b = 1; b <= 2; ++b) {
            TrialReport r = estimate_pmp(spec, b, 20000, 777, 2);
            CAPTURE(text);
            CAPTURE(b);
            CHECK(std::abs(r.z_score) <= 4.0);
        }
    }
}

TEST_CASE("square projections are not automatically successful") {
    // At b = n random U, V can still be singular; the success rate follows
    // the same formula rather than saturating at one.
    auto spec = spec_from(R"({"q": 3, "blocks": [{"poly": "1,1", "exps": [1]},
                                                 {"poly": "2,1", "exps": [1]}]})");
    const std::uint32_t b = 2; // equals n
    TrialReport r = estimate_pmp(spec, b, 20000, 99, 2);
    CHECK(r.exact < 1);
    CHECK(std::abs(r.z_score) <= 4.0);
    CHECK(r.estimate < 1.0);
}

TEST_CASE("exhaustive oracle on the named inputs") {
    SUBCASE("companion of the quadratic over F_2") {
        auto spec = spec_from(R"({"q": 2, "blocks": [{"poly": "1,1,1", "exps": [1]}]})");
        CHECK(exhaustive_pmp(spec, 1) == mpq_class(9, 16));
    }
    SUBCASE("1x1 zero matrix (minimal polynomial x)") {
        auto spec = spec_from(R"({"q": 2, "blocks": [{"poly": "0,1", "exps": [1]}]})");
        CHECK(exhaustive_pmp(spec, 1) == mpq_class(1, 4));
    }
    SUBCASE("two distinct linears over F_3") {
        auto spec = spec_from(R"({"q": 3, "blocks": [{"poly": "1,1", "exps": [1]},
                                                     {"poly": "2,1", "exps": [1]}]})");
        const mpq_class expect = mpq_class(16, 81); // (1 - 1/3)^4
        CHECK(exhaustive_pmp(spec, 1) == expect);
        CHECK(pmp_exact(spec, 1) == expect);
    }
    SUBCASE("exponent inflation leaves the exhaustive fraction unchanged") {
        auto e1 = spec_from(R"({"q": 2, "blocks": [{"poly": "1,1", "exps": [1]}]})");
        auto e3 = spec_from(R"({"q": 2, "blocks": [{"poly": "1,1", "exps": [3]}]})");
        CHECK(exhaustive_pmp(e1, 1) == exhaustive_pmp(e3, 1));
        CHECK(exhaustive_pmp(e3, 1) == mpq_class(1, 4));
    }
    SUBCASE("pair budget guard") {
        auto spec = spec_from(R"({"q": 7, "blocks": [{"poly": "6,3,1", "exps": [2]}]})");
        CHECK_THROWS_AS(exhaustive_pmp(spec, 2, 1000), Error);
    }
}

TEST_CASE("exhaustive equals the exact formula on a small grid") {
    // The full q in {2,3}, n <= 4, b <= 2 grid runs in the acceptance
    // suite; this keeps a fast sentinel in the unit tests.
    for (std::uint64_t q : {2ull, 3ull}) {
        for (std::uint32_t n = 1; n <= 3; ++n) {
            for (const auto& spec : enumerate_specs(q, n)) {
                for (std::uint32_t b = 1; b <= 2; ++b) {
                    CAPTURE(spec_to_json(spec));
                    CAPTURE(b);
                    CHECK(exhaustive_pmp(spec, b, 1ull << 26, 2) == pmp_exact(spec, b));
                }
            }
        }
    }
}

TEST_CASE("per-pair predicate agrees with Berlekamp-Massey recovery") {
    // The oracle's annihilator test and the full recovery pipeline must
    // agree pair by pair, not just in aggregate.
    for (std::uint64_t q : {2ull, 3ull}) {
        for (std::uint32_t n = 1; n <= 3; ++n) {
            auto specs = enumerate_specs(q, n);
            for (std::size_t si = 0; si < specs.size(); si += 2) { // thin out
                const auto& spec = specs[si];
                Rng rng(0);
                auto built = build(spec, rng);
                const Poly target = spec_minpoly(built.resolved);
                const PrimeField field = built.matrix.field();
                for (std::uint32_t b = 1; b <= 2; ++b) {
                    std::uint64_t side = 1;
                    for (std::uint32_t i = 0; i < n * b; ++i) side *= q;
                    if (side * side > 10000) continue;
                    for (std::uint64_t ui = 0; ui < side; ++ui) {
                        for (std::uint64_t vi = 0; vi < side; ++vi) {
                            Matrix u(field, b, n), v(field, n, b);
                            std::uint64_t k = ui;
                            for (auto& val : u.a) { val = static_cast<Fel>(k % q); k /= q; }
                            k = vi;
                            for (auto& val : v.a) { val = static_cast<Fel>(k % q); k /= q; }
                            const bool fast =
                                projection_preserves_minpoly(built.matrix, built.resolved, u, v);
                            BlockSequence seq =
                                project_sequence(built.matrix, u, v, 2 * n + 2);
                            const bool slow =
                                minpoly_block_sequence(seq, field) == target;
                            REQUIRE(fast == slow);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("z-score battery stays calibrated") {
    // 50 (spec, b) cases at 2000 trials each; with correct probabilities
    // the expected number of |z| > 3 cases is ~0.14, so none should appear
    // under the frozen seed.
    std::vector<std::pair<ElementaryDivisorSpec, std::uint32_t>> battery;
    for (std::uint64_t q : {2ull, 3ull}) {
        for (std::uint32_t n = 2; n <= 4; ++n) {
            for (const auto& spec : enumerate_specs(q, n)) {
                for (std::uint32_t b = 1; b <= 2; ++b) {
                    if (battery.size() < 50)
                        battery.emplace_back(spec, b);
                }
            }
        }
    }
    REQUIRE(battery.size() == 50);
    int outliers = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
        TrialReport r =
            estimate_pmp(battery[i].first, battery[i].second, 2000, 31337 + i, 2);
        if (std::abs(r.z_score) > 3.0)
            ++outliers;
    }
    CHECK(outliers == 0);
}

TEST_CASE("csv output") {
    SUBCASE("header and empty sweep") {
        CHECK(sweep_csv_header() ==
              "case,q,n,b,exact,estimate,trials,successes,z,ci_lo,ci_hi,seed");
        CHECK(sweep_to_csv({}) == sweep_csv_header() + "\n");
    }
    SUBCASE("exact-only rows leave simulation columns empty") {
        auto rows = sweep_specs(example_specs(), 1, 4, 0, 0);
        CHECK(rows.size() == 20);
        for (const auto& row : rows) {
            const std::string text = sweep_csv_row(row);
            CHECK(count_columns(text) == 12);
            CHECK_FALSE(row.estimate.has_value());
        }
    }
    SUBCASE("simulated rows fill every column") {
        std::vector<std::pair<std::string, ElementaryDivisorSpec>> one;
        one.emplace_back("A5", example_specs()[4].second);
        auto rows = sweep_specs(one, 1, 1, 500, 9);
        REQUIRE(rows.size() == 1);
        const std::string text = sweep_csv_row(rows[0]);
        CHECK(count_columns(text) == 12);
        CHECK(rows[0].estimate.has_value());
        CHECK(rows[0].seed.value() == 9);
        std::istringstream is(text);
        std::string label;
        std::getline(is, label, ',');
        CHECK(label == "A5");
    }
    SUBCASE("worst-case failure grid is monotone per field") {
        auto rows = sweep_worst_failure(1000000, {2, 3}, 6);
        REQUIRE(rows.size() == 12);
        double prev = 2.0;
        for (const auto& row : rows) {
            const double f = std::stod(row.exact);
            if (row.b == 1)
                prev = 2.0;
            CHECK(f < prev);
            prev = f;
        }
    }
    SUBCASE("golden table CSV") {
        const std::string csv = table1_csv();
        std::istringstream is(csv);
        std::string line;
        std::getline(is, line);
        CHECK(line == sweep_csv_header());
        std::size_t rows = 0;
        bool saw_a5_b1 = false;
        while (std::getline(is, line)) {
            ++rows;
            if (line.rfind("A5,7,5,1,", 0) == 0)
                saw_a5_b1 = line.find("0.214") != std::string::npos;
        }
        CHECK(rows == 20);
        CHECK(saw_a5_b1);
    }
}

TEST_CASE("wilson interval endpoints") {
    auto spec = spec_from(R"({"q": 2, "blocks": [{"poly": "0,1", "exps": [1]}]})");
    // Probability 1/4; tiny trial counts exercise the endpoint behavior.
    TrialReport r = estimate_pmp(spec, 1, 1, 5);
    CHECK(r.ci_lo >= 0.0);
    CHECK(r.ci_hi <= 1.0);
    CHECK(r.ci_lo < r.ci_hi);
}
