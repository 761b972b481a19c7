#include "blockproj/blockproj.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "exactprob.hpp"
#include "intmath.hpp"
#include "jordan.hpp"
#include "montecarlo.hpp"
#include "poly.hpp"

using namespace blockproj;

struct bp_spec {
    ElementaryDivisorSpec spec;
};

namespace {

thread_local std::string g_last_error;

bp_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return BP_ERR_INVALID_ARGUMENT;
        case ErrorCode::not_prime: return BP_ERR_NOT_PRIME;
        case ErrorCode::division_by_zero: return BP_ERR_DIVISION_BY_ZERO;
        case ErrorCode::parse_error: return BP_ERR_PARSE;
        case ErrorCode::not_monic: return BP_ERR_NOT_MONIC;
        case ErrorCode::not_irreducible: return BP_ERR_NOT_IRREDUCIBLE;
        case ErrorCode::sequence_too_short: return BP_ERR_SEQUENCE_TOO_SHORT;
        case ErrorCode::dimension_mismatch: return BP_ERR_DIMENSION_MISMATCH;
        case ErrorCode::insufficient_irreducibles: return BP_ERR_INSUFFICIENT_IRREDUCIBLES;
        case ErrorCode::limit_exceeded: return BP_ERR_LIMIT_EXCEEDED;
    }
    return BP_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
bp_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BP_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BP_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BP_ERR_INTERNAL;
    }
}

bp_status require(bool ok, const char* what) {
    if (ok) return BP_OK;
    g_last_error = what;
    return BP_ERR_INVALID_ARGUMENT;
}

void render_prob(const ExactProb& value, uint32_t digits, char** decimal,
                 char** rational) {
    if (decimal)
        *decimal = dup_string(digits == 0 ? adaptive_decimal(value)
                                          : decimal_string(value, digits));
    if (rational) {
        std::ostringstream os;
        os << value.get_num().get_str() << '/' << value.get_den().get_str();
        *rational = dup_string(os.str());
    }
}

} // namespace

extern "C" {

const char* bp_version(void) { return "1.0.0"; }

const char* bp_last_error(void) { return g_last_error.c_str(); }

void bp_string_free(char* s) { std::free(s); }

bp_status bp_spec_parse_json(const char* json, bp_spec** out) {
    if (bp_status st = require(json && out, "null argument")) return st;
    return guarded([&] {
        auto holder = new bp_spec{parse_spec_json(json)};
        *out = holder;
    });
}

void bp_spec_free(bp_spec* spec) { delete spec; }

bp_status bp_spec_dimension(const bp_spec* spec, uint64_t* n) {
    if (bp_status st = require(spec && n, "null argument")) return st;
    return guarded([&] { *n = spec->spec.dimension(); });
}

bp_status bp_spec_field_size(const bp_spec* spec, uint64_t* q) {
    if (bp_status st = require(spec && q, "null argument")) return st;
    return guarded([&] { *q = spec->spec.q; });
}

bp_status bp_spec_minpoly(const bp_spec* spec, char** text) {
    if (bp_status st = require(spec && text, "null argument")) return st;
    return guarded([&] { *text = dup_string(spec_minpoly(spec->spec).to_string()); });
}

bp_status bp_pmp_exact(const bp_spec* spec, uint32_t b, uint32_t digits,
                       char** decimal, char** rational) {
    if (bp_status st = require(spec != nullptr, "null spec")) return st;
    return guarded([&] {
        render_prob(pmp_exact(spec->spec, b), digits, decimal, rational);
    });
}

bp_status bp_pmpmin_exact(uint64_t q, uint64_t n, uint32_t b,
                          bp_worst_reading reading, uint32_t digits,
                          char** decimal, char** rational) {
    return guarded([&] {
        const WorstReading r = reading == BP_READING_FLAT ? WorstReading::flat
                                                          : WorstReading::per_degree;
        render_prob(pmpmin_exact(q, n, b, r), digits, decimal, rational);
    });
}

bp_status bp_pmpmin_log(uint64_t q, uint64_t n, uint32_t b, double* pmpmin,
                        double* failure) {
    if (bp_status st = require(pmpmin && failure, "null argument")) return st;
    return guarded([&] {
        LogProb lp = blockproj::pmpmin_log(q, n, b);
        *pmpmin = lp.pmpmin;
        *failure = lp.failure;
    });
}

bp_status bp_pmpmin_approx(uint64_t q, uint64_t n, uint32_t b,
                           double* harmonic, int* regime, double* simple) {
    if (bp_status st = require(harmonic && regime && simple, "null argument")) return st;
    return guarded([&] {
        ApproxProb ap = blockproj::pmpmin_approx(q, n, b);
        *harmonic = ap.harmonic;
        *regime = static_cast<int>(ap.regime);
        *simple = ap.simple.value_or(0.0);
    });
}

bp_status bp_worst_profile_json(uint64_t q, uint64_t n, char** json) {
    if (bp_status st = require(json != nullptr, "null argument")) return st;
    return guarded([&] {
        WorstCaseProfile profile = worst_profile(q, n);
        nlohmann::json doc;
        doc["q"] = profile.q;
        doc["n"] = profile.n;
        doc["m"] = profile.m;
        doc["residual"] = profile.residual;
        doc["counts"] = profile.counts;
        *json = dup_string(doc.dump());
    });
}

bp_status bp_count_irreducibles(uint64_t q, uint32_t m, char** count) {
    if (bp_status st = require(count != nullptr, "null argument")) return st;
    return guarded([&] { *count = dup_string(count_irreducibles(q, m).get_str()); });
}

bp_status bp_list_irreducibles(uint64_t p, uint32_t d, char** listing) {
    if (bp_status st = require(listing != nullptr, "null argument")) return st;
    return guarded([&] {
        PrimeField field(p);
        std::ostringstream os;
        for (const Poly& f : enumerate_irreducibles(field, d))
            os << f.to_string() << '\n';
        *listing = dup_string(os.str());
    });
}

int bp_is_prime_power(uint64_t q) { return is_prime_power(q) ? 1 : 0; }

bp_status bp_comparison_bounds(uint64_t q, uint64_t n, double* wiedemann,
                               double* kaltofen_pan, double* ours) {
    if (bp_status st = require(wiedemann && kaltofen_pan && ours, "null argument"))
        return st;
    return guarded([&] {
        ComparisonBounds cb = comparison_bounds(q, n);
        *wiedemann = cb.wiedemann;
        *kaltofen_pan = cb.kaltofen_pan;
        *ours = cb.ours;
    });
}

bp_status bp_simulate(const bp_spec* spec, uint32_t b, uint64_t trials,
                      uint64_t seed, uint32_t threads, bp_trial_report* out) {
    if (bp_status st = require(spec && out, "null argument")) return st;
    return guarded([&] {
        TrialReport rep = estimate_pmp(spec->spec, b, trials, seed, threads);
        out->trials = rep.trials;
        out->successes = rep.successes;
        out->estimate = rep.estimate;
        out->exact = rep.exact.get_d();
        out->z = rep.z_score;
        out->ci_lo = rep.ci_lo;
        out->ci_hi = rep.ci_hi;
        out->seed = rep.seed;
        out->elapsed_seconds = rep.elapsed_seconds;
    });
}

bp_status bp_exhaustive_pmp(const bp_spec* spec, uint32_t b,
                            uint64_t pair_limit, uint32_t threads,
                            uint32_t digits, char** decimal, char** rational) {
    if (bp_status st = require(spec != nullptr, "null spec")) return st;
    return guarded([&] {
        render_prob(exhaustive_pmp(spec->spec, b, pair_limit, threads), digits,
                    decimal, rational);
    });
}

const char* bp_sweep_csv_header(void) {
    static const std::string header = sweep_csv_header();
    return header.c_str();
}

bp_status bp_simulate_csv_row(const bp_spec* spec, const char* label,
                              uint32_t b, const bp_trial_report* report,
                              char** row) {
    if (bp_status st = require(spec && label && report && row, "null argument"))
        return st;
    return guarded([&] {
        SweepRow r;
        r.label = label;
        r.q = spec->spec.q;
        r.n = spec->spec.dimension();
        r.b = b;
        r.exact = decimal_string(pmp_exact(spec->spec, b), 12);
        r.estimate = report->estimate;
        r.trials = report->trials;
        r.successes = report->successes;
        r.z = report->z;
        r.ci_lo = report->ci_lo;
        r.ci_hi = report->ci_hi;
        r.seed = report->seed;
        *row = dup_string(sweep_csv_row(r));
    });
}

bp_status bp_table1_csv(char** csv) {
    if (bp_status st = require(csv != nullptr, "null argument")) return st;
    return guarded([&] { *csv = dup_string(table1_csv()); });
}

bp_status bp_figure1_csv(uint64_t n, const char* qs_comma_separated,
                         uint32_t b_max, char** csv) {
    if (bp_status st = require(qs_comma_separated && csv, "null argument")) return st;
    return guarded([&] {
        std::vector<std::uint64_t> qs;
        std::stringstream ss(qs_comma_separated);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t pos = 0;
                unsigned long long v = std::stoull(item, &pos);
                if (pos != item.size() || v < 2)
                    throw std::invalid_argument(item);
                qs.push_back(v);
            } catch (const std::exception&) {
                fail(ErrorCode::parse_error, "bad field size '" + item + "'");
            }
        }
        if (qs.empty() || b_max < 1)
            fail(ErrorCode::invalid_argument, "need at least one q and b_max >= 1");
        *csv = dup_string(sweep_to_csv(sweep_worst_failure(n, qs, b_max)));
    });
}

} // extern "C"
