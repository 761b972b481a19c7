// Command-line front end.  All domain logic goes through the C API in
// blockproj/blockproj.h; this file only handles flags, files and layout.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blockproj/blockproj.h"

namespace {

struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { bp_string_free(s); }
    std::string str() const { return s ? std::string(s) : std::string(); }
};

struct SpecGuard {
    bp_spec* spec = nullptr;
    ~SpecGuard() { bp_spec_free(spec); }
};

[[noreturn]] void die(const std::string& context) {
    std::cerr << "error: " << context;
    const char* detail = bp_last_error();
    if (detail && *detail)
        std::cerr << ": " << detail;
    std::cerr << "\n";
    std::exit(1);
}

void check(bp_status st, const std::string& context) {
    if (st != BP_OK)
        die(context);
}

bp_spec* load_spec(const std::string& path, SpecGuard& guard) {
    std::ifstream in(path);
    if (!in)
        die("cannot open spec file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    check(bp_spec_parse_json(buf.str().c_str(), &guard.spec),
          "parsing spec '" + path + "'");
    return guard.spec;
}

void warn_if_not_prime_power(std::uint64_t q) {
    if (!bp_is_prime_power(q))
        std::cerr << "warning: q=" << q
                  << " is not a prime power; formulas are evaluated arithmetically\n";
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        die("cannot write '" + out_path + "'");
    out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(item);
    return out;
}

void print_table1(const std::string& csv) {
    // Reshape the CSV rows (case,q,n,b,exact,...) into a case-by-b table.
    std::map<std::string, std::map<int, std::string>> grid;
    std::vector<std::string> order;
    int b_max = 0;
    bool header = true;
    for (const auto& line : split(csv, '\n')) {
        if (line.empty()) continue;
        if (header) { header = false; continue; }
        auto cols = split(line, ',');
        if (cols.size() < 5) continue;
        const std::string& label = cols[0];
        const int b = std::stoi(cols[3]);
        if (!grid.count(label)) order.push_back(label);
        grid[label][b] = cols[4];
        b_max = std::max(b_max, b);
    }
    std::printf("%-6s", "case");
    for (int b = 1; b <= b_max; ++b)
        std::printf(" %-11s", ("b=" + std::to_string(b)).c_str());
    std::printf("\n");
    for (const auto& label : order) {
        std::printf("%-6s", label.c_str());
        for (int b = 1; b <= b_max; ++b)
            std::printf(" %-11s", grid[label][b].c_str());
        std::printf("\n");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal-polynomial preservation probabilities for random "
                 "block projections over finite fields"};
    app.require_subcommand(1);

    // pmp
    std::string pmp_spec_path;
    std::uint32_t pmp_b = 1;
    std::uint32_t pmp_digits = 3;
    bool pmp_rational = false;
    auto* pmp = app.add_subcommand("pmp", "Exact projection probability for a spec file");
    pmp->add_option("--spec", pmp_spec_path, "spec JSON file")->required();
    pmp->add_option("--b", pmp_b, "block size")->required()->check(CLI::PositiveNumber);
    pmp->add_option("--digits", pmp_digits, "decimal digits (0 = adaptive)");
    pmp->add_flag("--rational", pmp_rational, "also print the exact fraction");

    // worst
    std::uint64_t w_q = 0, w_n = 0;
    std::uint32_t w_b = 1, w_digits = 3;
    std::string w_mode = "exact";
    bool w_both = false;
    auto* worst = app.add_subcommand("worst", "Worst-case probability over all n x n matrices");
    worst->add_option("--q", w_q, "field size")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
    worst->add_option("--n", w_n, "matrix dimension")->required()->check(CLI::PositiveNumber);
    worst->add_option("--b", w_b, "block size")->required()->check(CLI::PositiveNumber);
    worst->add_option("--mode", w_mode, "exact | log | approx")
        ->check(CLI::IsMember({"exact", "log", "approx"}));
    worst->add_option("--digits", w_digits, "decimal digits (exact mode)");
    worst->add_flag("--both-readings", w_both, "also print the flat-exponent reading");

    // table1
    std::string t1_out;
    auto* t1 = app.add_subcommand("table1", "Reproduce the 5 x 4 example probability grid");
    t1->add_option("--out", t1_out, "write CSV here instead of a table");

    // figure1
    std::uint64_t f1_n = 100000000ull;
    std::string f1_qs = "2,3,5,7,11,13";
    std::uint32_t f1_bmax = 24;
    std::string f1_out;
    auto* f1 = app.add_subcommand("figure1", "Worst-case failure probability grid (CSV)");
    f1->add_option("--n", f1_n, "matrix dimension");
    f1->add_option("--qs", f1_qs, "comma-separated field sizes");
    f1->add_option("--bmax", f1_bmax, "largest block size")->check(CLI::PositiveNumber);
    f1->add_option("--out", f1_out, "output CSV path (default stdout)");

    // simulate
    std::string sim_spec_path, sim_out, sim_label = "spec";
    std::uint32_t sim_b = 1, sim_threads = 1;
    std::uint64_t sim_trials = 0;
    std::optional<std::uint64_t> sim_seed;
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimate vs the exact value");
    sim->add_option("--spec", sim_spec_path, "spec JSON file")->required();
    sim->add_option("--b", sim_b, "block size")->required()->check(CLI::PositiveNumber);
    sim->add_option("--trials", sim_trials, "number of trials")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "master seed (auto-generated and printed if omitted)");
    sim->add_option("--threads", sim_threads, "worker threads")->check(CLI::PositiveNumber);
    sim->add_option("--label", sim_label, "case label for CSV output");
    sim->add_option("--out", sim_out, "append a CSV row here");

    // enumerate
    std::string en_spec_path;
    std::uint32_t en_b = 1, en_threads = 1, en_digits = 6;
    std::uint64_t en_limit = 1ull << 26;
    auto* en = app.add_subcommand("enumerate", "Exhaustive oracle over every (U, V) pair");
    en->add_option("--spec", en_spec_path, "spec JSON file")->required();
    en->add_option("--b", en_b, "block size")->required()->check(CLI::PositiveNumber);
    en->add_option("--limit", en_limit, "pair budget q^(2nb)");
    en->add_option("--threads", en_threads, "worker threads")->check(CLI::PositiveNumber);
    en->add_option("--digits", en_digits, "decimal digits");

    // irreducibles
    std::uint64_t ir_q = 0;
    std::uint32_t ir_m = 0;
    bool ir_list = false;
    auto* ir = app.add_subcommand("irreducibles", "Count (and list) monic irreducibles");
    ir->add_option("--q", ir_q, "field size")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
    ir->add_option("--m", ir_m, "degree")->required()->check(CLI::PositiveNumber);
    ir->add_flag("--list", ir_list, "list them (prime q only)");

    // compare-bounds
    std::uint64_t cb_q = 0, cb_n = 0;
    auto* cb = app.add_subcommand("compare-bounds", "Lower-bound comparison at b = 1");
    cb->add_option("--q", cb_q, "field size")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
    cb->add_option("--n", cb_n, "matrix dimension")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (pmp->parsed()) {
        SpecGuard spec;
        load_spec(pmp_spec_path, spec);
        StringGuard decimal, rational;
        check(bp_pmp_exact(spec.spec, pmp_b, pmp_digits, &decimal.s,
                           pmp_rational ? &rational.s : nullptr),
              "pmp");
        std::cout << decimal.str() << "\n";
        if (pmp_rational)
            std::cout << rational.str() << "\n";
        return 0;
    }

    if (worst->parsed()) {
        warn_if_not_prime_power(w_q);
        if (w_mode == "exact") {
            StringGuard decimal;
            check(bp_pmpmin_exact(w_q, w_n, w_b, BP_READING_PER_DEGREE, w_digits,
                                  &decimal.s, nullptr),
                  "worst");
            std::cout << decimal.str() << "\n";
            if (w_both) {
                StringGuard flat;
                check(bp_pmpmin_exact(w_q, w_n, w_b, BP_READING_FLAT, w_digits,
                                      &flat.s, nullptr),
                      "worst (flat reading)");
                std::cout << "flat-reading " << flat.str() << "\n";
            }
        } else if (w_mode == "log") {
            double pmpmin = 0, failure = 0;
            check(bp_pmpmin_log(w_q, w_n, w_b, &pmpmin, &failure), "worst");
            std::printf("pmpmin %.15g\nfailure %.15g\n", pmpmin, failure);
        } else {
            double harmonic = 0, simple = 0;
            int regime = 0;
            check(bp_pmpmin_approx(w_q, w_n, w_b, &harmonic, &regime, &simple), "worst");
            std::printf("harmonic %.15g\n", harmonic);
            if (regime == 1)
                std::printf("large-field %.15g\n", simple);
            else if (regime == 2)
                std::printf("sqrt-field %.15g\n", simple);
        }
        return 0;
    }

    if (t1->parsed()) {
        StringGuard csv;
        check(bp_table1_csv(&csv.s), "table1");
        if (!t1_out.empty())
            write_output(csv.str(), t1_out);
        else
            print_table1(csv.str());
        return 0;
    }

    if (f1->parsed()) {
        for (const auto& qstr : split(f1_qs, ','))
            if (!qstr.empty())
                warn_if_not_prime_power(std::strtoull(qstr.c_str(), nullptr, 10));
        StringGuard csv;
        check(bp_figure1_csv(f1_n, f1_qs.c_str(), f1_bmax, &csv.s), "figure1");
        write_output(csv.str(), f1_out);
        return 0;
    }

    if (sim->parsed()) {
        SpecGuard spec;
        load_spec(sim_spec_path, spec);
        std::uint64_t seed;
        if (sim_seed) {
            seed = *sim_seed;
        } else {
            seed = std::random_device{}();
            std::cout << "seed " << seed << " (auto-generated)\n";
        }
        bp_trial_report report{};
        check(bp_simulate(spec.spec, sim_b, sim_trials, seed, sim_threads, &report),
              "simulate");
        std::printf("trials %" PRIu64 "\nsuccesses %" PRIu64 "\n", report.trials,
                    report.successes);
        std::printf("estimate %.6f\nexact %.6f\nz %+.3f\nci95 [%.6f, %.6f]\n",
                    report.estimate, report.exact, report.z, report.ci_lo,
                    report.ci_hi);
        std::printf("seed %" PRIu64 "\nelapsed %.2fs\n", report.seed,
                    report.elapsed_seconds);
        if (!sim_out.empty()) {
            StringGuard row;
            check(bp_simulate_csv_row(spec.spec, sim_label.c_str(), sim_b, &report,
                                      &row.s),
                  "simulate CSV");
            std::ofstream out(sim_out, std::ios::app);
            if (!out)
                die("cannot write '" + sim_out + "'");
            if (out.tellp() == 0)
                out << bp_sweep_csv_header() << "\n";
            out << row.str() << "\n";
        }
        return 0;
    }

    if (en->parsed()) {
        SpecGuard spec;
        load_spec(en_spec_path, spec);
        StringGuard decimal, rational;
        check(bp_exhaustive_pmp(spec.spec, en_b, en_limit, en_threads, en_digits,
                                &decimal.s, &rational.s),
              "enumerate");
        std::cout << decimal.str() << "\n" << rational.str() << "\n";
        return 0;
    }

    if (ir->parsed()) {
        warn_if_not_prime_power(ir_q);
        StringGuard count;
        check(bp_count_irreducibles(ir_q, ir_m, &count.s), "irreducibles");
        std::cout << count.str() << "\n";
        if (ir_list) {
            StringGuard listing;
            check(bp_list_irreducibles(ir_q, ir_m, &listing.s), "irreducibles --list");
            std::cout << listing.str();
        }
        return 0;
    }

    if (cb->parsed()) {
        warn_if_not_prime_power(cb_q);
        double wied = 0, kp = 0, ours = 0;
        check(bp_comparison_bounds(cb_q, cb_n, &wied, &kp, &ours), "compare-bounds");
        std::printf("wiedemann %.15g\nkaltofen_pan %.15g\nours %.15g\n", wied, kp, ours);
        return 0;
    }

    return 2;
}
