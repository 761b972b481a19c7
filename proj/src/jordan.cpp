#include "jordan.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "intmath.hpp"

namespace blockproj {

std::uint32_t DivisorEntry::top_multiplicity() const {
    if (exps.empty()) return 0;
    std::uint32_t s = 0;
    for (std::uint32_t e : exps)
        if (e == exps[0]) ++s;
    return s;
}

std::uint64_t ElementaryDivisorSpec::dimension() const {
    std::uint64_t n = 0;
    for (const auto& entry : entries)
        for (std::uint32_t e : entry.exps)
            n += std::uint64_t{entry.degree} * e;
    return n;
}

bool ElementaryDivisorSpec::fully_explicit() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const DivisorEntry& e) { return e.poly.has_value(); });
}

void ElementaryDivisorSpec::validate() const {
    if (q < 2)
        fail(ErrorCode::invalid_argument, "spec violates: q >= 2");
    if (entries.empty())
        fail(ErrorCode::invalid_argument, "spec violates: n >= 1 (no elementary divisors)");
    for (const auto& entry : entries) {
        if (entry.degree < 1)
            fail(ErrorCode::invalid_argument, "spec violates: irreducible degree >= 1");
        if (entry.exps.empty())
            fail(ErrorCode::invalid_argument, "spec violates: each entry needs exponents");
        for (std::uint32_t e : entry.exps)
            if (e < 1)
                fail(ErrorCode::invalid_argument, "spec violates: all exponents e_ij >= 1");
        if (!std::is_sorted(entry.exps.rbegin(), entry.exps.rend()))
            fail(ErrorCode::invalid_argument, "spec violates: exponents nonincreasing");
        if (entry.poly) {
            if (entry.poly->degree() != static_cast<int>(entry.degree))
                fail(ErrorCode::invalid_argument,
                     "spec violates: polynomial degree equals the declared degree");
            if (!entry.poly->is_monic())
                fail(ErrorCode::not_monic, "spec violates: polynomials monic");
            if (!is_irreducible(*entry.poly))
                fail(ErrorCode::not_irreducible, "spec violates: polynomials irreducible");
        }
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            if (entries[i].poly && entries[j].poly && *entries[i].poly == *entries[j].poly)
                fail(ErrorCode::invalid_argument,
                     "spec violates: irreducibles pairwise distinct");
        }
    }
}

ElementaryDivisorSpec parse_spec_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse_error, std::string("spec JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("q") || !doc.contains("blocks"))
        fail(ErrorCode::parse_error, "spec JSON must be an object with \"q\" and \"blocks\"");
    if (!doc["q"].is_number_unsigned())
        fail(ErrorCode::parse_error, "spec JSON: \"q\" must be a positive integer");
    ElementaryDivisorSpec spec;
    spec.q = doc["q"].get<std::uint64_t>();
    if (!doc["blocks"].is_array())
        fail(ErrorCode::parse_error, "spec JSON: \"blocks\" must be an array");
    for (const auto& blk : doc["blocks"]) {
        if (!blk.is_object())
            fail(ErrorCode::parse_error, "spec JSON: each block must be an object");
        DivisorEntry entry;
        const bool has_poly = blk.contains("poly");
        const bool has_degree = blk.contains("degree");
        if (has_poly == has_degree)
            fail(ErrorCode::parse_error,
                 "spec JSON: each block needs exactly one of \"poly\" or \"degree\"");
        if (has_poly) {
            if (!blk["poly"].is_string())
                fail(ErrorCode::parse_error, "spec JSON: \"poly\" must be a string");
            PrimeField field(spec.q); // explicit polynomials need a prime field
            Poly f = parse_poly(field, blk["poly"].get<std::string>());
            if (f.degree() < 1)
                fail(ErrorCode::invalid_argument, "spec violates: irreducible degree >= 1");
            entry.degree = static_cast<std::uint32_t>(f.degree());
            entry.poly = std::move(f);
        } else {
            if (!blk["degree"].is_number_unsigned())
                fail(ErrorCode::parse_error, "spec JSON: \"degree\" must be a positive integer");
            entry.degree = blk["degree"].get<std::uint32_t>();
        }
        if (!blk.contains("exps") || !blk["exps"].is_array() )
            fail(ErrorCode::parse_error, "spec JSON: each block needs an \"exps\" array");
        for (const auto& e : blk["exps"]) {
            if (!e.is_number_unsigned())
                fail(ErrorCode::parse_error, "spec JSON: exponents must be positive integers");
            entry.exps.push_back(e.get<std::uint32_t>());
        }
        spec.entries.push_back(std::move(entry));
    }
    spec.validate();
    return spec;
}

std::string spec_to_json(const ElementaryDivisorSpec& spec) {
    nlohmann::json doc;
    doc["q"] = spec.q;
    doc["blocks"] = nlohmann::json::array();
    for (const auto& entry : spec.entries) {
        nlohmann::json blk;
        if (entry.poly)
            blk["poly"] = entry.poly->to_coeff_list();
        else
            blk["degree"] = entry.degree;
        blk["exps"] = entry.exps;
        doc["blocks"].push_back(std::move(blk));
    }
    return doc.dump();
}

BlackBoxMatrix::BlackBoxMatrix(PrimeField field, std::vector<Block> blocks)
    : field_(field), n_(0), blocks_(std::move(blocks)) {
    for (const auto& blk : blocks_) {
        if (!blk.f.is_monic() || blk.f.degree() < 1)
            fail(ErrorCode::not_monic, "Jordan block polynomial must be monic of degree >= 1");
        if (blk.e < 1)
            fail(ErrorCode::invalid_argument, "Jordan block exponent must be >= 1");
        n_ += static_cast<std::size_t>(blk.f.degree()) * blk.e;
    }
    if (n_ == 0)
        fail(ErrorCode::invalid_argument, "matrix dimension must be >= 1");
}

void BlackBoxMatrix::apply(const std::vector<Fel>& x, std::vector<Fel>& y) const {
    if (x.size() != n_)
        fail(ErrorCode::dimension_mismatch, "apply: vector length != matrix dimension");
    y.assign(n_, 0);
    std::size_t off = 0;
    for (const auto& blk : blocks_) {
        const std::size_t d = static_cast<std::size_t>(blk.f.degree());
        const auto& f = blk.f.coeffs();
        for (std::uint32_t j = 0; j < blk.e; ++j) {
            const std::size_t base = off + j * d;
            // Companion action: y_0 = -f_0 x_{d-1}; y_i = x_{i-1} - f_i x_{d-1}.
            const Fel top = x[base + d - 1];
            y[base] = field_.mul(field_.neg(f[0]), top);
            for (std::size_t i = 1; i < d; ++i)
                y[base + i] = field_.sub(x[base + i - 1], field_.mul(f[i], top));
            // Identity block on the subdiagonal couples to the previous chunk.
            if (j > 0) {
                const std::size_t prev = base - d;
                for (std::size_t i = 0; i < d; ++i)
                    y[base + i] = field_.add(y[base + i], x[prev + i]);
            }
        }
        off += d * blk.e;
    }
}

void BlackBoxMatrix::apply_to_matrix(Matrix& x) const {
    if (x.rows != n_ || !(x.field == field_))
        fail(ErrorCode::dimension_mismatch, "apply: matrix shape mismatch");
    std::vector<Fel> col(n_), out(n_);
    for (std::size_t j = 0; j < x.cols; ++j) {
        for (std::size_t i = 0; i < n_; ++i)
            col[i] = x.at(i, j);
        apply(col, out);
        for (std::size_t i = 0; i < n_; ++i)
            x.at(i, j) = out[i];
    }
}

Matrix BlackBoxMatrix::to_dense() const {
    Matrix m(field_, n_, n_);
    std::size_t off = 0;
    for (const auto& blk : blocks_) {
        const std::size_t d = static_cast<std::size_t>(blk.f.degree());
        const auto& f = blk.f.coeffs();
        for (std::uint32_t j = 0; j < blk.e; ++j) {
            const std::size_t base = off + j * d;
            for (std::size_t i = 0; i < d; ++i)
                m.at(base + i, base + d - 1) = field_.neg(f[i]);
            for (std::size_t i = 1; i < d; ++i)
                m.at(base + i, base + i - 1) = field_.add(m.at(base + i, base + i - 1), 1);
            if (j > 0)
                for (std::size_t i = 0; i < d; ++i)
                    m.at(base + i, base - d + i) = 1;
        }
        off += d * blk.e;
    }
    return m;
}

BlackBoxMatrix companion(const Poly& f) {
    if (!f.is_monic() || f.degree() < 1)
        fail(ErrorCode::not_monic, "companion matrix needs a monic polynomial of degree >= 1");
    return BlackBoxMatrix(f.field(), {{f, 1}});
}

BlackBoxMatrix jordan_block(const Poly& f, std::uint32_t e) {
    if (!f.is_monic() || f.degree() < 1)
        fail(ErrorCode::not_monic, "Jordan block needs a monic polynomial of degree >= 1");
    if (!is_irreducible(f))
        fail(ErrorCode::not_irreducible, "Jordan block polynomial must be irreducible");
    if (e < 1)
        fail(ErrorCode::invalid_argument, "Jordan block exponent must be >= 1");
    return BlackBoxMatrix(f.field(), {{f, e}});
}

BuildResult build(const ElementaryDivisorSpec& spec, Rng& rng) {
    spec.validate();
    PrimeField field(spec.q); // simulation needs a prime field
    if (spec.dimension() > 1000000)
        fail(ErrorCode::limit_exceeded, "matrix dimension above build limit 10^6");

    // Distinctness is a hard constraint: the spec may not demand more
    // degree-d irreducibles than exist over F_q.
    std::map<std::uint32_t, std::uint32_t> demand;
    for (const auto& entry : spec.entries)
        ++demand[entry.degree];
    for (const auto& [d, cnt] : demand) {
        mpz_class avail = count_irreducibles(spec.q, d);
        if (avail < cnt)
            fail(ErrorCode::insufficient_irreducibles,
                 "spec demands " + std::to_string(cnt) + " distinct irreducibles of degree " +
                     std::to_string(d) + " over F_" + std::to_string(spec.q) +
                     " but only " + avail.get_str() + " exist");
    }

    ElementaryDivisorSpec resolved = spec;
    for (auto& entry : resolved.entries) {
        if (entry.poly) continue;
        for (;;) {
            Poly f = random_irreducible(rng, field, entry.degree);
            const bool used = std::any_of(
                resolved.entries.begin(), resolved.entries.end(),
                [&](const DivisorEntry& e) { return e.poly && *e.poly == f; });
            if (!used) {
                entry.poly = std::move(f);
                break;
            }
        }
    }

    std::vector<BlackBoxMatrix::Block> blocks;
    for (const auto& entry : resolved.entries)
        for (std::uint32_t e : entry.exps)
            blocks.push_back({*entry.poly, e});
    return BuildResult{BlackBoxMatrix(field, std::move(blocks)), std::move(resolved)};
}

Poly spec_minpoly(const ElementaryDivisorSpec& spec) {
    if (!spec.fully_explicit())
        fail(ErrorCode::invalid_argument, "spec_minpoly needs explicit irreducibles");
    PrimeField field(spec.q);
    Poly acc = Poly::one(field);
    for (const auto& entry : spec.entries)
        acc = acc.mul(entry.poly->pow(entry.exps[0]));
    return acc;
}

BlockSequence project_sequence(const BlackBoxMatrix& a, const Matrix& u,
                               const Matrix& v, std::size_t len) {
    if (len < 1)
        fail(ErrorCode::invalid_argument, "sequence length must be >= 1");
    if (u.cols != a.dim() || v.rows != a.dim() || u.rows != v.cols ||
        !(u.field == a.field()) || !(v.field == a.field()))
        fail(ErrorCode::dimension_mismatch,
             "projection shapes must be b x n and n x b around an n x n matrix");
    BlockSequence seq;
    seq.terms.reserve(len);
    Matrix x = v; // A^k V, advanced in place
    for (std::size_t k = 0; k < len; ++k) {
        seq.terms.push_back(u.mul(x));
        if (k + 1 < len)
            a.apply_to_matrix(x);
    }
    return seq;
}

Matrix hankel_transform(const Poly& f) {
    if (!f.is_monic() || f.degree() < 1)
        fail(ErrorCode::not_monic, "needs a monic polynomial of degree >= 1");
    const PrimeField field = f.field();
    const std::size_t d = static_cast<std::size_t>(f.degree());
    Matrix p(field, d, d);
    if (d == 1) {
        // -f_0, except that f = x would give the singular (0); any nonzero
        // scalar commutes, so use 1 there.
        p.at(0, 0) = f.coeff(0) == 0 ? 1 : field.neg(f.coeff(0));
        return p;
    }
    p.at(0, 0) = field.neg(f.coeff(0));
    // Hankel block over (f_2, ..., f_{d-1}, 1, 0, ..., 0): entry (i,j) picks
    // element i+j of that list.
    std::vector<Fel> h(2 * (d - 1) - 1, 0);
    for (std::size_t k = 0; k + 2 < d; ++k)
        h[k] = f.coeff(k + 2);
    h[d - 2] = 1;
    for (std::size_t i = 0; i < d - 1; ++i)
        for (std::size_t j = 0; j < d - 1; ++j)
            p.at(1 + i, 1 + j) = h[i + j];
    return p;
}

Matrix regular_representation(const std::vector<Fel>& v, const Poly& f) {
    if (f.degree() < 1)
        fail(ErrorCode::invalid_argument, "modulus degree must be >= 1");
    if (v.size() != static_cast<std::size_t>(f.degree()))
        fail(ErrorCode::dimension_mismatch, "vector length must equal deg f");
    const PrimeField field = f.field();
    const std::size_t d = v.size();
    Matrix c = companion(f).to_dense();
    Matrix power = Matrix::identity(field, d);
    Matrix acc(field, d, d);
    for (std::size_t j = 0; j < d; ++j) {
        if (v[j] != 0)
            for (std::size_t k = 0; k < acc.a.size(); ++k)
                acc.a[k] = field.add(acc.a[k], field.mul(v[j], power.a[k]));
        if (j + 1 < d)
            power = power.mul(c);
    }
    return acc;
}

Matrix krylov_matrix(const std::vector<Fel>& v, const Poly& f) {
    if (f.degree() < 1)
        fail(ErrorCode::invalid_argument, "modulus degree must be >= 1");
    if (v.size() != static_cast<std::size_t>(f.degree()))
        fail(ErrorCode::dimension_mismatch, "vector length must equal deg f");
    const PrimeField field = f.field();
    const std::size_t d = v.size();
    BlackBoxMatrix c = companion(f);
    Matrix k(field, d, d);
    std::vector<Fel> col = v, next;
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i)
            k.at(i, j) = col[i];
        if (j + 1 < d) {
            c.apply(col, next);
            col.swap(next);
        }
    }
    return k;
}

namespace {

// Partitions of m as nonincreasing exponent vectors.
void gen_partitions(std::uint32_t m, std::uint32_t max_part,
                    std::vector<std::uint32_t>& cur,
                    std::vector<std::vector<std::uint32_t>>& out) {
    if (m == 0) {
        out.push_back(cur);
        return;
    }
    for (std::uint32_t part = std::min(m, max_part); part >= 1; --part) {
        cur.push_back(part);
        gen_partitions(m - part, part, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<std::uint32_t>> partitions(std::uint32_t m) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    gen_partitions(m, m, cur, out);
    return out;
}

// Multisets of nonempty partitions with given total weight and bounded
// cardinality, emitted as nondecreasing index tuples into `parts`.
void gen_multisets(const std::vector<std::vector<std::uint32_t>>& parts,
                   std::uint32_t remaining, std::size_t min_index,
                   std::uint32_t slots_left,
                   std::vector<std::size_t>& cur,
                   std::vector<std::vector<std::size_t>>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    if (slots_left == 0) return;
    for (std::size_t idx = min_index; idx < parts.size(); ++idx) {
        std::uint32_t weight = 0;
        for (std::uint32_t part : parts[idx]) weight += part;
        if (weight > remaining) continue;
        cur.push_back(idx);
        gen_multisets(parts, remaining - weight, idx, slots_left - 1, cur, out);
        cur.pop_back();
    }
}

void gen_specs(std::uint64_t q, std::uint32_t remaining, std::uint32_t degree,
               const std::vector<std::vector<Poly>>& irreducibles_by_degree,
               ElementaryDivisorSpec& cur,
               std::vector<ElementaryDivisorSpec>& out) {
    if (remaining == 0) {
        if (!cur.entries.empty())
            out.push_back(cur);
        return;
    }
    if (degree > remaining) return;

    // Weight-sorted partition index pool up to the remaining content.
    std::vector<std::vector<std::uint32_t>> parts;
    for (std::uint32_t m = 1; m <= remaining / degree; ++m)
        for (auto& part : partitions(m))
            parts.push_back(part);

    const auto& irreducibles = irreducibles_by_degree[degree];
    std::vector<std::vector<std::size_t>> choices;
    std::vector<std::size_t> scratch;
    for (std::uint32_t content = 0; content <= remaining / degree; ++content) {
        choices.clear();
        if (content == 0) {
            gen_specs(q, remaining, degree + 1, irreducibles_by_degree, cur, out);
            continue;
        }
        gen_multisets(parts, content, 0,
                      static_cast<std::uint32_t>(irreducibles.size()), scratch, choices);
        for (const auto& choice : choices) {
            const std::size_t before = cur.entries.size();
            for (std::size_t k = 0; k < choice.size(); ++k) {
                DivisorEntry entry;
                entry.poly = irreducibles[k];
                entry.degree = degree;
                entry.exps = parts[choice[k]];
                cur.entries.push_back(std::move(entry));
            }
            gen_specs(q, remaining - content * degree, degree + 1,
                      irreducibles_by_degree, cur, out);
            cur.entries.resize(before);
        }
    }
}

} // namespace

std::vector<ElementaryDivisorSpec> enumerate_specs(std::uint64_t q, std::uint32_t n) {
    if (n < 1 || n > 16)
        fail(ErrorCode::limit_exceeded, "structure enumeration supported for 1 <= n <= 16");
    PrimeField field(q);
    std::vector<std::vector<Poly>> irreducibles_by_degree(n + 1);
    for (std::uint32_t d = 1; d <= n; ++d) {
        auto all = enumerate_irreducibles(field, d, 1ull << 24);
        // At most floor(n/d) of them can ever appear in one structure.
        if (all.size() > n / d)
            all.erase(all.begin() + n / d, all.end());
        irreducibles_by_degree[d] = std::move(all);
    }
    std::vector<ElementaryDivisorSpec> out;
    ElementaryDivisorSpec cur;
    cur.q = q;
    gen_specs(q, n, 1, irreducibles_by_degree, cur, out);
    for (auto& spec : out)
        spec.validate();
    return out;
}

} // namespace blockproj
