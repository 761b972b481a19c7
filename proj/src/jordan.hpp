#ifndef BLOCKPROJ_JORDAN_HPP
#define BLOCKPROJ_JORDAN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "field.hpp"
#include "poly.hpp"
#include "rng.hpp"

namespace blockproj {

// One distinct irreducible together with the nonincreasing exponents of its
// elementary divisors f^e.  The polynomial may be left open ("degree-only"):
// the projection probability depends only on (degree, exponents), so tests
// and sweeps can be degree-parameterized and the polynomial drawn at build.
struct DivisorEntry {
    std::optional<Poly> poly; // monic irreducible when present
    std::uint32_t degree = 0; // = poly->degree() when poly present
    std::vector<std::uint32_t> exps;

    /// Multiplicity of the top exponent exps[0].
    std::uint32_t top_multiplicity() const;
};

// Similarity-class description of a matrix: the multiset of elementary
// divisors f_i^{e_ij}, grouped by distinct irreducible f_i.
struct ElementaryDivisorSpec {
    std::uint64_t q = 0; // field size (prime whenever a matrix gets built)
    std::vector<DivisorEntry> entries;

    /// Total dimension n = sum_i d_i * sum_j e_ij.
    std::uint64_t dimension() const;
    bool fully_explicit() const;

    /// Checks every structural invariant; throws with a message naming the
    /// violated one.
    void validate() const;
};

/// Parse the JSON spec format:
///   {"q": 7, "blocks": [{"poly": "6,3,1", "exps": [1]},
///                       {"poly": "4,1", "exps": [1,1,1]}]}
/// "degree": d may replace "poly".  Validates before returning.
ElementaryDivisorSpec parse_spec_json(const std::string& json_text);
std::string spec_to_json(const ElementaryDivisorSpec& spec);

// Block-diagonal matrix in generalized Jordan form, stored structurally:
// per block the companion polynomial and its exponent.  apply() runs in
// O(n) per vector; nothing dense is materialized outside tests.
class BlackBoxMatrix {
public:
    struct Block {
        Poly f;          // monic irreducible
        std::uint32_t e; // J_{f^e}
    };

    BlackBoxMatrix(PrimeField field, std::vector<Block> blocks);

    const PrimeField& field() const noexcept { return field_; }
    std::size_t dim() const noexcept { return n_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

    /// y = A x.
    void apply(const std::vector<Fel>& x, std::vector<Fel>& y) const;
    /// In-place X <- A X for a dense n x b matrix.
    void apply_to_matrix(Matrix& x) const;

    Matrix to_dense() const;

private:
    PrimeField field_;
    std::size_t n_;
    std::vector<Block> blocks_;
};

/// Companion matrix of a monic f (deg >= 1): subdiagonal ones, last column
/// -f_0..-f_{d-1}.
BlackBoxMatrix companion(const Poly& f);

/// Jordan block J_{f^e}: C_f on the block diagonal, identities on the block
/// subdiagonal.  e == 1 is exactly companion(f).
BlackBoxMatrix jordan_block(const Poly& f, std::uint32_t e);

struct BuildResult {
    BlackBoxMatrix matrix;
    ElementaryDivisorSpec resolved; // degree-only entries filled in
};

/// Direct sum over the spec's elementary divisors.  Degree-only entries are
/// resolved with random irreducibles, kept distinct from every other entry;
/// throws insufficient_irreducibles when the spec demands more distinct
/// degree-d irreducibles than exist over F_q.
BuildResult build(const ElementaryDivisorSpec& spec, Rng& rng);

/// Minimal polynomial of the spec'd matrix: prod_i f_i^{e_{i,1}}.
/// Requires explicit polynomials.
Poly spec_minpoly(const ElementaryDivisorSpec& spec);

/// First `len` terms of the projected sequence U A^k V (each b x b).
BlockSequence project_sequence(const BlackBoxMatrix& a, const Matrix& u,
                               const Matrix& v, std::size_t len);

/// Symmetric nonsingular P with C_f P = P C_f^T, built as
/// (-f_0) (+) Hankel(f_2,...,f_{d-1},1,0,...,0).  For f = x (the one
/// irreducible with f_0 = 0) the 1x1 identity is returned instead, which
/// satisfies the same relation.
Matrix hankel_transform(const Poly& f);

/// Regular representation of v in F_p[x]/<f>: sum_j v_j C_f^j.
Matrix regular_representation(const std::vector<Fel>& v, const Poly& f);

/// Krylov matrix (v, C_f v, ..., C_f^{d-1} v).
Matrix krylov_matrix(const std::vector<Fel>& v, const Poly& f);

/// All elementary-divisor structures of dimension exactly n over F_q,
/// instantiated with the lexicographically-first distinct irreducibles of
/// each degree.  Structures needing more distinct degree-d irreducibles
/// than exist are skipped.  Ground-truth driver for the small exhaustive
/// oracles.
std::vector<ElementaryDivisorSpec> enumerate_specs(std::uint64_t q, std::uint32_t n);

} // namespace blockproj

#endif
