#ifndef BLOCKPROJ_POLY_HPP
#define BLOCKPROJ_POLY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "field.hpp"
#include "rng.hpp"

namespace blockproj {

// Dense univariate polynomial over F_p.  Coefficients ascending by degree,
// never a trailing zero: coeffs empty <=> zero polynomial, degree() == -1.
class Poly {
public:
    explicit Poly(PrimeField f) : field_(f) {}
    Poly(PrimeField f, std::vector<Fel> coeffs);

    static Poly zero(PrimeField f) { return Poly(f); }
    static Poly one(PrimeField f) { return Poly(f, {1}); }
    static Poly x(PrimeField f) { return Poly(f, {0, 1}); }

    const PrimeField& field() const noexcept { return field_; }
    const std::vector<Fel>& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_one() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 1; }
    bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }
    Fel coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
    Fel leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }

    bool operator==(const Poly& o) const {
        return field_ == o.field_ && coeffs_ == o.coeffs_;
    }

    Poly add(const Poly& g) const;
    Poly sub(const Poly& g) const;
    Poly mul(const Poly& g) const;
    Poly scale(Fel c) const;
    Poly shift(std::size_t k) const; // multiply by x^k
    /// Remainder of *this by g; throws division_by_zero if g == 0.
    Poly rem(const Poly& g) const;
    /// Quotient and remainder in one pass.
    std::pair<Poly, Poly> divmod(const Poly& g) const;
    /// Monic normalization (zero stays zero).
    Poly monic() const;
    Poly pow(std::uint64_t e) const;
    /// Modular exponentiation: (*this)^e mod m.
    Poly powmod(mpz_srcptr e, const Poly& m) const;
    Poly powmod_u64(std::uint64_t e, const Poly& m) const;

    Fel eval(Fel x) const;

    std::string to_string() const;   // human form, e.g. "x^2+3x+6"
    std::string to_coeff_list() const; // ascending CSV, e.g. "6,3,1"

private:
    void trim();
    PrimeField field_;
    std::vector<Fel> coeffs_;
};

/// Monic gcd (gcd(0,0) = 0).
Poly gcd(const Poly& f, const Poly& g);
/// Monic lcm; lcm(f,g)*gcd(f,g) == f*g up to a unit.
Poly lcm(const Poly& f, const Poly& g);

/// Irreducibility over F_p by the Frobenius power criterion:
/// x^(p^d) == x (mod f) together with gcd(x^(p^(d/l)) - x, f) = 1 for each
/// prime l | d.  Deterministic; requires deg f >= 1.
bool is_irreducible(const Poly& f);

/// All monic irreducibles of degree exactly d, ordered by the integer
/// encoding sum_j f_j p^j of their non-leading coefficients.
/// Guarded by candidate_limit (number of candidates p^d).
std::vector<Poly> enumerate_irreducibles(PrimeField field, std::uint32_t d,
                                         std::uint64_t candidate_limit = (1ull << 20));

/// Rejection-sampled monic irreducible of degree d (expected O(d) attempts).
Poly random_irreducible(Rng& rng, PrimeField field, std::uint32_t d);

/// Parse "6,3,1" (ascending coefficients) or "x^2+3x+6"; coefficients are
/// reduced mod p.  Throws parse_error on malformed input.
Poly parse_poly(PrimeField field, const std::string& text);

// Finite prefix of a linearly recurrent scalar sequence.
struct ScalarSequence {
    PrimeField field;
    std::vector<Fel> terms;

    ScalarSequence(PrimeField f, std::vector<Fel> t)
        : field(f), terms(std::move(t)) {}

    bool is_zero() const {
        for (Fel v : terms)
            if (v != 0) return false;
        return true;
    }
};

/// The sequence action: term k of f(S) is sum_i f_i S_{i+k}, for
/// k = 0 .. len(S) - deg f - 1.  Requires len(S) >= deg f + 1.
/// f == 0 yields the all-zero sequence of the same length as S.
ScalarSequence apply_poly_to_sequence(const Poly& f, const ScalarSequence& s);

/// Minimal generating polynomial of (the infinite extension of) S, by
/// Berlekamp-Massey.  Correct whenever len(S) >= 2 * deg(answer); always
/// returns the current best monic candidate.
Poly berlekamp_massey(const ScalarSequence& s);

// Sequence of b x b projected matrices (terms-major storage).
struct BlockSequence {
    std::vector<Matrix> terms;

    std::size_t block_size() const { return terms.empty() ? 0 : terms[0].rows; }
    std::size_t length() const { return terms.size(); }
    ScalarSequence entry(std::size_t i, std::size_t j) const;
};

/// Minimal generating polynomial of a block sequence: the monic lcm of the
/// b^2 entrywise Berlekamp-Massey results.
Poly minpoly_block_sequence(const BlockSequence& b, PrimeField field);

} // namespace blockproj

#endif
