#ifndef BLOCKPROJ_FIELD_HPP
#define BLOCKPROJ_FIELD_HPP

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace blockproj {

/// Canonical residue in [0, p).  All field routines keep this invariant.
using Fel = std::uint32_t;

// Arithmetic in F_p for prime p, 2 <= p < 2^31.  The bound keeps every
// product below 2^62, so the hot loops stay in plain 64-bit integers.
class PrimeField {
public:
    /// Throws ErrorCode::not_prime unless p is a prime in [2, 2^31).
    explicit PrimeField(std::uint64_t p);

    std::uint64_t p() const noexcept { return p_; }

    Fel add(Fel a, Fel b) const {
        std::uint64_t s = std::uint64_t{a} + b;
        if (s >= p_) s -= p_;
        return static_cast<Fel>(s);
    }
    Fel sub(Fel a, Fel b) const {
        return a >= b ? a - b : static_cast<Fel>(a + p_ - b);
    }
    Fel neg(Fel a) const { return a == 0 ? 0 : static_cast<Fel>(p_ - a); }
    Fel mul(Fel a, Fel b) const {
        return static_cast<Fel>((std::uint64_t{a} * b) % p_);
    }
    Fel pow(Fel a, std::uint64_t e) const;
    /// Throws ErrorCode::division_by_zero on inv(0).
    Fel inv(Fel a) const;

    Fel reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0) r += static_cast<std::int64_t>(p_);
        return static_cast<Fel>(r);
    }

    /// Uniform element via the rng's rejection sampler.
    Fel sample(Rng& rng) const {
        return static_cast<Fel>(rng.uniform_below(p_));
    }

    bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

private:
    std::uint64_t p_;
};

/// Deterministic Miller-Rabin, exact for all n < 2^32.
bool is_prime_u64(std::uint64_t n);

// Dense row-major matrix over F_p.  Used as the projection blocks U, V and
// as the dense side of structural checks in tests; black-box application
// lives in jordan.
struct Matrix {
    PrimeField field;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Fel> a;

    Matrix(PrimeField f, std::size_t r, std::size_t c)
        : field(f), rows(r), cols(c), a(r * c, 0) {}

    Fel& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    Fel at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool operator==(const Matrix& o) const {
        return field == o.field && rows == o.rows && cols == o.cols && a == o.a;
    }

    static Matrix identity(PrimeField f, std::size_t n);
    Matrix mul(const Matrix& rhs) const;
    Matrix add(const Matrix& rhs) const;
    Matrix transpose() const;
    bool is_zero() const;

    /// Rank by Gaussian elimination (exact).
    std::size_t rank() const;
    /// Inverse of a square nonsingular matrix; throws invalid_argument otherwise.
    Matrix inverse() const;
};

/// Uniform rows x cols matrix, entries independent.  rows, cols >= 1.
Matrix random_matrix(Rng& rng, PrimeField field, std::size_t rows, std::size_t cols);

} // namespace blockproj

#endif
