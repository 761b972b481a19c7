#include "field.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace blockproj {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((__uint128_t{a} * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Bases 2,3,5,7,11,13 are a deterministic witness set for n < 3.2e9
    // (covers the full p < 2^31 domain with margin).
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
    if (p < 2 || p >= (1ull << 31))
        fail(ErrorCode::invalid_argument,
             "field modulus must satisfy 2 <= p < 2^31, got " + std::to_string(p));
    if (!is_prime_u64(p))
        fail(ErrorCode::not_prime, "field modulus " + std::to_string(p) + " is not prime");
}

Fel PrimeField::pow(Fel a, std::uint64_t e) const {
    return static_cast<Fel>(powmod_u64(a, e, p_));
}

Fel PrimeField::inv(Fel a) const {
    if (a == 0)
        fail(ErrorCode::division_by_zero, "inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
}

Matrix Matrix::identity(PrimeField f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

Matrix Matrix::mul(const Matrix& rhs) const {
    if (cols != rhs.rows || !(field == rhs.field))
        fail(ErrorCode::dimension_mismatch, "matrix product shape mismatch");
    Matrix out(field, rows, rhs.cols);
    const std::uint64_t p = field.p();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < cols; ++k) {
            const std::uint64_t v = at(i, k);
            if (v == 0) continue;
            for (std::size_t j = 0; j < rhs.cols; ++j) {
                out.at(i, j) = static_cast<Fel>((out.at(i, j) + v * rhs.at(k, j)) % p);
            }
        }
    }
    return out;
}

Matrix Matrix::add(const Matrix& rhs) const {
    if (rows != rhs.rows || cols != rhs.cols || !(field == rhs.field))
        fail(ErrorCode::dimension_mismatch, "matrix sum shape mismatch");
    Matrix out(field, rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        out.a[i] = field.add(a[i], rhs.a[i]);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(field, cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            out.at(j, i) = at(i, j);
    return out;
}

bool Matrix::is_zero() const {
    for (Fel v : a)
        if (v != 0) return false;
    return true;
}

std::size_t Matrix::rank() const {
    Matrix m = *this;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t pivot = r;
        while (pivot < rows && m.at(pivot, col) == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap_ranges(m.a.begin() + static_cast<std::ptrdiff_t>(r * cols),
                         m.a.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols),
                         m.a.begin() + static_cast<std::ptrdiff_t>(pivot * cols));
        const Fel piv_inv = field.inv(m.at(r, col));
        for (std::size_t i = r + 1; i < rows; ++i) {
            const Fel factor = field.mul(m.at(i, col), piv_inv);
            if (factor == 0) continue;
            for (std::size_t j = col; j < cols; ++j)
                m.at(i, j) = field.sub(m.at(i, j), field.mul(factor, m.at(r, j)));
        }
        ++r;
    }
    return r;
}

Matrix Matrix::inverse() const {
    if (rows != cols)
        fail(ErrorCode::invalid_argument, "inverse of non-square matrix");
    const std::size_t n = rows;
    Matrix m = *this;
    Matrix inv = identity(field, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m.at(pivot, col) == 0) ++pivot;
        if (pivot == n)
            fail(ErrorCode::invalid_argument, "matrix is singular");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(m.at(col, j), m.at(pivot, j));
            std::swap(inv.at(col, j), inv.at(pivot, j));
        }
        const Fel piv_inv = field.inv(m.at(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            m.at(col, j) = field.mul(m.at(col, j), piv_inv);
            inv.at(col, j) = field.mul(inv.at(col, j), piv_inv);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            const Fel factor = m.at(i, col);
            if (factor == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m.at(i, j) = field.sub(m.at(i, j), field.mul(factor, m.at(col, j)));
                inv.at(i, j) = field.sub(inv.at(i, j), field.mul(factor, inv.at(col, j)));
            }
        }
    }
    return inv;
}

Matrix random_matrix(Rng& rng, PrimeField field, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0)
        fail(ErrorCode::invalid_argument, "random_matrix requires rows, cols >= 1");
    Matrix m(field, rows, cols);
    for (Fel& v : m.a)
        v = field.sample(rng);
    return m;
}

} // namespace blockproj
