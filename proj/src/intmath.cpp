#include "intmath.hpp"

#include <string>

#include "errors.hpp"
#include "field.hpp"

namespace blockproj {

int mobius(std::uint64_t a) {
    if (a == 0)
        fail(ErrorCode::invalid_argument, "mobius(0) is undefined");
    int k = 0;
    for (std::uint64_t p = 2; p * p <= a; ++p) {
        if (a % p == 0) {
            a /= p;
            if (a % p == 0) return 0; // square factor
            ++k;
        }
    }
    if (a > 1) ++k;
    return (k % 2 == 0) ? 1 : -1;
}

mpz_class count_irreducibles(std::uint64_t q, std::uint32_t m) {
    if (q < 2)
        fail(ErrorCode::invalid_argument, "field size must be >= 2");
    if (m < 1)
        fail(ErrorCode::invalid_argument, "degree must be >= 1");
    mpz_class sum = 0;
    mpz_class qz(std::to_string(q));
    for (std::uint32_t d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        int mu = mobius(m / d);
        if (mu == 0) continue;
        mpz_class term;
        mpz_pow_ui(term.get_mpz_t(), qz.get_mpz_t(), d);
        sum += mu * term;
    }
    mpz_class out = sum / m;
    return out;
}

bool is_prime_power(std::uint64_t q) {
    if (q < 2) return false;
    // Smallest prime factor must account for all of q.
    std::uint64_t p = q;
    for (std::uint64_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) { p = d; break; }
    }
    while (q % p == 0) q /= p;
    return q == 1;
}

} // namespace blockproj
