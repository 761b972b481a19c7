#ifndef BLOCKPROJ_INTMATH_HPP
#define BLOCKPROJ_INTMATH_HPP

#include <cstdint>
#include <gmpxx.h>

namespace blockproj {

/// Moebius function: (-1)^k for squarefree a with k prime factors, else 0.
int mobius(std::uint64_t a);

/// Number of monic irreducible polynomials of degree m over a field of
/// size q, by the Moebius-inversion count  (1/m) * sum_{d|m} mu(m/d) q^d.
/// q is taken as a plain integer >= 2; see is_prime_power for validation.
mpz_class count_irreducibles(std::uint64_t q, std::uint32_t m);

/// True iff q = p^k for some prime p and k >= 1.
bool is_prime_power(std::uint64_t q);

} // namespace blockproj

#endif
