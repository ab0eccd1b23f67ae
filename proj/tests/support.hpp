#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "jph/oracle.hpp"
#include "jph/padic.hpp"

namespace jph::test {

/// q mod p^s for a rational with denominator prime to p.
inline PadicInt rational_residue(const mpq_class& q, std::uint64_t p, int s) {
    const mpz_class& m = prime_power(p, s);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), m.get_mpz_t()) == 0) throw NonUnit("denominator divisible by p");
    return {p, s, mpz_class(q.get_num() * inv)};
}

/// H_n mod p^s from exact rationals; only for n whose H_n is p-integral.
inline PadicInt harmonic_residue(std::uint64_t n, std::uint64_t p, int s) {
    ExactHarmonic h;
    h.advance_to(n);
    return rational_residue(h.value(), p, s);
}

}  // namespace jph::test
