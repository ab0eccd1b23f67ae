#pragma once

/// Brute-force harmonic numbers as exact fractions. Deliberately small-scale:
/// the reference that the p-adic machinery is checked against.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace jph {

inline constexpr std::uint64_t default_oracle_bound = 100000;

class OracleBoundExceeded : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Running H_n = num/den. The fraction is left unreduced between steps and
/// reduced every 64 steps and whenever it is read.
class ExactHarmonic {
public:
    explicit ExactHarmonic(std::uint64_t bound = default_oracle_bound) : bound_(bound) {}

    std::uint64_t n() const noexcept { return n_; }
    /// Advances to H_{n+1}.
    void step();
    /// Advances to H_target (target >= n()).
    void advance_to(std::uint64_t target);

    /// Lowest terms, denominator positive.
    const mpz_class& numerator();
    const mpz_class& denominator();
    mpq_class value();

    /// v_p(H_n); H_0 = 0 has no valuation and throws.
    int valuation(std::uint64_t p);

private:
    void reduce();

    std::uint64_t bound_;
    std::uint64_t n_ = 0;
    mpz_class num_ = 0;
    mpz_class den_ = 1;
    bool reduced_ = true;
};

/// v_p(H_n) for 1 <= n <= bound.
int exact_valuation(std::uint64_t p, std::uint64_t n, std::uint64_t bound = default_oracle_bound);

/// Every n <= xmax with v_p(H_n) >= 1, with its valuation, ascending.
std::vector<std::pair<std::uint64_t, int>> naive_jp(std::uint64_t p, std::uint64_t xmax,
                                                    std::uint64_t bound = default_oracle_bound);

}  // namespace jph
