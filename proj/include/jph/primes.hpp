#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace jph {

/// Deterministic for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Calls `visit` on every prime in [lo, hi], ascending. Memory stays bounded
/// by the segment size regardless of the range.
void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& visit,
                    std::uint64_t segment = 1 << 18);

/// Primes in [lo, hi].
std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi);

}  // namespace jph
