#include "jph/primes.hpp"

#include <algorithm>
#include <cmath>

namespace jph {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    base %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::uint32_t> small_primes_upto(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int twos = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++twos;
    }
    // These bases are a deterministic witness set below 2^64.
    for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < twos && witness; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) witness = false;
        }
        if (witness) return false;
    }
    return true;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& visit,
                    std::uint64_t segment) {
    if (hi < 2 || lo > hi) return;
    lo = std::max<std::uint64_t>(lo, 2);
    const auto base = small_primes_upto(isqrt(hi));
    std::vector<std::uint8_t> marks;
    for (std::uint64_t start = lo; start <= hi;) {
        const std::uint64_t end = std::min(hi, start + segment - 1);
        marks.assign(end - start + 1, 1);
        for (std::uint64_t q : base) {
            if (q * q > end) break;
            std::uint64_t first = std::max(q * q, (start + q - 1) / q * q);
            for (std::uint64_t j = first; j <= end; j += q) marks[j - start] = 0;
        }
        for (std::uint64_t i = 0; i < marks.size(); ++i)
            if (marks[i]) visit(start + i);
        if (end == hi) break;
        start = end + 1;
    }
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for_each_prime(lo, hi, [&](std::uint64_t q) { out.push_back(q); });
    return out;
}

}  // namespace jph
