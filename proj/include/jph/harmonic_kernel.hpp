#pragma once

/// Harmonic-number residues in bulk.
///
/// Everything here works with residues modulo p^s of
///   H_k           for 0 <= k < p           (prefix table),
///   H*_{pn}       = sum of 1/j over j <= pn, p not dividing j  (restricted sums),
///   H_{pn+k}      for one block, starting from H_{pn}           (block walk).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "jph/padic.hpp"

namespace jph {

class PrefixTable {
public:
    PrefixTable(std::uint64_t prime, int precision, std::vector<PadicInt> table);

    std::uint64_t prime() const noexcept { return prime_; }
    int precision() const noexcept { return precision_; }
    /// H_k for k = 0..p-1.
    const std::vector<PadicInt>& table() const noexcept { return table_; }
    const PadicInt& operator[](std::size_t k) const { return table_[k]; }

    /// The residue set R = {H_k mod p}, sorted, duplicates removed.
    const std::vector<std::uint64_t>& residue_set() const noexcept { return residue_set_; }
    bool contains(std::uint64_t residue) const;

    /// Digits k in [0, p-1] with H_k = residue (mod p), ascending.
    std::vector<std::uint32_t> digits_with_residue(std::uint64_t residue) const;

private:
    std::uint64_t prime_;
    int precision_;
    std::vector<PadicInt> table_;
    std::vector<std::uint64_t> residue_set_;
    // (H_k mod p, k) sorted
    std::vector<std::pair<std::uint64_t, std::uint32_t>> by_residue_;
};

/// H_0..H_{p-1} modulo p^s from one batch inversion of 1..p-1.
PrefixTable prefix_table(std::uint64_t p, int s);

/// b_1..b_N where b_n = H*_{pn} mod p^s; element n-1 holds b_n.
std::vector<PadicInt> restricted_sums(std::uint64_t p, int s, int count);

/// Entries k = 0..last_digit of the block starting at pn: entry k is H_{pn+k}
/// mod p^r, given `base` = H_{pn} at precision r and n known modulo p^r.
std::vector<PadicInt> block_walk(const PadicInt& base, const mpz_class& n_residue, std::uint32_t last_digit);

/// Full block, k = 0..p-1.
inline std::vector<PadicInt> block_walk(const PadicInt& base, const mpz_class& n_residue) {
    return block_walk(base, n_residue, static_cast<std::uint32_t>(base.prime() - 1));
}

}  // namespace jph
