#include "jph/harmonic_kernel.hpp"

#include <algorithm>

namespace jph {

PrefixTable::PrefixTable(std::uint64_t prime, int precision, std::vector<PadicInt> table)
    : prime_(prime), precision_(precision), table_(std::move(table)) {
    if (table_.size() != prime_) throw UsageError("prefix table needs exactly p entries");
    by_residue_.reserve(table_.size());
    for (std::size_t k = 0; k < table_.size(); ++k)
        by_residue_.emplace_back(table_[k].digit0(), static_cast<std::uint32_t>(k));
    std::sort(by_residue_.begin(), by_residue_.end());
    for (const auto& [r, k] : by_residue_)
        if (residue_set_.empty() || residue_set_.back() != r) residue_set_.push_back(r);
}

bool PrefixTable::contains(std::uint64_t residue) const {
    return std::binary_search(residue_set_.begin(), residue_set_.end(), residue);
}

std::vector<std::uint32_t> PrefixTable::digits_with_residue(std::uint64_t residue) const {
    auto lo = std::lower_bound(by_residue_.begin(), by_residue_.end(), std::pair{residue, std::uint32_t{0}});
    std::vector<std::uint32_t> digits;
    for (; lo != by_residue_.end() && lo->first == residue; ++lo) digits.push_back(lo->second);
    return digits;
}

PrefixTable prefix_table(std::uint64_t p, int s) {
    if (p < 3) throw UsageError("prefix table needs an odd prime");
    std::vector<mpz_class> inverses(p - 1);
    for (std::uint64_t k = 1; k < p; ++k) inverses[k - 1] = k;
    raw::batch_inverse(inverses, p, s);

    std::vector<PadicInt> table;
    table.reserve(p);
    table.push_back(PadicInt::zero(p, s));
    const mpz_class& m = prime_power(p, s);
    mpz_class acc = 0;
    for (const auto& inv : inverses) {
        acc += inv;
        if (acc >= m) acc -= m;
        table.emplace_back(p, s, acc);
    }
    return {p, s, std::move(table)};
}

std::vector<PadicInt> restricted_sums(std::uint64_t p, int s, int count) {
    if (count < 1) throw UsageError("restricted_sums needs at least one term");
    const mpz_class& m = prime_power(p, s);
    std::vector<PadicInt> sums;
    sums.reserve(static_cast<std::size_t>(count));
    std::vector<mpz_class> block(p - 1);
    mpz_class acc = 0;
    for (int n = 1; n <= count; ++n) {
        const std::uint64_t start = p * static_cast<std::uint64_t>(n - 1);
        for (std::uint64_t j = 1; j < p; ++j) block[j - 1] = start + j;
        raw::batch_inverse(block, p, s);
        for (const auto& inv : block) acc += inv;
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), m.get_mpz_t());
        sums.emplace_back(p, s, acc);
    }
    return sums;
}

std::vector<PadicInt> block_walk(const PadicInt& base, const mpz_class& n_residue, std::uint32_t last_digit) {
    const std::uint64_t p = base.prime();
    const int r = base.precision();
    if (last_digit >= p) throw UsageError("block digit out of range");
    const mpz_class& m = prime_power(p, r);

    mpz_class pn = n_residue * p;
    mpz_mod(pn.get_mpz_t(), pn.get_mpz_t(), m.get_mpz_t());
    std::vector<mpz_class> terms(last_digit);
    for (std::uint32_t j = 1; j <= last_digit; ++j) {
        terms[j - 1] = pn + j;
        if (terms[j - 1] >= m) terms[j - 1] -= m;
    }
    raw::batch_inverse(terms, p, r);

    std::vector<PadicInt> entries;
    entries.reserve(last_digit + 1u);
    entries.push_back(base);
    mpz_class acc = base.residue();
    for (const auto& inv : terms) {
        acc += inv;
        if (acc >= m) acc -= m;
        entries.emplace_back(p, r, acc);
    }
    return entries;
}

}  // namespace jph
