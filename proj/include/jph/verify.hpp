#pragma once

/// Enumerator against the exact-rational oracle on [1, xmax].

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jph/jp_enumerator.hpp"
#include "jph/oracle.hpp"

namespace jph {

struct ValuationMismatch {
    std::uint64_t n;
    int oracle;
    Valuation enumerated;
};

struct VerifyReport {
    std::uint64_t prime = 0;
    std::uint64_t xmax = 0;
    std::vector<std::pair<std::uint64_t, int>> oracle;
    std::vector<std::pair<std::uint64_t, Valuation>> enumerated;
    /// Members the oracle found and the enumerator did not, and the reverse.
    std::vector<std::uint64_t> missing;
    std::vector<std::uint64_t> extra;
    std::vector<ValuationMismatch> valuation_mismatches;
    /// Set when the enumerator itself failed (e.g. a broken consistency check).
    std::string enumerator_error;

    bool passed() const {
        return missing.empty() && extra.empty() && valuation_mismatches.empty() && enumerator_error.empty();
    }
};

/// Enumerates only the levels that reach xmax. `hook` tampers with the series (negative controls).
VerifyReport verify_against_oracle(std::uint64_t p, std::uint64_t xmax, const SeriesHook& hook = {},
                                   std::uint64_t oracle_bound = default_oracle_bound);

/// Human-readable report, one finding per line.
std::string describe(const VerifyReport& report);

}  // namespace jph
