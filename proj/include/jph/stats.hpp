#pragma once

/// Aggregate tables over a directory of summaries.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jph/jp_enumerator.hpp"

namespace jph {

struct SummarySet {
    /// Sorted by prime.
    std::vector<JpSummary> summaries;
    /// Files that could not be used, with the reason.
    std::vector<std::pair<std::filesystem::path, std::string>> rejected;
};

/// Reads every "*.summary" file in `dir`. Corrupt files and duplicate primes
/// go to `rejected` instead of being skipped silently.
SummarySet load_summaries(const std::filesystem::path& dir);

/// `basis_points / 100` as "NN.NN", truncating.
std::string percent_truncated(std::uint64_t count, std::uint64_t total);

struct StatsTables {
    std::string distribution;
    std::string cardinality_plot;
    std::string extinction_plot;
    std::string valuation3;
    std::string parity;
    std::string consecutive_check;
    /// Primes whose valuation-3 blocks include two consecutive values.
    std::vector<std::uint64_t> adjacent_block_primes;
    /// Primes with a valuation-3 member n where v_p(H_{pn}) >= 3 as well.
    std::vector<std::uint64_t> chain_primes;
    /// Incomplete summaries left out of the complete-only tables.
    std::vector<std::uint64_t> incomplete_primes;
};

/// Distribution and plot tables use complete summaries only.
StatsTables build_stats(const std::vector<JpSummary>& summaries);

/// File name to contents, as written by `jph stats`.
std::map<std::string, std::string> stats_files(const StatsTables& tables);

}  // namespace jph
