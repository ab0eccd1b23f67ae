#pragma once

/// Per-prime summary and element-list files.
///
///     jph-summary 1
///     prime 11
///     complete 1
///     stop complete
///     cardinality 638
///     extinction_time 30
///     last_nonempty_block 29
///     depth 32
///     series_terms 19
///     restarts 1
///     spine_nodes 17
///     consistency_checks 7150
///     unclassified 0
///     blocks 1 2 ...
///     valuation_histogram 578 56 4 0
///     valuation3_blocks 3 4 4 18
///     valuation3 <digits>                    (one per valuation-3 member)
///     high <value> <saturated> <digits>      (0 or more)
///     end

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "jph/jp_enumerator.hpp"

namespace jph {

inline constexpr int summary_format_version = 1;

class SummaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_summary(const JpSummary& summary);
/// Throws SummaryError on malformed text or internally inconsistent totals.
JpSummary parse_summary(const std::string& text);

void write_summary(const std::filesystem::path& path, const JpSummary& summary);
JpSummary read_summary(const std::filesystem::path& path);

/// Streams "jph-elements 1" then "<n> <valuation>" lines; a saturated
/// valuation is written as ">=v".
class ElementWriter {
public:
    ElementWriter(std::ostream& out, std::uint64_t p);
    void operator()(const DigitPath& path, const Valuation& val);

private:
    std::ostream& out_;
    std::uint64_t p_;
};

}  // namespace jph
