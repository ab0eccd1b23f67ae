#pragma once

/// Line-oriented checkpoint files for long enumerations.
///
/// Layout (one record per line, space separated):
///
///     jph-checkpoint 1
///     header <prime> <terms> <effective_precision> <completed_blocks> <depth> <level> <input_precision> <loss>
///     gamma <k> <precision> <hex>                          (k = 1..terms)
///     blocks <|J_{p,1}|> ... <|J_{p,level}|>
///     histogram <v=1> <v=2> <v=3> <v>=4>
///     val3 <digits>                                        (0 or more)
///     high <value> <saturated> <digits>                    (0 or more)
///     counters <restarts> <spine_nodes> <consistency_checks> <expanded>
///     node <precision> <valuation> <saturated> <hex> <digits>   (frontier)
///     end <number of records above, excluding the version line>
///
/// Digits are comma separated decimals, most significant first.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "jph/jp_enumerator.hpp"

namespace jph {

inline constexpr int checkpoint_format_version = 1;

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_checkpoint(const EnumerationState& state);
/// Throws CheckpointError on any malformed or inconsistent content.
EnumerationState parse_checkpoint(const std::string& text);

/// Writes through a temporary file and renames, so a crash never leaves a torn file.
void save_checkpoint(const std::filesystem::path& path, const EnumerationState& state);
EnumerationState load_checkpoint(const std::filesystem::path& path);

std::string format_digits(const DigitPath& path);
DigitPath parse_digits(const std::string& text, std::uint64_t p);

}  // namespace jph
