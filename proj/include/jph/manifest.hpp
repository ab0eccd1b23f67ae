#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jph {

/// Version string compiled into the library.
const char* code_version();

/// Record of one CLI invocation, written next to its outputs.
struct RunManifest {
    std::string command;
    /// Flag name and value, in the order given.
    std::vector<std::pair<std::string, std::string>> parameters;
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;
    std::optional<std::filesystem::path> input_checkpoint;
    std::vector<std::filesystem::path> outputs;
    int exit_code = 0;
};

std::string to_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

/// ISO 8601, UTC, second resolution.
std::string utc_timestamp(std::chrono::system_clock::time_point t);

}  // namespace jph
