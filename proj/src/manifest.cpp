#include "jph/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#ifndef JPH_VERSION
#define JPH_VERSION "unknown"
#endif

namespace jph {

const char* code_version() { return JPH_VERSION; }

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["format"] = "jph-manifest 1";
    j["command"] = m.command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    j["parameters"] = params;
    j["code_version"] = code_version();
    j["started"] = utc_timestamp(m.started);
    j["finished"] = utc_timestamp(m.finished);
    j["input_checkpoint"] = m.input_checkpoint ? nlohmann::ordered_json(m.input_checkpoint->string()) : nullptr;
    nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
    for (const auto& p : m.outputs) outputs.push_back(p.string());
    j["outputs"] = outputs;
    j["exit_code"] = m.exit_code;
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest " + path.string());
    out << to_json(manifest);
    if (!out.flush()) throw std::runtime_error("write failed for manifest " + path.string());
}

}  // namespace jph
