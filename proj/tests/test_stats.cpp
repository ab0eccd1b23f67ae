#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "doctest.h"
#include "jph/manifest.hpp"
#include "jph/stats.hpp"
#include "jph/summary_io.hpp"

namespace fs = std::filesystem;

namespace {

jph::JpSummary run(std::uint64_t p) {
    jph::EnumerationConfig config;
    return jph::enumerate_jp(p, config);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("jph_stats_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_CASE("summary round trip") {
    const auto s = run(11);
    CHECK(s.cardinality == 638);
    CHECK(s.extinction_time == 30);
    const std::string text = jph::format_summary(s);
    CHECK(text.rfind("jph-summary 1\nprime 11\ncomplete 1\n", 0) == 0);
    CHECK(jph::parse_summary(text) == s);
    CHECK(jph::format_summary(jph::parse_summary(text)) == text);
}

TEST_CASE("summary corruption is rejected") {
    const std::string good = jph::format_summary(run(7));
    auto replace = [&](const std::string& from, const std::string& to) {
        std::string t = good;
        const auto pos = t.find(from);
        REQUIRE(pos != std::string::npos);
        t.replace(pos, from.size(), to);
        return t;
    };
    CHECK_THROWS_AS(jph::parse_summary(""), jph::SummaryError);
    CHECK_THROWS_AS(jph::parse_summary(good.substr(0, good.size() - 4)), jph::SummaryError);
    CHECK_THROWS_AS(jph::parse_summary(replace("jph-summary 1", "jph-summary 9")), jph::SummaryError);
    CHECK_THROWS_AS(jph::parse_summary(replace("cardinality 13", "cardinality 14")), jph::SummaryError);
    CHECK_THROWS_AS(jph::parse_summary(replace("complete 1", "complete x")), jph::SummaryError);
    CHECK_THROWS_AS(jph::parse_summary(good + "extra\n"), jph::SummaryError);
}

TEST_CASE("element writer") {
    std::ostringstream out;
    jph::ElementWriter w(out, 5);
    w({4}, {2, false});
    w({4, 0}, {1, false});
    w({4, 4}, {4, true});
    CHECK(out.str() == "jph-elements 1\n4 2\n20 1\n24 >=4\n");
}

TEST_CASE("percent truncation") {
    CHECK(jph::percent_truncated(706, 1942) == "36.35");
    CHECK(jph::percent_truncated(2, 3) == "66.66");
    CHECK(jph::percent_truncated(1, 1) == "100.00");
    CHECK(jph::percent_truncated(0, 0) == "0.00");
}

TEST_CASE("stats tables") {
    std::vector<jph::JpSummary> summaries{run(3), run(5), run(7), run(11), run(13)};
    jph::EnumerationConfig partial;
    partial.max_levels = 1;
    summaries.push_back(jph::enumerate_jp(17, partial));
    REQUIRE_FALSE(summaries.back().complete);

    const auto t = jph::build_stats(summaries);
    CHECK(t.incomplete_primes == std::vector<std::uint64_t>{17});
    CHECK(t.distribution.rfind("# jph-distribution 1\ncardinality,primes,percent\n", 0) == 0);
    CHECK(t.distribution.find("\n3,3,60.00\n") != std::string::npos);
    CHECK(t.distribution.find("\n13,1,20.00\n") != std::string::npos);
    CHECK(t.distribution.find("\n638,1,20.00\n") != std::string::npos);
    CHECK(t.cardinality_plot.find("\n3,3,1.000000\n") != std::string::npos);
    CHECK(t.parity.find("\ntotal,5,1,4\n") != std::string::npos);
    // p = 11 has valuation-3 members at 848 (block 3) among others.
    CHECK(t.valuation3.find("\n11,3,848\n") != std::string::npos);
    CHECK(t.consecutive_check.find("\n11,") != std::string::npos);
    CHECK(jph::stats_files(t).size() == 6);
}

TEST_CASE("load summaries") {
    TempDir dir("load");
    CHECK(jph::load_summaries(dir.path).summaries.empty());
    jph::write_summary(dir.path / "p5.summary", run(5));
    jph::write_summary(dir.path / "p7.summary", run(7));
    fs::copy_file(dir.path / "p5.summary", dir.path / "p5_again.summary");
    write_text(dir.path / "bad.summary", "jph-summary 1\nprime 3\n");
    write_text(dir.path / "notes.txt", "ignored");
    const auto set = jph::load_summaries(dir.path);
    REQUIRE(set.summaries.size() == 2);
    CHECK(set.summaries[0].prime == 5);
    CHECK(set.summaries[1].prime == 7);
    REQUIRE(set.rejected.size() == 2);
    CHECK(set.rejected[0].first.filename() == "bad.summary");
    CHECK(set.rejected[1].first.filename() == "p5_again.summary");
    CHECK_THROWS_AS(jph::read_summary(dir.path / "missing.summary"), jph::SummaryError);
}

TEST_CASE("manifest json") {
    jph::RunManifest m;
    m.command = "census";
    m.parameters = {{"from", "5"}, {"to", "100"}};
    m.started = m.finished = std::chrono::system_clock::time_point{};
    m.outputs = {"out/census.csv"};
    const auto j = nlohmann::json::parse(jph::to_json(m));
    CHECK(j["format"] == "jph-manifest 1");
    CHECK(j["command"] == "census");
    CHECK(j["parameters"]["to"] == "100");
    CHECK(j["started"] == "1970-01-01T00:00:00Z");
    CHECK(j["exit_code"] == 0);
    CHECK(j["input_checkpoint"].is_null());
    CHECK(j["code_version"] == jph::code_version());
}
