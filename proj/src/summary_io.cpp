#include "jph/summary_io.hpp"

#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "jph/checkpoint.hpp"

namespace jph {

namespace {

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; in >> f;) out.push_back(f);
    return out;
}

std::uint64_t number(const std::string& s, const std::string& what) {
    if (s.empty() || s.size() > 19 || s.find_first_not_of("0123456789") != std::string::npos ||
        (s.size() > 1 && s[0] == '0'))
        throw SummaryError("bad " + what + " value '" + s + "'");
    return std::stoull(s);
}

StopReason stop_reason(const std::string& s) {
    for (auto r : {StopReason::complete, StopReason::depth_budget, StopReason::time_budget, StopReason::level_budget})
        if (s == to_string(r)) return r;
    throw SummaryError("unknown stop reason '" + s + "'");
}

}  // namespace

std::string format_summary(const JpSummary& s) {
    std::ostringstream out;
    auto list = [&](const char* key, const auto& values) {
        out << key;
        for (const auto& v : values) out << ' ' << v;
        out << '\n';
    };
    out << "jph-summary " << summary_format_version << '\n';
    out << "prime " << s.prime << '\n';
    out << "complete " << (s.complete ? 1 : 0) << '\n';
    out << "stop " << to_string(s.stop) << '\n';
    out << "cardinality " << s.cardinality << '\n';
    out << "extinction_time " << s.extinction_time << '\n';
    out << "last_nonempty_block " << s.last_nonempty_block << '\n';
    out << "depth " << s.depth << '\n';
    out << "series_terms " << s.series_terms << '\n';
    out << "restarts " << s.restarts << '\n';
    out << "spine_nodes " << s.spine_nodes << '\n';
    out << "consistency_checks " << s.consistency_checks << '\n';
    out << "unclassified " << s.unclassified << '\n';
    list("blocks", s.block_sizes);
    list("valuation_histogram", s.valuation_histogram);
    list("valuation3_blocks", s.valuation3_blocks);
    for (const auto& path : s.valuation3_members) out << "valuation3 " << format_digits(path) << '\n';
    for (const auto& h : s.high_valuations)
        out << "high " << h.val.value << ' ' << (h.val.saturated ? 1 : 0) << ' ' << format_digits(h.path) << '\n';
    out << "end\n";
    return out.str();
}

JpSummary parse_summary(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next = [&](const char* key) {
        if (!std::getline(in, line)) throw SummaryError(std::string("truncated summary: missing '") + key + "'");
        auto f = fields_of(line);
        if (f.empty() || f[0] != key) throw SummaryError(std::string("expected '") + key + "', got '" + line + "'");
        f.erase(f.begin());
        return f;
    };
    auto scalar = [&](const char* key) {
        auto f = next(key);
        if (f.size() != 1) throw SummaryError(std::string("'") + key + "' takes one value");
        return number(f[0], key);
    };

    {
        auto f = next("jph-summary");
        if (f.size() != 1 || f[0] != std::to_string(summary_format_version))
            throw SummaryError("unsupported summary version");
    }
    JpSummary s;
    s.prime = scalar("prime");
    const auto complete = scalar("complete");
    if (complete > 1) throw SummaryError("complete must be 0 or 1");
    s.complete = complete == 1;
    {
        auto f = next("stop");
        if (f.size() != 1) throw SummaryError("'stop' takes one value");
        s.stop = stop_reason(f[0]);
    }
    s.cardinality = scalar("cardinality");
    s.extinction_time = static_cast<int>(scalar("extinction_time"));
    s.last_nonempty_block = static_cast<int>(scalar("last_nonempty_block"));
    s.depth = static_cast<int>(scalar("depth"));
    s.series_terms = static_cast<int>(scalar("series_terms"));
    s.restarts = static_cast<int>(scalar("restarts"));
    s.spine_nodes = scalar("spine_nodes");
    s.consistency_checks = scalar("consistency_checks");
    s.unclassified = scalar("unclassified");
    for (const auto& v : next("blocks")) s.block_sizes.push_back(number(v, "block size"));
    {
        auto f = next("valuation_histogram");
        if (f.size() != 4) throw SummaryError("valuation_histogram needs four counts");
        for (std::size_t i = 0; i < 4; ++i) s.valuation_histogram[i] = number(f[i], "histogram");
    }
    for (const auto& v : next("valuation3_blocks")) s.valuation3_blocks.push_back(static_cast<int>(number(v, "block")));
    auto digits = [&](const std::string& text) {
        try {
            return parse_digits(text, s.prime);
        } catch (const CheckpointError& e) {
            throw SummaryError(e.what());
        }
    };
    while (std::getline(in, line)) {
        auto f = fields_of(line);
        if (f.size() == 1 && f[0] == "end") break;
        if (f.size() == 2 && f[0] == "valuation3") {
            s.valuation3_members.push_back(digits(f[1]));
        } else if (f.size() == 4 && f[0] == "high") {
            const auto sat = number(f[2], "saturated");
            if (sat > 1) throw SummaryError("saturated must be 0 or 1");
            s.high_valuations.push_back({digits(f[3]), {static_cast<int>(number(f[1], "valuation")), sat == 1}});
        } else {
            throw SummaryError("unexpected line '" + line + "'");
        }
        line.clear();
    }
    if (fields_of(line) != std::vector<std::string>{"end"}) throw SummaryError("truncated summary: missing 'end'");
    for (std::string rest; std::getline(in, rest);)
        if (!rest.empty()) throw SummaryError("trailing data after 'end'");

    // Totals must agree with each other; a hand-edited or torn file fails here.
    if (s.prime < 3) throw SummaryError("prime out of range");
    if (s.complete != (s.stop == StopReason::complete)) throw SummaryError("complete flag disagrees with stop reason");
    const auto total = std::accumulate(s.block_sizes.begin(), s.block_sizes.end(), std::uint64_t{0});
    if (total != s.cardinality) throw SummaryError("cardinality is not the sum of block sizes");
    if (static_cast<std::size_t>(s.last_nonempty_block) != s.block_sizes.size())
        throw SummaryError("last_nonempty_block disagrees with the block list");
    if (s.extinction_time != s.last_nonempty_block + 1) throw SummaryError("extinction_time disagrees with the block list");
    const auto classified = std::accumulate(s.valuation_histogram.begin(), s.valuation_histogram.end(), std::uint64_t{0});
    if (classified + s.unclassified != s.cardinality) throw SummaryError("valuation histogram does not cover every member");
    if (s.valuation3_blocks.size() > s.valuation_histogram[2]) throw SummaryError("more valuation-3 blocks than members");
    if (s.valuation3_members.size() != s.valuation3_blocks.size())
        throw SummaryError("valuation-3 members disagree with their block list");
    for (std::size_t i = 0; i < s.valuation3_members.size(); ++i)
        if (static_cast<int>(s.valuation3_members[i].size()) != s.valuation3_blocks[i])
            throw SummaryError("valuation-3 member lies outside its listed block");
    return s;
}

void write_summary(const std::filesystem::path& path, const JpSummary& summary) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SummaryError("cannot write " + path.string());
    out << format_summary(summary);
    if (!out.flush()) throw SummaryError("write failed for " + path.string());
}

JpSummary read_summary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SummaryError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_summary(buffer.str());
}

ElementWriter::ElementWriter(std::ostream& out, std::uint64_t p) : out_(out), p_(p) { out_ << "jph-elements 1\n"; }

void ElementWriter::operator()(const DigitPath& path, const Valuation& val) {
    out_ << path_value(path, p_).get_str() << ' ' << (val.saturated ? ">=" : "") << val.value << '\n';
}

}  // namespace jph
