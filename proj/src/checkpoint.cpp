#include "jph/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace jph {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t next = std::min(line.find(' ', pos), line.size());
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

std::uint64_t to_u64(const std::string& s, const char* what) {
    if (s.empty() || s.size() > 20 || s.find_first_not_of("0123456789") != std::string::npos ||
        (s.size() > 1 && s[0] == '0'))
        throw CheckpointError(std::string("bad ") + what + " '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw CheckpointError(std::string("bad ") + what + " '" + s + "'");
    }
}

int to_int(const std::string& s, const char* what) {
    const auto v = to_u64(s, what);
    if (v > 1u << 30) throw CheckpointError(std::string(what) + " out of range");
    return static_cast<int>(v);
}

bool to_flag(const std::string& s, const char* what) {
    if (s == "0") return false;
    if (s == "1") return true;
    throw CheckpointError(std::string("bad ") + what + " flag '" + s + "'");
}

mpz_class to_residue(const std::string& s) {
    try {
        return from_hex(s);
    } catch (const UsageError& e) {
        throw CheckpointError(e.what());
    }
}

class LineReader {
public:
    explicit LineReader(const std::string& text) : in_(text) {}

    std::vector<std::string> next(const char* expected) {
        std::string line;
        if (!std::getline(in_, line)) throw CheckpointError(std::string("truncated checkpoint: missing ") + expected);
        ++records_;
        auto fields = split(line);
        if (fields.empty() || fields[0] != expected)
            throw CheckpointError(std::string("expected '") + expected + "' record, got '" + line + "'");
        return fields;
    }

    std::string peek_kind() {
        const auto pos = in_.tellg();
        std::string line;
        if (!std::getline(in_, line)) return {};
        in_.seekg(pos);
        return split(line)[0];
    }

    bool at_end() {
        std::string rest;
        return !std::getline(in_, rest);
    }

    std::size_t records() const { return records_; }

private:
    std::istringstream in_;
    std::size_t records_ = 0;
};

void expect_fields(const std::vector<std::string>& f, std::size_t n) {
    if (f.size() != n)
        throw CheckpointError("record '" + f[0] + "' has " + std::to_string(f.size()) + " fields, expected " +
                              std::to_string(n));
}

}  // namespace

std::string format_digits(const DigitPath& path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(path[i]);
    }
    return out;
}

DigitPath parse_digits(const std::string& text, std::uint64_t p) {
    DigitPath path;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = std::min(text.find(',', pos), text.size());
        const auto d = to_u64(text.substr(pos, next - pos), "digit");
        if (d >= p) throw CheckpointError("digit " + std::to_string(d) + " out of range for p = " + std::to_string(p));
        path.push_back(static_cast<std::uint32_t>(d));
        pos = next + 1;
    }
    if (path.empty() || path.front() == 0) throw CheckpointError("digit path has a leading zero");
    return path;
}

std::string format_checkpoint(const EnumerationState& st) {
    std::ostringstream out;
    std::size_t records = 0;
    auto line = [&](const std::string& s) {
        out << s << '\n';
        ++records;
    };
    out << "jph-checkpoint " << checkpoint_format_version << '\n';
    const int completed = st.level - 1;
    line("header " + std::to_string(st.prime) + ' ' + std::to_string(st.series.terms) + ' ' +
         std::to_string(st.series.effective_precision) + ' ' + std::to_string(completed) + ' ' +
         std::to_string(st.depth) + ' ' + std::to_string(st.level) + ' ' + std::to_string(st.series.input_precision) +
         ' ' + std::to_string(st.series.valuation_loss));
    for (int k = 1; k <= st.series.terms; ++k) {
        const auto& g = st.series.gamma(k);
        line("gamma " + std::to_string(k) + ' ' + std::to_string(g.precision()) + ' ' + to_hex(g.residue()));
    }
    std::string blocks = "blocks";
    for (auto b : st.block_sizes) blocks += ' ' + std::to_string(b);
    line(blocks);
    std::string hist = "histogram";
    for (auto h : st.valuation_histogram) hist += ' ' + std::to_string(h);
    line(hist);
    for (const auto& path : st.valuation3_members) line("val3 " + format_digits(path));
    for (const auto& hv : st.high_valuations)
        line("high " + std::to_string(hv.val.value) + ' ' + (hv.val.saturated ? "1" : "0") + ' ' +
             format_digits(hv.path));
    line("counters " + std::to_string(st.restarts) + ' ' + std::to_string(st.spine_nodes) + ' ' +
         std::to_string(st.consistency_checks) + ' ' + std::to_string(st.expanded));
    for (const auto& n : st.frontier)
        line("node " + std::to_string(n.h.precision()) + ' ' + std::to_string(n.val.value) + ' ' +
             (n.val.saturated ? "1" : "0") + ' ' + to_hex(n.h.residue()) + ' ' + format_digits(n.path));
    out << "end " << records << '\n';
    return out.str();
}

EnumerationState parse_checkpoint(const std::string& text) {
    LineReader in(text);
    {
        auto f = in.next("jph-checkpoint");
        expect_fields(f, 2);
        if (f[1] != std::to_string(checkpoint_format_version))
            throw CheckpointError("unsupported checkpoint version " + f[1]);
    }
    EnumerationState st;
    auto h = in.next("header");
    expect_fields(h, 9);
    st.prime = to_u64(h[1], "prime");
    if (st.prime < 3) throw CheckpointError("checkpoint prime out of range");
    const int terms = to_int(h[2], "terms");
    const int eff = to_int(h[3], "effective precision");
    const int completed = to_int(h[4], "completed blocks");
    st.depth = to_int(h[5], "depth");
    st.level = to_int(h[6], "level");
    if (completed != st.level - 1) throw CheckpointError("completed block count disagrees with level");
    if (terms < 1 || eff < 1 || st.depth < 2 || st.level < 1) throw CheckpointError("header values out of range");

    st.series.prime = st.prime;
    st.series.terms = terms;
    st.series.effective_precision = eff;
    st.series.input_precision = to_int(h[7], "input precision");
    st.series.valuation_loss = to_int(h[8], "valuation loss");
    for (int k = 1; k <= terms; ++k) {
        auto g = in.next("gamma");
        expect_fields(g, 4);
        if (to_int(g[1], "gamma index") != k) throw CheckpointError("gamma records out of order");
        const int prec = to_int(g[2], "gamma precision");
        if (prec != eff) throw CheckpointError("gamma precision disagrees with header");
        const mpz_class r = to_residue(g[3]);
        if (r >= prime_power(st.prime, prec)) throw CheckpointError("gamma residue out of range");
        st.series.gammas.emplace_back(st.prime, prec, r);
    }
    st.series.refresh();

    auto b = in.next("blocks");
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b[i].empty()) continue;
        st.block_sizes.push_back(to_u64(b[i], "block size"));
    }
    auto hist = in.next("histogram");
    expect_fields(hist, 5);
    for (std::size_t i = 0; i < 4; ++i) st.valuation_histogram[i] = to_u64(hist[i + 1], "histogram count");
    while (in.peek_kind() == "val3") {
        auto f = in.next("val3");
        expect_fields(f, 2);
        st.valuation3_members.push_back(parse_digits(f[1], st.prime));
    }
    while (in.peek_kind() == "high") {
        auto f = in.next("high");
        expect_fields(f, 4);
        st.high_valuations.push_back({parse_digits(f[3], st.prime), {to_int(f[1], "valuation"), to_flag(f[2], "saturated")}});
    }
    auto c = in.next("counters");
    expect_fields(c, 5);
    st.restarts = to_int(c[1], "restarts");
    st.spine_nodes = to_u64(c[2], "spine nodes");
    st.consistency_checks = to_u64(c[3], "consistency checks");
    st.expanded = to_u64(c[4], "expanded");

    while (in.peek_kind() == "node") {
        auto f = in.next("node");
        expect_fields(f, 6);
        const int prec = to_int(f[1], "node precision");
        Valuation val{to_int(f[2], "node valuation"), to_flag(f[3], "saturated")};
        const mpz_class r = to_residue(f[4]);
        DigitPath path = parse_digits(f[5], st.prime);
        if (prec < 1 || r >= prime_power(st.prime, prec)) throw CheckpointError("node residue out of range");
        if (static_cast<int>(path.size()) != st.level) throw CheckpointError("frontier node off the current level");
        if (prec != st.depth - st.level + 1) throw CheckpointError("frontier node precision disagrees with depth");
        PadicInt hn(st.prime, prec, r);
        if (valuation(hn) != val) throw CheckpointError("frontier node valuation disagrees with its residue");
        if (!st.frontier.empty() && !(st.frontier.back().path < path))
            throw CheckpointError("frontier nodes out of order");
        st.frontier.push_back({std::move(path), std::move(hn), val});
    }
    const std::size_t counted = in.records();
    auto e = in.next("end");
    expect_fields(e, 2);
    if (to_u64(e[1], "record count") != counted - 1) throw CheckpointError("record count mismatch");
    if (!in.at_end()) throw CheckpointError("trailing data after end record");

    const auto expected_blocks = static_cast<std::size_t>(st.frontier.empty() ? st.level - 1 : st.level);
    if (st.block_sizes.size() != expected_blocks) throw CheckpointError("block list length disagrees with level");
    if (!st.frontier.empty() && st.block_sizes.back() != st.frontier.size())
        throw CheckpointError("frontier size disagrees with its block count");
    return st;
}

void save_checkpoint(const std::filesystem::path& path, const EnumerationState& state) {
    const std::string text = format_checkpoint(state);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw CheckpointError("write failed for checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

EnumerationState load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_checkpoint(buffer.str());
}

}  // namespace jph
