#include "jph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "jph/summary_io.hpp"

namespace jph {

namespace {

std::string fixed6(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

}  // namespace

SummarySet load_summaries(const std::filesystem::path& dir) {
    SummarySet set;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".summary") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::set<std::uint64_t> seen;
    for (const auto& f : files) {
        if (!std::filesystem::is_regular_file(f)) {
            set.rejected.emplace_back(f, "not a regular file");
            continue;
        }
        try {
            JpSummary s = read_summary(f);
            if (!seen.insert(s.prime).second) {
                set.rejected.emplace_back(f, "duplicate summary for p = " + std::to_string(s.prime));
                continue;
            }
            set.summaries.push_back(std::move(s));
        } catch (const SummaryError& e) {
            set.rejected.emplace_back(f, e.what());
        }
    }
    std::sort(set.summaries.begin(), set.summaries.end(),
              [](const JpSummary& a, const JpSummary& b) { return a.prime < b.prime; });
    return set;
}

std::string percent_truncated(std::uint64_t count, std::uint64_t total) {
    if (total == 0) return "0.00";
    const std::uint64_t basis = count * 10000 / total;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu.%02llu", static_cast<unsigned long long>(basis / 100),
                  static_cast<unsigned long long>(basis % 100));
    return buf;
}

StatsTables build_stats(const std::vector<JpSummary>& summaries) {
    StatsTables t;
    std::vector<const JpSummary*> complete;
    for (const auto& s : summaries) {
        if (s.complete)
            complete.push_back(&s);
        else
            t.incomplete_primes.push_back(s.prime);
    }

    std::map<std::uint64_t, std::uint64_t> bins;
    for (const auto* s : complete) ++bins[s->cardinality];
    std::ostringstream dist;
    dist << "# jph-distribution 1\ncardinality,primes,percent\n";
    for (const auto& [card, count] : bins) dist << card << ',' << count << ',' << percent_truncated(count, complete.size()) << '\n';
    t.distribution = dist.str();

    std::ostringstream card, ext;
    card << "# jph-cardinality-plot 1\np,cardinality,log_cardinality_over_log_p\n";
    ext << "# jph-extinction-plot 1\np,extinction_time,log_extinction_over_log_p\n";
    for (const auto* s : complete) {
        const double lp = std::log(static_cast<double>(s->prime));
        card << s->prime << ',' << s->cardinality << ','
             << fixed6(std::log(static_cast<double>(s->cardinality)) / lp) << '\n';
        ext << s->prime << ',' << s->extinction_time << ','
            << fixed6(std::log(static_cast<double>(s->extinction_time)) / lp) << '\n';
    }
    t.cardinality_plot = card.str();
    t.extinction_plot = ext.str();

    std::ostringstream v3, consec;
    v3 << "# jph-valuation3 1\np,block,n\n";
    consec << "# jph-consecutive-check 1\np,valuation3_blocks,adjacent_blocks,chain\n";
    for (const auto& s : summaries) {
        if (s.valuation3_members.empty()) continue;
        for (const auto& path : s.valuation3_members)
            v3 << s.prime << ',' << path.size() << ',' << path_value(path, s.prime).get_str() << '\n';
        bool adjacent = false;
        for (std::size_t i = 1; i < s.valuation3_blocks.size(); ++i)
            if (s.valuation3_blocks[i] == s.valuation3_blocks[i - 1] + 1) adjacent = true;
        // n has valuation 3 and so does pn (digit 0 appended), or more.
        std::set<DigitPath> deep(s.valuation3_members.begin(), s.valuation3_members.end());
        for (const auto& h : s.high_valuations) deep.insert(h.path);
        bool chain = false;
        for (auto path : s.valuation3_members) {
            path.push_back(0);
            if (deep.count(path)) chain = true;
        }
        if (adjacent) t.adjacent_block_primes.push_back(s.prime);
        if (chain) t.chain_primes.push_back(s.prime);
        consec << s.prime << ',';
        for (std::size_t i = 0; i < s.valuation3_blocks.size(); ++i) consec << (i ? " " : "") << s.valuation3_blocks[i];
        consec << ',' << (adjacent ? 1 : 0) << ',' << (chain ? 1 : 0) << '\n';
    }
    t.valuation3 = v3.str();
    t.consecutive_check = consec.str();

    // Per level m: how many primes have an even or odd number of members there.
    std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> levels;
    std::uint64_t odd_totals = 0;
    for (const auto* s : complete) {
        for (std::size_t m = 1; m <= s->block_sizes.size(); ++m) {
            auto& [even, odd] = levels[m];
            (s->block_sizes[m - 1] % 2 == 0 ? even : odd)++;
        }
        odd_totals += s->cardinality % 2;
    }
    std::ostringstream par;
    par << "# jph-parity 1\nblock,primes,even,odd\n";
    for (const auto& [m, eo] : levels) par << m << ',' << eo.first + eo.second << ',' << eo.first << ',' << eo.second << '\n';
    par << "total," << complete.size() << ',' << complete.size() - odd_totals << ',' << odd_totals << '\n';
    t.parity = par.str();
    return t;
}

std::map<std::string, std::string> stats_files(const StatsTables& t) {
    return {{"distribution.csv", t.distribution},
            {"cardinality_plot.csv", t.cardinality_plot},
            {"extinction_plot.csv", t.extinction_plot},
            {"valuation3.csv", t.valuation3},
            {"parity.csv", t.parity},
            {"consecutive_check.csv", t.consecutive_check}};
}

}  // namespace jph
