#include <filesystem>
#include <map>
#include <set>

#include "doctest.h"
#include "jph/checkpoint.hpp"
#include "jph/jp_enumerator.hpp"
#include "jph/oracle.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using jph::DigitPath;
using jph::EnumerationConfig;

namespace {

struct Collected {
    std::vector<DigitPath> paths;
    std::vector<jph::Valuation> vals;
};

jph::JpSummary run(std::uint64_t p, EnumerationConfig config, Collected* out = nullptr) {
    if (out)
        config.on_element = [out](const DigitPath& path, const jph::Valuation& v) {
            out->paths.push_back(path);
            out->vals.push_back(v);
        };
    return jph::enumerate_jp(p, config);
}

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "jph_tests";
    fs::create_directories(dir);
    auto path = dir / name;
    fs::remove(path);
    return path;
}

}  // namespace

TEST_CASE("digit paths") {
    CHECK(jph::digits_of(mpz_class(848), 11) == DigitPath{7, 0, 1});
    CHECK(jph::path_value(DigitPath{7, 0, 1}, 11) == 848);
    CHECK(jph::path_residue(DigitPath{7, 0, 1}, 11, 2) == 1);
    CHECK(jph::path_residue(DigitPath{7, 0, 1}, 11, 5) == 848);
}

TEST_CASE("initial block") {
    const auto j7 = jph::initial_block(jph::prefix_table(7, 4));
    REQUIRE(j7.size() == 1);
    CHECK(j7[0].path == DigitPath{6});
    CHECK(j7[0].val == jph::Valuation{2, false});

    const auto j5 = jph::initial_block(jph::prefix_table(5, 4));
    REQUIRE(j5.size() == 1);
    CHECK(j5[0].path == DigitPath{4});
    CHECK(j5[0].val.value >= 2);

    const auto j11 = jph::initial_block(jph::prefix_table(11, 4));
    std::set<DigitPath> got;
    for (const auto& n : j11) got.insert(n.path);
    CHECK(got.count(DigitPath{10}));

    CHECK_THROWS_AS(jph::initial_block(jph::prefix_table(7, 1)), jph::PrecisionExhausted);
}

TEST_CASE("expand") {
    const auto ctx = jph::build_context(7, 8);
    const auto level1 = jph::initial_block(ctx->prefix);
    jph::ExpandStats stats;
    const auto kids = jph::expand(level1[0], ctx->series, ctx->prefix, &stats);
    // Children of p - 1 include p^2 - p and p^2 - 1.
    std::set<DigitPath> got;
    for (const auto& k : kids) got.insert(k.path);
    CHECK(got.count(DigitPath{6, 0}));
    CHECK(got.count(DigitPath{6, 6}));
    for (const auto& k : kids) CHECK(k.h.precision() == 7);
    CHECK(stats.block_walks == 1);

    // A node whose -H_n/p mod p is outside R has no children and costs no walk.
    // For p = 7, R = {0, 1, 3, 5}: H_n/p = 1 asks for residue 6.
    const jph::JpNode lonely{{1, 2}, jph::PadicInt(7, 5, 7L), jph::Valuation{1, false}};
    jph::ExpandStats none;
    CHECK(jph::expand(lonely, ctx->series, ctx->prefix, &none).empty());
    CHECK(none.block_walks == 0);

    const jph::JpNode spent{{6}, jph::PadicInt(7, 1, 0L), jph::Valuation{1, true}};
    CHECK_THROWS_AS(jph::expand(spent, ctx->series, ctx->prefix), jph::PrecisionExhausted);
}

TEST_CASE("small primes") {
    const auto s5 = run(5, {});
    CHECK(s5.complete);
    CHECK(s5.cardinality == 3);
    CHECK(s5.last_nonempty_block == 2);
    CHECK(s5.extinction_time == 3);

    const auto s3 = run(3, {});
    CHECK(s3.complete);
    CHECK(s3.cardinality == 3);
    CHECK(s3.block_sizes == std::vector<std::uint64_t>{1, 1, 1});

    const auto s7 = run(7, {});
    CHECK(s7.complete);
    CHECK(s7.cardinality == 13);
    CHECK(s7.extinction_time == 7);
}

TEST_CASE("p = 11") {
    Collected all;
    const auto s = run(11, {}, &all);
    CHECK(s.complete);
    CHECK(s.cardinality == 638);
    CHECK(s.extinction_time == 30);
    CHECK(s.last_nonempty_block == 29);
    CHECK(s.valuation3_blocks == std::vector<int>{3, 4, 4, 18});
    CHECK(s.valuation_histogram[3] == 0);
    CHECK(s.high_valuations.empty());
    CHECK(s.unclassified == 0);
    CHECK(all.paths.size() == 638);
    CHECK(jph::satisfies_wu_chen(s));

    // Ascending order, tree property, and n = 848 with valuation 3.
    std::set<DigitPath> members(all.paths.begin(), all.paths.end());
    for (std::size_t i = 1; i < all.paths.size(); ++i) {
        const auto& a = all.paths[i - 1];
        const auto& b = all.paths[i];
        CHECK((a.size() < b.size() || (a.size() == b.size() && a < b)));
    }
    for (const auto& path : all.paths) {
        if (path.size() == 1) continue;
        CHECK(members.count(DigitPath(path.begin(), path.end() - 1)));
    }
    bool found = false;
    for (std::size_t i = 0; i < all.paths.size(); ++i)
        if (jph::path_value(all.paths[i], 11) == 848) {
            found = true;
            CHECK(all.vals[i] == jph::Valuation{3, false});
        }
    CHECK(found);
}

TEST_CASE("precision ledger: block m carries D - m + 1 digits") {
    const int depth = 12;
    const auto ctx = jph::build_context(11, depth);
    auto level = jph::initial_block(ctx->prefix);
    for (int m = 1; !level.empty() && m < depth; ++m) {
        for (const auto& n : level) CHECK(n.h.precision() == depth - m + 1);
        std::vector<jph::JpNode> next;
        for (const auto& n : level)
            for (auto& k : jph::expand(n, ctx->series, ctx->prefix)) next.push_back(std::move(k));
        level = std::move(next);
    }
}

TEST_CASE("spine recomputation matches level-by-level residues") {
    const int depth = 10;
    const auto ctx = jph::build_context(11, depth);
    auto level = jph::initial_block(ctx->prefix);
    for (int m = 1; m < 6; ++m) {
        std::vector<jph::JpNode> next;
        for (const auto& n : level)
            for (auto& k : jph::expand(n, ctx->series, ctx->prefix)) next.push_back(std::move(k));
        level = std::move(next);
    }
    std::vector<DigitPath> paths;
    for (const auto& n : level) paths.push_back(n.path);
    std::uint64_t touched = 0;
    const auto hs = jph::recompute_paths(*ctx, paths, &touched);
    REQUIRE(hs.size() == level.size());
    for (std::size_t i = 0; i < hs.size(); ++i) CHECK(hs[i] == level[i].h);
    CHECK(touched > 0);
    CHECK(touched < 638);

    std::vector<DigitPath> unsorted{paths.back(), paths.front()};
    CHECK_THROWS_AS(jph::recompute_paths(*ctx, unsorted), jph::UsageError);
}

TEST_CASE("restart determinism") {
    // Depth 8 forces restarts 8 -> 16 -> 32; a fresh run starts at 32.
    EnumerationConfig small, big;
    small.initial_target_depth = 8;
    big.initial_target_depth = 32;
    Collected a, b;
    const auto restarted = run(11, small, &a);
    const auto fresh = run(11, big, &b);
    CHECK(restarted.restarts == 2);
    CHECK(fresh.restarts == 0);
    CHECK(restarted.depth == fresh.depth);
    CHECK(restarted.block_sizes == fresh.block_sizes);
    CHECK(restarted.valuation_histogram == fresh.valuation_histogram);
    CHECK(restarted.valuation3_members == fresh.valuation3_members);
    CHECK(a.paths == b.paths);
    CHECK(a.vals == b.vals);
}

TEST_CASE("worker count does not change the result") {
    EnumerationConfig one, four;
    four.workers = 4;
    Collected a, b;
    const auto s1 = run(127, one, &a);
    const auto s4 = run(127, four, &b);
    CHECK(s1 == s4);
    CHECK(a.paths == b.paths);
}

TEST_CASE("budgets") {
    EnumerationConfig tight;
    tight.initial_target_depth = 2;
    tight.max_depth = 2;
    const auto s = run(7, tight);
    CHECK_FALSE(s.complete);
    CHECK(s.stop == jph::StopReason::depth_budget);
    CHECK(s.cardinality == 3);

    EnumerationConfig levels;
    levels.max_levels = 3;
    const auto l = run(11, levels);
    CHECK_FALSE(l.complete);
    CHECK(l.stop == jph::StopReason::level_budget);
    CHECK(l.block_sizes.size() == 4);
    CHECK(l.unclassified == l.block_sizes.back());

    CHECK_THROWS_AS(run(9, {}), jph::UsageError);
    CHECK_THROWS_AS(run(2, {}), jph::UsageError);
}

TEST_CASE("resume reproduces an uninterrupted run") {
    const auto path = temp_file("resume_p127.ckpt");
    const auto whole = run(127, {});

    EnumerationConfig part;
    part.checkpoint = path;
    part.max_levels = 40;
    part.initial_target_depth = 16;
    Collected seen;
    auto s = run(127, part, &seen);
    int sessions = 1;
    part.resume = true;
    while (!s.complete) {
        CHECK(s.stop == jph::StopReason::level_budget);
        s = run(127, part, &seen);
        ++sessions;
    }
    CHECK(sessions > 2);
    CHECK(s.cardinality == whole.cardinality);
    CHECK(s.block_sizes == whole.block_sizes);
    CHECK(s.extinction_time == whole.extinction_time);
    CHECK(s.valuation_histogram == whole.valuation_histogram);
    CHECK(s.restarts == whole.restarts);
    CHECK(seen.paths.size() == whole.cardinality);

    // Different prime, same file.
    EnumerationConfig wrong;
    wrong.checkpoint = path;
    wrong.resume = true;
    CHECK_THROWS_AS(run(131, wrong), jph::CheckpointError);
}

TEST_CASE("depth-budget stop can be resumed with a larger budget") {
    const auto path = temp_file("depth_p11.ckpt");
    EnumerationConfig first;
    first.checkpoint = path;
    first.initial_target_depth = 8;
    first.max_depth = 16;
    const auto cut = run(11, first);
    CHECK_FALSE(cut.complete);
    CHECK(cut.stop == jph::StopReason::depth_budget);

    EnumerationConfig second = first;
    second.resume = true;
    second.max_depth = 1 << 14;
    const auto done = run(11, second);
    CHECK(done.complete);
    CHECK(done.cardinality == 638);
    CHECK(done.valuation3_blocks == std::vector<int>{3, 4, 4, 18});
}

TEST_CASE("Wu-Chen bound on completed summaries") {
    for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 127u}) {
        const auto s = run(p, {});
        CHECK(s.complete);
        CHECK(jph::satisfies_wu_chen(s));
    }
    jph::JpSummary fake;
    fake.prime = 5;
    fake.block_sizes = {10};  // above 3 * 4^{2/3 + 1/(25 ln 5)} ~ 7.8
    CHECK_FALSE(jph::satisfies_wu_chen(fake));
}
