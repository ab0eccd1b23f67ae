#pragma once

/// Level-by-level enumeration of J_p = {n >= 1 : v_p(H_n) >= 1}.
///
/// Members of J_p form a tree: the level-m nodes are the members in
/// [p^{m-1}, p^m - 1] and pn + k is a child of n when
/// H_n / p = -H_k (mod p). The enumerator starts from the level-one members
/// (read off the prefix table), lifts each level with the fitted series and
/// walks the p entries of a block. Each level costs one p-adic digit, so a
/// run started at precision D reaches level D; when the tree is still alive
/// there, the run restarts at a larger D and recomputes only the ancestors
/// of the surviving frontier.

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "jph/boyd_series.hpp"
#include "jph/harmonic_kernel.hpp"
#include "jph/padic.hpp"

namespace jph {

using DigitPath = std::vector<std::uint32_t>;

/// A member n of J_p, addressed by its base-p digits (most significant first).
struct JpNode {
    DigitPath path;
    PadicInt h;
    Valuation val;

    int block() const noexcept { return static_cast<int>(path.size()); }

    friend bool operator==(const JpNode&, const JpNode&) = default;
};

/// n from its digits.
mpz_class path_value(std::span<const std::uint32_t> path, std::uint64_t p);
/// n mod p^digits, from the trailing digits only.
mpz_class path_residue(std::span<const std::uint32_t> path, std::uint64_t p, int digits);
/// Digits of n >= 1, most significant first.
DigitPath digits_of(const mpz_class& n, std::uint64_t p);

/// H_{pn+k} = H_k + H_n/p (mod p) failed on an expanded node.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Prefix table and series for one working depth: level-one residues are
/// known to `depth` digits and the series supports lifting from there.
struct LiftContext {
    int depth;
    PrefixTable prefix;
    SeriesApprox series;
};

using SeriesHook = std::function<void(SeriesApprox&)>;

std::shared_ptr<const LiftContext> build_context(std::uint64_t p, int depth, const SeriesHook& hook = {});
/// Context around an existing series (resumed runs).
std::shared_ptr<const LiftContext> make_context(std::uint64_t p, int depth, SeriesApprox series);

std::vector<JpNode> initial_block(const PrefixTable& prefix);

struct ExpandStats {
    std::uint64_t expanded = 0;
    std::uint64_t block_walks = 0;
    std::uint64_t consistency_checks = 0;
};

/// Children of `node`, in ascending order. Nodes whose -H_n/p mod p is not in R
/// are settled without a block walk.
std::vector<JpNode> expand(const JpNode& node, const SeriesApprox& series, const PrefixTable& prefix,
                           ExpandStats* stats = nullptr);

/// Recomputes H_n for each path (all of one length, sorted ascending) along
/// their shared ancestors. Returns residues at precision depth - length + 1.
std::vector<PadicInt> recompute_paths(const LiftContext& context, std::span<const DigitPath> paths,
                                      std::uint64_t* nodes_recomputed = nullptr);

struct HighValuation {
    DigitPath path;
    Valuation val;

    friend bool operator==(const HighValuation&, const HighValuation&) = default;
};

enum class StopReason { complete, depth_budget, time_budget, level_budget };

const char* to_string(StopReason reason);

struct JpSummary {
    std::uint64_t prime = 0;
    bool complete = false;
    StopReason stop = StopReason::complete;
    /// |J_p|; a lower bound when incomplete.
    std::uint64_t cardinality = 0;
    /// Index of the first empty block; a lower bound when incomplete.
    int extinction_time = 0;
    int last_nonempty_block = 0;
    /// |J_{p,m}| for m = 1..last_nonempty_block.
    std::vector<std::uint64_t> block_sizes;
    /// Members with v_p(H_n) = 1, 2, 3, >= 4.
    std::array<std::uint64_t, 4> valuation_histogram{};
    /// Block of every member with v_p(H_n) = 3, ascending with repeats.
    std::vector<int> valuation3_blocks;
    /// Those members themselves, ascending.
    std::vector<DigitPath> valuation3_members;
    std::vector<HighValuation> high_valuations;
    /// Members whose valuation was not classified (run paused mid-way).
    std::uint64_t unclassified = 0;
    int depth = 0;
    int series_terms = 0;
    int restarts = 0;
    std::uint64_t spine_nodes = 0;
    std::uint64_t consistency_checks = 0;

    friend bool operator==(const JpSummary&, const JpSummary&) = default;
};

/// Everything needed to continue an enumeration: the frontier is the
/// unprocessed level `level`.
struct EnumerationState {
    std::uint64_t prime = 0;
    int depth = 0;
    SeriesApprox series;
    int level = 0;
    std::vector<JpNode> frontier;
    std::vector<std::uint64_t> block_sizes;
    std::array<std::uint64_t, 4> valuation_histogram{};
    std::vector<DigitPath> valuation3_members;
    std::vector<HighValuation> high_valuations;
    int restarts = 0;
    std::uint64_t spine_nodes = 0;
    std::uint64_t consistency_checks = 0;
    std::uint64_t expanded = 0;

    friend bool operator==(const EnumerationState&, const EnumerationState&) = default;
};

struct EnumerationConfig {
    int initial_target_depth = 16;
    int max_depth = 1 << 14;
    /// Wall-clock budget for this invocation; zero means unlimited.
    std::chrono::seconds max_time{0};
    /// Levels to process in this invocation; zero means unlimited.
    int max_levels = 0;
    std::optional<std::filesystem::path> checkpoint;
    std::chrono::seconds checkpoint_interval{60};
    /// Continue from `checkpoint` if it exists.
    bool resume = false;
    unsigned workers = 1;
    /// Called once per member, in ascending order, with its settled valuation.
    std::function<void(const DigitPath&, const Valuation&)> on_element;
    /// Applied to every fitted series (fault injection in tests).
    SeriesHook series_hook;
};

/// Runs until an empty block is found or a budget runs out.
JpSummary enumerate_jp(std::uint64_t p, const EnumerationConfig& config);

/// |J_p intersect [1, p^m - 1]| <= 3 x^{2/3 + 1/(25 ln p)} for every recorded level m.
bool satisfies_wu_chen(const JpSummary& summary);

}  // namespace jph
