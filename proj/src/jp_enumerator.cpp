#include "jph/jp_enumerator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "jph/checkpoint.hpp"
#include "jph/primes.hpp"

namespace jph {

mpz_class path_value(std::span<const std::uint32_t> path, std::uint64_t p) {
    mpz_class n = 0;
    for (auto d : path) {
        n *= p;
        n += d;
    }
    return n;
}

mpz_class path_residue(std::span<const std::uint32_t> path, std::uint64_t p, int digits) {
    const auto keep = std::min(path.size(), static_cast<std::size_t>(std::max(digits, 0)));
    return path_value(path.subspan(path.size() - keep), p);
}

DigitPath digits_of(const mpz_class& n, std::uint64_t p) {
    if (n < 1) throw UsageError("digits_of needs n >= 1");
    DigitPath digits;
    mpz_class q = n;
    while (q > 0) digits.push_back(static_cast<std::uint32_t>(mpz_fdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), p)));
    std::reverse(digits.begin(), digits.end());
    return digits;
}

std::shared_ptr<const LiftContext> build_context(std::uint64_t p, int depth, const SeriesHook& hook) {
    const SeriesPlan plan = plan_series(p, depth);
    SeriesApprox series = fit_coefficients(p, plan.terms, plan.input_precision);
    if (hook) {
        hook(series);
        series.refresh();
    }
    return make_context(p, depth, std::move(series));
}

std::shared_ptr<const LiftContext> make_context(std::uint64_t p, int depth, SeriesApprox series) {
    if (depth < 2) throw UsageError("working depth must be at least 2");
    if (series.prime != p) throw UsageError("series belongs to a different prime");
    if (series.effective_precision < depth - 1)
        throw PrecisionExhausted("series precision " + std::to_string(series.effective_precision) +
                                 " cannot support depth " + std::to_string(depth));
    return std::make_shared<const LiftContext>(LiftContext{depth, prefix_table(p, depth), std::move(series)});
}

std::vector<JpNode> initial_block(const PrefixTable& prefix) {
    if (prefix.precision() < 2) throw PrecisionExhausted("level one needs a prefix table of precision >= 2");
    std::vector<JpNode> nodes;
    for (std::uint32_t k = 1; k < prefix.prime(); ++k) {
        const PadicInt& h = prefix[k];
        if (h.digit0() == 0) nodes.push_back({{k}, h, valuation(h)});
    }
    return nodes;
}

std::vector<JpNode> expand(const JpNode& node, const SeriesApprox& series, const PrefixTable& prefix,
                           ExpandStats* stats) {
    const std::uint64_t p = prefix.prime();
    const int r = node.h.precision();
    if (r < 2) throw PrecisionExhausted("node at block " + std::to_string(node.block()) + " has one digit left");
    if (stats) ++stats->expanded;

    // H_{pn+k} = H_k + H_n/p (mod p): children need H_k = -u with u = H_n/p mod p.
    mpz_class quotient;
    if (!mpz_divisible_ui_p(node.h.residue().get_mpz_t(), p)) throw NotDivisible("node is not a member of J_p");
    mpz_divexact_ui(quotient.get_mpz_t(), node.h.residue().get_mpz_t(), p);
    const std::uint64_t u = mpz_fdiv_ui(quotient.get_mpz_t(), p);
    const std::uint64_t wanted = (p - u) % p;
    const auto digits = prefix.digits_with_residue(wanted);
    if (digits.empty()) return {};

    const mpz_class n_residue = path_residue(node.path, p, r);
    const PadicInt h_pn = eval_lift(series, n_residue, node.h);
    const auto walk = block_walk(h_pn, path_residue(node.path, p, r - 1), digits.back());
    if (stats) ++stats->block_walks;

    for (std::size_t k = 0; k < walk.size(); ++k) {
        const std::uint64_t expected = (prefix[k].digit0() + u) % p;
        if (walk[k].digit0() != expected)
            throw ConsistencyError("H_{pn+" + std::to_string(k) + "} disagrees with H_k + H_n/p mod p at block " +
                                   std::to_string(node.block() + 1));
    }
    if (stats) stats->consistency_checks += walk.size();

    std::vector<JpNode> children;
    children.reserve(digits.size());
    for (auto k : digits) {
        DigitPath path = node.path;
        path.push_back(k);
        const PadicInt& h = walk[k];
        children.push_back({std::move(path), h, valuation(h)});
    }
    return children;
}

std::vector<PadicInt> recompute_paths(const LiftContext& context, std::span<const DigitPath> paths,
                                      std::uint64_t* nodes_recomputed) {
    if (paths.empty()) return {};
    const std::uint64_t p = context.prefix.prime();
    const std::size_t length = paths.front().size();
    if (length < 1) throw UsageError("cannot recompute an empty path");
    if (static_cast<int>(length) > context.depth)
        throw PrecisionExhausted("path of length " + std::to_string(length) + " is deeper than working depth " +
                                 std::to_string(context.depth));
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (paths[i].size() != length) throw UsageError("recompute_paths needs paths of one length");
        if (i > 0 && !(paths[i - 1] < paths[i])) throw UsageError("recompute_paths needs sorted distinct paths");
    }

    // Groups of paths sharing a prefix of the current length, with H of that prefix.
    struct Group {
        std::size_t begin, end;
        PadicInt h;
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < paths.size();) {
        std::size_t j = i;
        while (j < paths.size() && paths[j][0] == paths[i][0]) ++j;
        groups.push_back({i, j, context.prefix[paths[i][0]]});
        i = j;
    }
    if (nodes_recomputed) *nodes_recomputed += groups.size();

    for (std::size_t len = 1; len < length; ++len) {
        std::vector<Group> next;
        for (const auto& g : groups) {
            const DigitPath& rep = paths[g.begin];
            const std::span<const std::uint32_t> prefix_digits(rep.data(), len);
            if (g.h.digit0() != 0)
                throw std::logic_error("spine node at block " + std::to_string(len) + " is not a member of J_p");
            const int r = g.h.precision();
            const PadicInt h_pn = eval_lift(context.series, path_residue(prefix_digits, p, r), g.h);
            const std::uint32_t last = paths[g.end - 1][len];
            const auto walk = block_walk(h_pn, path_residue(prefix_digits, p, r - 1), last);
            for (std::size_t i = g.begin; i < g.end;) {
                std::size_t j = i;
                while (j < g.end && paths[j][len] == paths[i][len]) ++j;
                next.push_back({i, j, walk[paths[i][len]]});
                i = j;
            }
        }
        if (nodes_recomputed) *nodes_recomputed += next.size();
        groups = std::move(next);
    }

    std::vector<PadicInt> out;
    out.reserve(groups.size());
    for (auto& g : groups) out.push_back(std::move(g.h));
    return out;
}

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::complete: return "complete";
        case StopReason::depth_budget: return "depth_budget";
        case StopReason::time_budget: return "time_budget";
        case StopReason::level_budget: return "level_budget";
    }
    return "unknown";
}

namespace {

constexpr int resolver_start_precision = 5;
constexpr int resolver_max_precision = 64;

/// Settles valuations that the node's own precision cannot: saturated
/// residues and anything at 4 or above, by recomputing the node's path
/// with a deeper context.
class ValuationResolver {
public:
    ValuationResolver(std::uint64_t p, SeriesHook hook) : p_(p), hook_(std::move(hook)) {}

    void set_floor_depth(int depth) { floor_depth_ = depth; }

    /// `nodes` all at block `block`, ascending.
    std::vector<Valuation> resolve(const std::vector<const JpNode*>& nodes, int block) {
        std::vector<Valuation> out(nodes.size());
        std::vector<std::size_t> pending(nodes.size());
        std::iota(pending.begin(), pending.end(), 0);
        int want = resolver_start_precision;
        for (const JpNode* n : nodes) want = std::max(want, n->val.value + 2);
        while (!pending.empty()) {
            const LiftContext& ctx = context_for(block + want - 1);
            std::vector<DigitPath> paths;
            paths.reserve(pending.size());
            for (auto i : pending) paths.push_back(nodes[i]->path);
            const auto hs = recompute_paths(ctx, paths);
            std::vector<std::size_t> still;
            for (std::size_t j = 0; j < pending.size(); ++j) {
                out[pending[j]] = valuation(hs[j]);
                if (out[pending[j]].saturated && want < resolver_max_precision) still.push_back(pending[j]);
            }
            pending = std::move(still);
            want *= 2;
        }
        return out;
    }

private:
    const LiftContext& context_for(int depth) {
        if (!context_ || context_->depth < depth) context_ = build_context(p_, std::max(depth, floor_depth_), hook_);
        return *context_;
    }

    std::uint64_t p_;
    SeriesHook hook_;
    int floor_depth_ = 0;
    std::shared_ptr<const LiftContext> context_;
};

struct Tally {
    std::array<std::uint64_t, 4> histogram{};
    std::vector<DigitPath> valuation3;
    std::vector<HighValuation> high;
};

void classify(const std::vector<JpNode>& nodes, int block, ValuationResolver& resolver, Tally& tally,
              const EnumerationConfig& config) {
    std::vector<const JpNode*> unsettled;
    for (const auto& n : nodes)
        if (n.val.saturated || n.val.value >= 4) unsettled.push_back(&n);
    std::vector<Valuation> settled;
    if (!unsettled.empty()) settled = resolver.resolve(unsettled, block);

    std::size_t next = 0;
    for (const auto& n : nodes) {
        Valuation v = n.val;
        if (next < unsettled.size() && unsettled[next] == &n) {
            v = settled[next++];
            if (!n.val.saturated && v != n.val)
                throw std::logic_error("valuation " + std::to_string(n.val.value) + " at block " +
                                       std::to_string(block) + " did not survive re-verification");
        }
        if (v.value < 1) throw std::logic_error("member of J_p with valuation below one");
        tally.histogram[static_cast<std::size_t>(std::min(v.value, 4) - 1)]++;
        if (v.value == 3 && !v.saturated) tally.valuation3.push_back(n.path);
        if (v.value >= 4) tally.high.push_back({n.path, v});
        if (config.on_element) config.on_element(n.path, v);
    }
}

std::vector<JpNode> expand_level(const std::vector<JpNode>& nodes, const LiftContext& ctx, unsigned workers,
                                 ExpandStats& stats) {
    std::vector<JpNode> children;
    if (workers <= 1 || nodes.size() < 2 * static_cast<std::size_t>(workers)) {
        for (const auto& n : nodes) {
            auto kids = expand(n, ctx.series, ctx.prefix, &stats);
            std::move(kids.begin(), kids.end(), std::back_inserter(children));
        }
        return children;
    }

    const std::size_t chunk = (nodes.size() + workers - 1) / workers;
    std::vector<std::vector<JpNode>> partial(workers);
    std::vector<ExpandStats> partial_stats(workers);
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    const std::size_t lo = w * chunk, hi = std::min(nodes.size(), lo + chunk);
                    for (std::size_t i = lo; i < hi; ++i) {
                        auto kids = expand(nodes[i], ctx.series, ctx.prefix, &partial_stats[w]);
                        std::move(kids.begin(), kids.end(), std::back_inserter(partial[w]));
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (unsigned w = 0; w < workers; ++w) {
        std::move(partial[w].begin(), partial[w].end(), std::back_inserter(children));
        stats.expanded += partial_stats[w].expanded;
        stats.block_walks += partial_stats[w].block_walks;
        stats.consistency_checks += partial_stats[w].consistency_checks;
    }
    return children;
}

}  // namespace

JpSummary enumerate_jp(std::uint64_t p, const EnumerationConfig& config) {
    if (p < 3 || !is_prime(p)) throw UsageError(std::to_string(p) + " is not an odd prime");
    if (config.initial_target_depth < 2) throw UsageError("initial target depth must be at least 2");
    if (config.max_depth < 2) throw UsageError("max depth must be at least 2");
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();

    EnumerationState st;
    std::shared_ptr<const LiftContext> ctx;
    if (config.resume && config.checkpoint && std::filesystem::exists(*config.checkpoint)) {
        st = load_checkpoint(*config.checkpoint);
        if (st.prime != p)
            throw CheckpointError("checkpoint is for p = " + std::to_string(st.prime) + ", not " + std::to_string(p));
        ctx = make_context(p, st.depth, st.series);
    } else {
        const int depth = std::min(config.initial_target_depth, config.max_depth);
        ctx = build_context(p, depth, config.series_hook);
        st.prime = p;
        st.depth = depth;
        st.series = ctx->series;
        st.level = 1;
        st.frontier = initial_block(ctx->prefix);
        if (!st.frontier.empty()) st.block_sizes.push_back(st.frontier.size());
    }

    ValuationResolver resolver(p, config.series_hook);
    Tally tally{st.valuation_histogram, st.valuation3_members, st.high_valuations};
    ExpandStats stats{st.expanded, 0, st.consistency_checks};
    auto last_save = clock::now();
    auto sync = [&] {
        st.valuation_histogram = tally.histogram;
        st.valuation3_members = tally.valuation3;
        st.high_valuations = tally.high;
        st.expanded = stats.expanded;
        st.consistency_checks = stats.consistency_checks;
    };
    auto save = [&] {
        sync();
        if (config.checkpoint) save_checkpoint(*config.checkpoint, st);
        last_save = clock::now();
    };

    int levels_this_run = 0;
    bool complete = false;
    StopReason stop = StopReason::complete;
    Tally final_tally;
    std::uint64_t unclassified = 0;

    while (true) {
        if (st.frontier.empty()) {
            complete = true;
            break;
        }
        if (st.level >= st.depth) {
            if (st.depth >= config.max_depth) {
                stop = StopReason::depth_budget;
                save();
                // The frontier is settled for this report only; the checkpoint keeps it open.
                final_tally = tally;
                resolver.set_floor_depth(st.depth + resolver_start_precision);
                classify(st.frontier, st.level, resolver, final_tally, config);
                break;
            }
            const int depth = std::min(2 * st.depth, config.max_depth);
            ctx = build_context(p, depth, config.series_hook);
            std::vector<DigitPath> paths;
            paths.reserve(st.frontier.size());
            for (const auto& n : st.frontier) paths.push_back(n.path);
            const auto hs = recompute_paths(*ctx, paths, &st.spine_nodes);
            for (std::size_t i = 0; i < hs.size(); ++i) {
                st.frontier[i].h = hs[i];
                st.frontier[i].val = valuation(hs[i]);
            }
            st.depth = depth;
            st.series = ctx->series;
            ++st.restarts;
            save();
            continue;
        }
        const bool out_of_levels = config.max_levels > 0 && levels_this_run >= config.max_levels;
        const bool out_of_time = config.max_time.count() > 0 && clock::now() - started >= config.max_time;
        if (out_of_levels || out_of_time) {
            stop = out_of_levels ? StopReason::level_budget : StopReason::time_budget;
            save();
            final_tally = tally;
            unclassified = st.frontier.size();
            break;
        }

        resolver.set_floor_depth(st.depth + resolver_start_precision);
        classify(st.frontier, st.level, resolver, tally, config);
        auto children = expand_level(st.frontier, *ctx, config.workers, stats);
        ++levels_this_run;
        ++st.level;
        st.frontier = std::move(children);
        if (st.frontier.empty()) {
            complete = true;
            break;
        }
        st.block_sizes.push_back(st.frontier.size());
        if (config.checkpoint && clock::now() - last_save >= config.checkpoint_interval) save();
    }
    if (complete) {
        save();
        final_tally = tally;
    }

    JpSummary out;
    out.prime = p;
    out.complete = complete;
    out.stop = stop;
    out.block_sizes = st.block_sizes;
    out.cardinality = std::accumulate(st.block_sizes.begin(), st.block_sizes.end(), std::uint64_t{0});
    out.last_nonempty_block = static_cast<int>(st.block_sizes.size());
    out.extinction_time = out.last_nonempty_block + 1;
    out.valuation_histogram = final_tally.histogram;
    out.valuation3_members = final_tally.valuation3;
    for (const auto& path : out.valuation3_members) out.valuation3_blocks.push_back(static_cast<int>(path.size()));
    out.high_valuations = final_tally.high;
    out.unclassified = unclassified;
    out.depth = st.depth;
    out.series_terms = st.series.terms;
    out.restarts = st.restarts;
    out.spine_nodes = st.spine_nodes;
    out.consistency_checks = stats.consistency_checks;
    return out;
}

bool satisfies_wu_chen(const JpSummary& summary) {
    const double log_p = std::log(static_cast<double>(summary.prime));
    const double exponent = 2.0 / 3.0 + 1.0 / (25.0 * log_p);
    std::uint64_t count = 0;
    for (std::size_t m = 1; m <= summary.block_sizes.size(); ++m) {
        count += summary.block_sizes[m - 1];
        // x = p^m - 1, compared in logarithms so deep levels do not overflow.
        const double log_x = static_cast<double>(m) * log_p + std::log1p(-std::exp(-static_cast<double>(m) * log_p));
        if (std::log(static_cast<double>(count)) > std::log(3.0) + exponent * log_x) return false;
    }
    return true;
}

}  // namespace jph
