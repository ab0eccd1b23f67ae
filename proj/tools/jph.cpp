// jph: enumerate J_p, run harmonic-prime censuses, aggregate summaries, and
// check the enumerator against exact arithmetic.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "jph/census.hpp"
#include "jph/checkpoint.hpp"
#include "jph/jp_enumerator.hpp"
#include "jph/manifest.hpp"
#include "jph/primes.hpp"
#include "jph/stats.hpp"
#include "jph/summary_io.hpp"
#include "jph/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_mismatch = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned default_workers() {
    if (const char* env = std::getenv("JPH_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring JPH_WORKERS='" << env << "'\n";
    }
    return 1;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw IoError("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

void print_summary(const jph::JpSummary& s) {
    std::cout << "p = " << s.prime << (s.complete ? " (complete)" : " (incomplete: " + std::string(to_string(s.stop)) + ")")
              << '\n';
    std::cout << "|J_p| " << (s.complete ? "= " : ">= ") << s.cardinality << '\n';
    std::cout << "extinction time M_p " << (s.complete ? "= " : ">= ") << s.extinction_time
              << " (last nonempty block " << s.last_nonempty_block << ")\n";
    std::cout << "valuations: v=1 " << s.valuation_histogram[0] << ", v=2 " << s.valuation_histogram[1] << ", v=3 "
              << s.valuation_histogram[2] << ", v>=4 " << s.valuation_histogram[3];
    if (s.unclassified) std::cout << ", unclassified " << s.unclassified;
    std::cout << '\n';
    if (!s.valuation3_blocks.empty()) {
        std::cout << "valuation-3 blocks:";
        for (int m : s.valuation3_blocks) std::cout << ' ' << m;
        std::cout << "\nvaluation-3 members:";
        for (const auto& path : s.valuation3_members) std::cout << ' ' << jph::path_value(path, s.prime).get_str();
        std::cout << '\n';
    }
    for (const auto& h : s.high_valuations)
        std::cout << "v >= 4 at n = " << jph::path_value(h.path, s.prime).get_str() << " (v "
                  << (h.val.saturated ? ">= " : "= ") << h.val.value << ")\n";
    std::cout << "depth " << s.depth << ", " << s.restarts << " restarts, " << s.spine_nodes << " spine nodes\n";
}

struct Run {
    jph::RunManifest manifest;

    explicit Run(std::string command) {
        manifest.command = std::move(command);
        manifest.started = std::chrono::system_clock::now();
    }

    template <class T>
    void param(const std::string& key, const T& value) {
        std::ostringstream s;
        s << value;
        manifest.parameters.emplace_back(key, s.str());
    }

    void finish(const fs::path& where, int code) {
        manifest.finished = std::chrono::system_clock::now();
        manifest.exit_code = code;
        jph::write_manifest(where, manifest);
    }
};

int run_enumerate(std::uint64_t prime, int target_depth, int max_depth, long max_time, int max_levels,
                  const std::string& checkpoint, long checkpoint_interval, bool resume, const std::string& out,
                  const std::string& elements, unsigned workers) {
    if (!jph::is_prime(prime) || prime < 3) throw jph::UsageError(std::to_string(prime) + " is not an odd prime");
    if (resume && checkpoint.empty()) throw jph::UsageError("--resume needs --checkpoint");

    Run run("enumerate");
    run.param("prime", prime);
    run.param("target-depth", target_depth);
    run.param("max-depth", max_depth);
    run.param("max-time", max_time);
    run.param("max-levels", max_levels);
    run.param("resume", resume ? "true" : "false");
    run.param("workers", workers);

    jph::EnumerationConfig config;
    config.initial_target_depth = target_depth;
    config.max_depth = max_depth;
    config.max_time = std::chrono::seconds(max_time);
    config.max_levels = max_levels;
    config.workers = workers;
    config.checkpoint_interval = std::chrono::seconds(checkpoint_interval);
    config.resume = resume;
    if (!checkpoint.empty()) {
        config.checkpoint = checkpoint;
        run.param("checkpoint", checkpoint);
        if (resume) {
            if (!fs::exists(checkpoint)) throw IoError("checkpoint " + checkpoint + " does not exist");
            run.manifest.input_checkpoint = checkpoint;
        }
    }

    std::ofstream element_stream;
    std::optional<jph::ElementWriter> writer;
    if (!elements.empty()) {
        element_stream.open(elements, std::ios::binary | std::ios::trunc);
        if (!element_stream) throw IoError("cannot write " + elements);
        writer.emplace(element_stream, prime);
        config.on_element = [&](const jph::DigitPath& path, const jph::Valuation& v) { (*writer)(path, v); };
        run.manifest.outputs.emplace_back(elements);
    }

    const jph::JpSummary summary = jph::enumerate_jp(prime, config);
    if (writer && !element_stream.flush()) throw IoError("write failed for " + elements);
    jph::write_summary(out, summary);
    run.manifest.outputs.emplace(run.manifest.outputs.begin(), out);
    if (config.checkpoint) run.manifest.outputs.emplace_back(*config.checkpoint);
    print_summary(summary);
    run.finish(out + ".manifest.json", exit_ok);
    return exit_ok;
}

int run_census(std::uint64_t from, std::uint64_t to, unsigned workers, std::uint64_t interval, std::size_t chunk,
               const fs::path& out) {
    if (from < 5 || from >= to) throw jph::UsageError("census needs 5 <= --from < --to");
    if (interval == 0 || chunk == 0) throw jph::UsageError("--interval-size and --chunk must be positive");
    Run run("census");
    run.param("from", from);
    run.param("to", to);
    run.param("workers", workers);
    run.param("interval-size", interval);
    run.param("chunk", chunk);

    const auto result = jph::census(from, to, {workers, interval, chunk});
    ensure_dir(out);
    std::ostringstream records, density;
    jph::write_census_records(records, result.records);
    jph::write_density_table(density, result.density);
    write_file(out / "census.csv", records.str());
    write_file(out / "density.csv", density.str());
    run.manifest.outputs = {out / "census.csv", out / "density.csv"};

    std::printf("[%llu, %llu]: %llu harmonic of %llu primes, ratio %.5f (1/e = %.5f)\n",
                static_cast<unsigned long long>(from), static_cast<unsigned long long>(to),
                static_cast<unsigned long long>(result.density.harmonic),
                static_cast<unsigned long long>(result.density.primes), result.density.ratio(), jph::inverse_e);
    run.finish(out / "manifest.json", exit_ok);
    return exit_ok;
}

int run_stats(const fs::path& summaries, const fs::path& out) {
    if (!fs::is_directory(summaries)) throw IoError("summary directory " + summaries.string() + " does not exist");
    Run run("stats");
    run.param("summaries", summaries.string());

    const auto set = jph::load_summaries(summaries);
    const auto tables = jph::build_stats(set.summaries);
    ensure_dir(out);
    for (const auto& [name, text] : jph::stats_files(tables)) {
        write_file(out / name, text);
        run.manifest.outputs.push_back(out / name);
    }
    std::string rejected = "# jph-rejected 1\nfile,reason\n";
    for (const auto& [file, why] : set.rejected) rejected += file.string() + ',' + why + '\n';
    write_file(out / "rejected.csv", rejected);
    run.manifest.outputs.push_back(out / "rejected.csv");

    if (set.summaries.empty() && set.rejected.empty()) std::cerr << "warning: no summaries in " << summaries << '\n';
    for (auto p : tables.incomplete_primes) std::cerr << "note: p = " << p << " is incomplete; left out of the distribution\n";
    for (auto p : tables.chain_primes)
        std::cout << "p = " << p << ": some n and pn both have valuation >= 3\n";
    std::cout << set.summaries.size() << " summaries read\n";

    const int code = set.rejected.empty() ? exit_ok : exit_io;
    for (const auto& [file, why] : set.rejected) std::cerr << "rejected " << file << ": " << why << '\n';
    run.finish(out / "manifest.json", code);
    return code;
}

int run_verify(std::uint64_t prime, std::uint64_t xmax, const std::string& out, bool inject_fault) {
    if (!jph::is_prime(prime) || prime < 3) throw jph::UsageError(std::to_string(prime) + " is not an odd prime");
    Run run("verify");
    run.param("prime", prime);
    run.param("xmax", xmax);
    if (inject_fault) run.param("inject-fault", "true");

    jph::SeriesHook hook;
    if (inject_fault) {
        // Shifts gamma_1 by p^2: invisible to the mod-p consistency check, wrong beyond it.
        hook = [](jph::SeriesApprox& s) {
            const auto& g = s.gammas.front();
            s.gammas.front() = g + jph::PadicInt(s.prime, g.precision(), mpz_class(s.prime) * mpz_class(s.prime));
        };
    }
    const auto report = jph::verify_against_oracle(prime, xmax, hook);
    const std::string text = jph::describe(report);
    std::cout << text;
    const int code = report.passed() ? exit_ok : exit_mismatch;
    if (!out.empty()) {
        ensure_dir(out);
        const fs::path file = fs::path(out) / ("verify_p" + std::to_string(prime) + ".txt");
        write_file(file, text);
        run.manifest.outputs.push_back(file);
        run.finish(fs::path(out) / "manifest.json", code);
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"J_p enumeration and harmonic-prime census"};
    app.require_subcommand(1);
    const unsigned workers_default = default_workers();

    auto* enumerate = app.add_subcommand("enumerate", "enumerate J_p for one prime");
    std::uint64_t e_prime = 0;
    int e_target = 16, e_max = 1 << 14, e_levels = 0;
    long e_time = 0, e_interval = 60;
    std::string e_checkpoint, e_out, e_elements;
    bool e_resume = false;
    unsigned e_workers = workers_default;
    enumerate->add_option("--prime", e_prime, "odd prime p")->required();
    enumerate->add_option("--target-depth", e_target, "initial working precision")->check(CLI::Range(2, 1 << 20));
    enumerate->add_option("--max-depth", e_max, "largest working precision before giving up")->check(CLI::Range(2, 1 << 20));
    enumerate->add_option("--max-time", e_time, "wall-clock budget in seconds (0 = none)")->check(CLI::NonNegativeNumber);
    enumerate->add_option("--max-levels", e_levels, "levels to process in this run (0 = all)")->check(CLI::NonNegativeNumber);
    enumerate->add_option("--checkpoint", e_checkpoint, "checkpoint file");
    enumerate->add_option("--checkpoint-interval", e_interval, "seconds between checkpoints")->check(CLI::NonNegativeNumber);
    enumerate->add_flag("--resume", e_resume, "continue from --checkpoint");
    enumerate->add_option("--out", e_out, "summary file")->required();
    enumerate->add_option("--elements", e_elements, "element list written by this run");
    enumerate->add_option("--workers", e_workers, "threads per level (default $JPH_WORKERS or 1)")->check(CLI::Range(1, 1024));

    auto* census = app.add_subcommand("census", "harmonic primes in a range");
    std::uint64_t c_from = 0, c_to = 0, c_interval = 10000;
    std::size_t c_chunk = 256;
    unsigned c_workers = workers_default;
    std::string c_out;
    census->add_option("--from", c_from, "lower end (>= 5)")->required();
    census->add_option("--to", c_to, "upper end")->required();
    census->add_option("--workers", c_workers, "threads (default $JPH_WORKERS or 1)")->check(CLI::Range(1, 1024));
    census->add_option("--interval-size", c_interval, "density table interval width");
    census->add_option("--chunk", c_chunk, "primes per work unit");
    census->add_option("--out", c_out, "output directory")->required();

    auto* stats = app.add_subcommand("stats", "tables from a directory of summaries");
    std::string s_in, s_out;
    stats->add_option("--summaries", s_in, "directory of *.summary files")->required();
    stats->add_option("--out", s_out, "output directory")->required();

    auto* verify = app.add_subcommand("verify", "compare the enumerator with exact arithmetic");
    std::uint64_t v_prime = 0, v_xmax = 10000;
    std::string v_out;
    bool v_fault = false;
    verify->add_option("--prime", v_prime, "odd prime p")->required();
    verify->add_option("--xmax", v_xmax, "check n <= xmax");
    verify->add_option("--out", v_out, "directory for the report and manifest");
    verify->add_flag("--inject-fault", v_fault, "corrupt the series (negative control)")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*enumerate)
            return run_enumerate(e_prime, e_target, e_max, e_time, e_levels, e_checkpoint, e_interval, e_resume, e_out,
                                 e_elements, e_workers);
        if (*census) return run_census(c_from, c_to, c_workers, c_interval, c_chunk, c_out);
        if (*stats) return run_stats(s_in, s_out);
        if (*verify) return run_verify(v_prime, v_xmax, v_out, v_fault);
    } catch (const jph::OracleBoundExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const jph::CheckpointError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const jph::SummaryError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const jph::ConsistencyError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_mismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    return exit_usage;
}
