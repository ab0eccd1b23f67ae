#include "jph/verify.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace jph {

VerifyReport verify_against_oracle(std::uint64_t p, std::uint64_t xmax, const SeriesHook& hook,
                                   std::uint64_t oracle_bound) {
    if (xmax < 1) throw UsageError("xmax must be at least 1");
    VerifyReport r;
    r.prime = p;
    r.xmax = xmax;
    r.oracle = naive_jp(p, xmax, oracle_bound);

    int levels = 0;
    for (std::uint64_t x = xmax; x > 0; x /= p) ++levels;
    EnumerationConfig config;
    config.max_levels = levels;
    config.series_hook = hook;
    config.on_element = [&](const DigitPath& path, const Valuation& v) {
        const mpz_class n = path_value(path, p);
        if (n <= xmax) r.enumerated.emplace_back(n.get_ui(), v);
    };
    try {
        enumerate_jp(p, config);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::logic_error& e) {
        r.enumerator_error = e.what();
    }
    std::sort(r.enumerated.begin(), r.enumerated.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::map<std::uint64_t, int> want(r.oracle.begin(), r.oracle.end());
    std::map<std::uint64_t, Valuation> got(r.enumerated.begin(), r.enumerated.end());
    for (const auto& [n, v] : want) {
        auto it = got.find(n);
        if (it == got.end()) {
            r.missing.push_back(n);
            continue;
        }
        const Valuation& e = it->second;
        const bool ok = e.saturated ? v >= e.value : v == e.value;
        if (!ok) r.valuation_mismatches.push_back({n, v, e});
    }
    for (const auto& [n, v] : got)
        if (!want.count(n)) r.extra.push_back(n);
    return r;
}

std::string describe(const VerifyReport& r) {
    std::ostringstream out;
    out << "p = " << r.prime << ", xmax = " << r.xmax << ": oracle " << r.oracle.size() << " members, enumerator "
        << r.enumerated.size() << '\n';
    out << "members:";
    for (const auto& [n, v] : r.oracle) out << ' ' << n << "(v=" << v << ')';
    out << '\n';
    if (!r.enumerator_error.empty()) out << "enumerator failed: " << r.enumerator_error << '\n';
    for (auto n : r.missing) out << "missing from enumeration: " << n << '\n';
    for (auto n : r.extra) out << "not in oracle: " << n << '\n';
    for (const auto& m : r.valuation_mismatches)
        out << "valuation of H_" << m.n << ": oracle " << m.oracle << ", enumerator "
            << (m.enumerated.saturated ? ">=" : "") << m.enumerated.value << '\n';
    out << (r.passed() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

}  // namespace jph
