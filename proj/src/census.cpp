#include "jph/census.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>

#include "jph/harmonic_kernel.hpp"
#include "jph/padic.hpp"
#include "jph/primes.hpp"

namespace jph {

namespace {

using u128 = unsigned __int128;

/// Montgomery arithmetic modulo an odd m < 2^62, with R = 2^64.
class Montgomery {
public:
    explicit Montgomery(std::uint64_t m) : m_(m) {
        std::uint64_t inv = m;  // Newton iteration for m^{-1} mod 2^64
        for (int i = 0; i < 6; ++i) inv *= 2 - m * inv;
        neg_inv_ = 0 - inv;
        r2_ = static_cast<std::uint64_t>((static_cast<u128>(1) << 64) % m);
        r2_ = static_cast<std::uint64_t>(static_cast<u128>(r2_) * r2_ % m);
    }

    std::uint64_t modulus() const { return m_; }

    std::uint64_t reduce(u128 t) const {
        const std::uint64_t q = static_cast<std::uint64_t>(t) * neg_inv_;
        const std::uint64_t r = static_cast<std::uint64_t>((t + static_cast<u128>(q) * m_) >> 64);
        return r >= m_ ? r - m_ : r;
    }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return reduce(static_cast<u128>(a) * b); }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        const std::uint64_t s = a + b;
        return s >= m_ ? s - m_ : s;
    }
    std::uint64_t to(std::uint64_t a) const { return mul(a % m_, r2_); }
    std::uint64_t from(std::uint64_t a) const { return reduce(a); }

private:
    std::uint64_t m_;
    std::uint64_t neg_inv_;
    std::uint64_t r2_;
};

/// x mod p for x < 2^52 through a floating reciprocal.
struct FastMod {
    std::uint64_t p;
    double inv;

    explicit FastMod(std::uint64_t prime) : p(prime), inv(1.0 / static_cast<double>(prime)) {}

    std::uint64_t operator()(std::uint64_t x) const {
        auto r = static_cast<std::int64_t>(x - static_cast<std::uint64_t>(static_cast<double>(x) * inv) * p);
        if (r < 0) r += static_cast<std::int64_t>(p);
        if (r >= static_cast<std::int64_t>(p)) r -= static_cast<std::int64_t>(p);
        return static_cast<std::uint64_t>(r);
    }
};

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(a % m);
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::pair(r1, r0 - q * r1);
        std::tie(t0, t1) = std::pair(t1, t0 - q * t1);
    }
    if (r0 != 1) throw std::domain_error("not invertible");
    return static_cast<std::uint64_t>(t0 < 0 ? t0 + static_cast<std::int64_t>(m) : t0);
}

void check_prime(std::uint64_t p) {
    if (p < 5) throw std::domain_error("harmonicity test needs p >= 5, got " + std::to_string(p));
    if (!is_prime(p)) throw std::domain_error(std::to_string(p) + " is not prime");
    if (p > (std::uint64_t{1} << 30)) throw std::domain_error("p = " + std::to_string(p) + " is too large");
}

/// 1/k mod p^2 for k = 1..p-1 (index k) in Montgomery form, by one batch inversion.
std::vector<std::uint64_t> inverses_mod_p2(std::uint64_t p, const Montgomery& mg) {
    std::vector<std::uint64_t> inv(p);
    const std::uint64_t one = mg.to(1);
    std::uint64_t acc = one, k_m = 0;
    for (std::uint64_t k = 1; k < p; ++k) {
        inv[k] = acc;  // (k-1)! for now
        k_m = mg.add(k_m, one);
        acc = mg.mul(acc, k_m);
    }
    std::uint64_t back = mg.to(inverse_mod(mg.from(acc), mg.modulus()));  // 1/(p-1)!
    for (std::uint64_t k = p - 1; k >= 1; --k) {
        inv[k] = mg.mul(inv[k], back);
        back = mg.mul(back, k_m);
        k_m = k_m >= one ? k_m - one : k_m + mg.modulus() - one;
    }
    return inv;
}

/// H_{p-1}/p mod p^2 in Montgomery form: 1/k + 1/(p-k) = p/(k(p-k)).
std::uint64_t quotient_mod_p2(std::uint64_t p, const Montgomery& mg, const std::vector<std::uint64_t>& inv) {
    std::uint64_t a = 0;
    for (std::uint64_t k = 1; k <= (p - 1) / 2; ++k) a = mg.add(a, mg.mul(inv[k], inv[p - k]));
    return a;
}

}  // namespace

const char* to_string(CensusReason reason) {
    switch (reason) {
        case CensusReason::extra_level1_element: return "extra_level1_element";
        case CensusReason::level2_child_found: return "level2_child_found";
        case CensusReason::harmonic: return "harmonic";
    }
    return "unknown";
}

CensusRecord is_harmonic(std::uint64_t p) {
    check_prime(p);
    const Montgomery mg(p * p);
    const auto inv = inverses_mod_p2(p, mg);

    // Residues are kept in Montgomery form x * 2^64; modulo p that is x * c
    // with c = 2^64 mod p, which preserves zero and membership once scaled.
    const std::uint64_t c = mg.to(1) % p;
    const FastMod mod_p(p);
    std::vector<std::uint8_t> in_r(p, 0);
    in_r[0] = 1;
    std::uint64_t h = 0;
    bool extra = false;
    for (std::uint64_t k = 1; k < p; ++k) {
        h = mg.add(h, inv[k]);
        const std::uint64_t r = mod_p(h);
        in_r[r] = 1;
        if (r == 0 && k < p - 1) extra = true;
    }
    if (h != 0) throw std::logic_error("Wolstenholme's congruence fails for p = " + std::to_string(p));
    if (extra) return {p, false, CensusReason::extra_level1_element};

    // Boyd's series vanishes mod p^2 here, so H_{p^2-p} = H_{p-1}/p (mod p^2).
    // The walk to H_{p^2-1} adds 1/(p(p-1) + j) = (1/j)(1 + p/j) (mod p^2).
    const std::uint64_t h_first = quotient_mod_p2(p, mg, inv);
    const std::uint64_t one = mg.to(1), p_m = mg.to(p);
    std::uint64_t h_last = h_first;
    for (std::uint64_t j = 1; j < p; ++j) h_last = mg.add(h_last, mg.mul(inv[j], mg.add(one, mg.mul(p_m, inv[j]))));

    for (const std::uint64_t hn_m : {h_first, h_last}) {
        const std::uint64_t hn = mg.from(hn_m);
        if (hn % p != 0) throw std::logic_error("level-two member lost divisibility for p = " + std::to_string(p));
        const std::uint64_t u = hn / p;
        if (in_r[(p - u) % p * c % p]) return {p, false, CensusReason::level2_child_found};
    }
    return {p, true, CensusReason::harmonic};
}

CensusRecord is_harmonic_reference(std::uint64_t p) {
    check_prime(p);
    const PrefixTable prefix = prefix_table(p, 3);
    for (std::uint64_t k = 1; k + 1 < p; ++k)
        if (prefix[k].digit0() == 0) return {p, false, CensusReason::extra_level1_element};
    const PadicInt& h_top = prefix[p - 1];
    if (valuation(h_top).value < 2) throw std::logic_error("Wolstenholme's congruence fails for p = " + std::to_string(p));

    const PadicInt h_pn = div_exact_p(h_top, 1);
    const auto walk = block_walk(h_pn, mpz_class(static_cast<unsigned long>(p - 1)));
    for (const std::size_t k : {std::size_t{0}, static_cast<std::size_t>(p - 1)}) {
        const PadicInt& hn = walk[k];
        if (hn.digit0() != 0) throw std::logic_error("level-two member lost divisibility for p = " + std::to_string(p));
        const std::uint64_t u = div_exact_p(hn, 1).digit0();
        if (prefix.contains((p - u) % p)) return {p, false, CensusReason::level2_child_found};
    }
    return {p, true, CensusReason::harmonic};
}

std::uint64_t wolstenholme_quotient(std::uint64_t p) {
    check_prime(p);
    const Montgomery mg(p * p);
    return mg.from(quotient_mod_p2(p, mg, inverses_mod_p2(p, mg)));
}

int wolstenholme_valuation(std::uint64_t p) {
    const std::uint64_t a = wolstenholme_quotient(p);
    if (a == 0) return 3;
    return a % p == 0 ? 2 : 1;
}

DensityTable density_table(const std::vector<CensusRecord>& records, std::uint64_t lo, std::uint64_t hi,
                           std::uint64_t interval_size) {
    if (interval_size == 0) throw std::invalid_argument("interval size must be positive");
    DensityTable t;
    t.interval_size = interval_size;
    for (std::uint64_t k = (lo - 1) / interval_size; k * interval_size < hi; ++k) {
        DensityRow row;
        row.start = std::max(lo, k * interval_size + 1);
        row.end = std::min(hi, (k + 1) * interval_size);
        t.rows.push_back(row);
    }
    const std::uint64_t first = (lo - 1) / interval_size;
    for (const auto& r : records) {
        if (r.prime < lo || r.prime > hi) throw std::invalid_argument("census record outside [lo, hi]");
        auto& row = t.rows[(r.prime - 1) / interval_size - first];
        ++row.primes;
        row.harmonic += r.harmonic;
        ++t.primes;
        t.harmonic += r.harmonic;
    }
    return t;
}

CensusResult census(std::uint64_t lo, std::uint64_t hi, const CensusConfig& config) {
    if (lo < 5 || lo >= hi) throw std::invalid_argument("census needs 5 <= lo < hi");
    if (config.chunk_primes == 0) throw std::invalid_argument("chunk size must be positive");
    const auto primes = primes_between(lo, hi);
    CensusResult out;
    out.records.resize(primes.size());

    const std::size_t chunks = (primes.size() + config.chunk_primes - 1) / config.chunk_primes;
    auto run_chunk = [&](std::size_t c) {
        const std::size_t begin = c * config.chunk_primes;
        const std::size_t end = std::min(primes.size(), begin + config.chunk_primes);
        for (std::size_t i = begin; i < end; ++i) out.records[i] = is_harmonic(primes[i]);
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(chunks)));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        // Each chunk writes only its own slots of `records`, so the merge is positional.
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t c; (c = next.fetch_add(1)) < chunks;) run_chunk(c);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        next = chunks;
                    }
                });
            }
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    out.density = density_table(out.records, lo, hi, config.interval_size);
    return out;
}

void write_census_records(std::ostream& out, const std::vector<CensusRecord>& records) {
    out << "# jph-census 1\n";
    for (const auto& r : records) out << r.prime << ',' << (r.harmonic ? 1 : 0) << '\n';
}

namespace {

std::string fixed5(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", x);
    return buf;
}

}  // namespace

void write_density_table(std::ostream& out, const DensityTable& table) {
    auto row = [&](const char* kind, std::uint64_t start, std::uint64_t end, std::uint64_t primes,
                   std::uint64_t harmonic, double ratio) {
        out << kind << ',' << start << ',' << end << ',' << primes << ',' << harmonic << ',' << fixed5(ratio) << ','
            << fixed5(ratio - inverse_e) << '\n';
    };
    out << "# jph-density 1\n";
    out << "kind,interval_start,interval_end,primes,harmonic,ratio,ratio_minus_inv_e\n";
    for (const auto& r : table.rows) row("interval", r.start, r.end, r.primes, r.harmonic, r.ratio());
    if (!table.rows.empty())
        row("total", table.rows.front().start, table.rows.back().end, table.primes, table.harmonic, table.ratio());
}

}  // namespace jph
