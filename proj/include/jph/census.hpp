#pragma once

/// Harmonic primes (|J_p| = 3) and range censuses.
///
/// For p >= 5, J_p always holds p-1, p^2-p and p^2-1. The prime is harmonic
/// when nothing else appears: no other k < p-1 has p | H_k, and neither
/// level-two member has children.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace jph {

enum class CensusReason { extra_level1_element, level2_child_found, harmonic };

const char* to_string(CensusReason reason);

struct CensusRecord {
    std::uint64_t prime = 0;
    bool harmonic = false;
    CensusReason reason = CensusReason::harmonic;

    friend bool operator==(const CensusRecord&, const CensusRecord&) = default;
};

/// O(p) word-sized operations modulo p^2. Throws std::domain_error for p < 5
/// or composite p, std::logic_error if Wolstenholme's congruence fails.
CensusRecord is_harmonic(std::uint64_t p);

/// The same test through PadicInt residues (prefix table at precision 3 and a
/// block walk); slower, kept as a cross-check.
CensusRecord is_harmonic_reference(std::uint64_t p);

/// H_{p-1}/p mod p^2, which is zero by Wolstenholme's theorem modulo p.
std::uint64_t wolstenholme_quotient(std::uint64_t p);

/// min(v_p(H_{p-1}), 3): 3 exactly for Wolstenholme primes, 2 otherwise.
int wolstenholme_valuation(std::uint64_t p);

struct DensityRow {
    std::uint64_t start = 0;
    std::uint64_t end = 0;
    std::uint64_t primes = 0;
    std::uint64_t harmonic = 0;

    double ratio() const { return primes ? static_cast<double>(harmonic) / static_cast<double>(primes) : 0.0; }

    friend bool operator==(const DensityRow&, const DensityRow&) = default;
};

/// Rows cover (k I, (k+1) I] clipped to [lo, hi], so [5, 10^4] is the first row for I = 10^4.
struct DensityTable {
    std::uint64_t interval_size = 0;
    std::vector<DensityRow> rows;
    std::uint64_t primes = 0;
    std::uint64_t harmonic = 0;

    double ratio() const { return primes ? static_cast<double>(harmonic) / static_cast<double>(primes) : 0.0; }

    friend bool operator==(const DensityTable&, const DensityTable&) = default;
};

inline constexpr double inverse_e = 0.36787944117144233;

struct CensusResult {
    std::vector<CensusRecord> records;
    DensityTable density;
};

struct CensusConfig {
    unsigned workers = 1;
    std::uint64_t interval_size = 10000;
    /// Primes per work unit; units are merged in order.
    std::size_t chunk_primes = 256;
};

/// Every prime in [lo, hi], ascending; requires 5 <= lo < hi.
CensusResult census(std::uint64_t lo, std::uint64_t hi, const CensusConfig& config = {});

DensityTable density_table(const std::vector<CensusRecord>& records, std::uint64_t lo, std::uint64_t hi,
                           std::uint64_t interval_size);

/// "# jph-census 1" then "p,0|1" lines.
void write_census_records(std::ostream& out, const std::vector<CensusRecord>& records);
/// One "interval" row per interval and a closing "total" row; ratio and ratio - 1/e to 5 decimals.
void write_density_table(std::ostream& out, const DensityTable& table);

}  // namespace jph
