#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "jph/census.hpp"
#include "jph/jp_enumerator.hpp"
#include "jph/primes.hpp"

TEST_CASE("primes") {
    CHECK(jph::primes_between(1, 30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(jph::primes_between(5, 16843).size() == 1942);
    CHECK(jph::primes_between(490000, 500000).size() == 772);
    CHECK(jph::is_prime(16843));
    CHECK_FALSE(jph::is_prime(1));
    CHECK_FALSE(jph::is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK(jph::is_prime(18446744073709551557ULL));
    // Segment boundaries do not drop or repeat primes.
    std::vector<std::uint64_t> small;
    jph::for_each_prime(1000, 5000, [&](std::uint64_t q) { small.push_back(q); }, 97);
    CHECK(small == jph::primes_between(1000, 5000));
}

TEST_CASE("is_harmonic examples") {
    CHECK(jph::is_harmonic(5) == jph::CensusRecord{5, true, jph::CensusReason::harmonic});
    CHECK_FALSE(jph::is_harmonic(11).harmonic);
    CHECK(jph::is_harmonic(11).reason == jph::CensusReason::extra_level1_element);
    CHECK_FALSE(jph::is_harmonic(83).harmonic);
    CHECK_THROWS_AS(jph::is_harmonic(3), std::domain_error);
    CHECK_THROWS_AS(jph::is_harmonic(2), std::domain_error);
    CHECK_THROWS_AS(jph::is_harmonic(15), std::domain_error);
}

TEST_CASE("fast test agrees with the PadicInt route") {
    for (std::uint64_t p : jph::primes_between(5, 3000)) CHECK(jph::is_harmonic(p) == jph::is_harmonic_reference(p));
}

TEST_CASE("fast test agrees with enumeration") {
    // Three levels settle the question: a harmonic prime's tree dies at level 3.
    jph::EnumerationConfig config;
    config.max_levels = 3;
    for (std::uint64_t p : jph::primes_between(5, 1000)) {
        const auto s = jph::enumerate_jp(p, config);
        const bool three = s.complete && s.cardinality == 3;
        const auto r = jph::is_harmonic(p);
        CHECK_MESSAGE(r.harmonic == three, "p = " << p);
        if (!r.harmonic) {
            CHECK_MESSAGE(s.cardinality > 3, "p = " << p);
            CHECK_MESSAGE((r.reason == jph::CensusReason::extra_level1_element) == (s.block_sizes[0] > 1), "p = " << p);
        }
    }
}

TEST_CASE("Wolstenholme quotient") {
    for (std::uint64_t p : jph::primes_between(5, 2000)) CHECK(jph::wolstenholme_valuation(p) == 2);
    CHECK(jph::wolstenholme_valuation(16843) == 3);
    CHECK(jph::wolstenholme_quotient(16843) == 0);
}

TEST_CASE("census is independent of workers and chunking") {
    const auto a = jph::census(5, 20000, {1, 1000, 256});
    const auto b = jph::census(5, 20000, {3, 1000, 17});
    const auto c = jph::census(5, 20000, {8, 1000, 1});
    CHECK(a.records == b.records);
    CHECK(a.records == c.records);
    CHECK(a.density == b.density);
    std::ostringstream sa, sc;
    jph::write_census_records(sa, a.records);
    jph::write_census_records(sc, c.records);
    CHECK(sa.str() == sc.str());
}

TEST_CASE("density table") {
    const auto r = jph::census(5, 100, {1, 10000, 256});
    REQUIRE(r.density.rows.size() == 1);
    CHECK(r.density.rows[0].start == 5);
    CHECK(r.density.rows[0].end == 100);
    CHECK(r.density.primes == 23);
    CHECK(r.density.ratio() >= 0.0);
    CHECK(r.density.ratio() <= 1.0);

    const auto w = jph::census(5, 35000, {1, 10000, 64});
    REQUIRE(w.density.rows.size() == 4);
    CHECK(w.density.rows[0].start == 5);
    CHECK(w.density.rows[0].end == 10000);
    CHECK(w.density.rows[1].start == 10001);
    CHECK(w.density.rows[3].end == 35000);
    std::uint64_t primes = 0, harmonic = 0;
    for (const auto& row : w.density.rows) {
        primes += row.primes;
        harmonic += row.harmonic;
    }
    CHECK(primes == w.density.primes);
    CHECK(harmonic == w.density.harmonic);
    CHECK(w.density.rows[0].primes == 1227);
    CHECK(w.density.rows[0].harmonic == 447);

    std::ostringstream out;
    jph::write_density_table(out, w.density);
    const std::string text = out.str();
    CHECK(text.find("interval,5,10000,1227,447,0.36430,-0.00358\n") != std::string::npos);
    CHECK(text.find("\ntotal,5,35000,") != std::string::npos);

    CHECK_THROWS_AS(jph::census(3, 100), std::invalid_argument);
    CHECK_THROWS_AS(jph::census(100, 100), std::invalid_argument);
}
