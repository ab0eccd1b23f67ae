#include <random>
#include <vector>

#include "doctest.h"
#include "jph/padic.hpp"

using jph::PadicInt;

namespace {

PadicInt P(std::uint64_t p, int s, long v) { return {p, s, v}; }

}  // namespace

TEST_CASE("add wraps and keeps the smaller precision") {
    CHECK(P(5, 2, 24) + P(5, 2, 1) == P(5, 2, 0));
    CHECK(P(5, 3, 50) + P(5, 2, 10) == P(5, 2, 10));
    const PadicInt x = P(7, 2, 30);
    CHECK(P(7, 3, 0) + x == x);
    CHECK((P(7, 3, 0) + P(7, 5, 300)).precision() == 3);
    CHECK_THROWS_AS(P(5, 2, 1) + P(7, 2, 1), jph::UsageError);
}

TEST_CASE("negative residues are reduced into range") {
    CHECK(P(5, 2, -1).residue() == 24);
    CHECK(-P(5, 2, 1) == P(5, 2, 24));
    CHECK(P(5, 2, 3) - P(5, 2, 4) == P(5, 2, 24));
}

TEST_CASE("mul") {
    CHECK(P(5, 2, 7) * P(5, 2, 18) == P(5, 2, 1));
    CHECK(P(3, 2, 3) * P(3, 2, 3) == P(3, 2, 0));
    const PadicInt x = P(11, 4, 1234);
    CHECK(x * PadicInt::one(11, 4) == x);
    CHECK_THROWS_AS(P(5, 2, 1) * P(3, 2, 1), jph::UsageError);
}

TEST_CASE("inv_unit") {
    CHECK(jph::inv_unit(P(5, 2, 7)) == P(5, 2, 18));
    CHECK(jph::inv_unit(P(7, 1, 6)) == P(7, 1, 6));
    CHECK_THROWS_AS(jph::inv_unit(P(5, 2, 10)), jph::NonUnit);
    // Newton lifting to many digits.
    const PadicInt a = P(13, 40, 123456789);
    CHECK(a * jph::inv_unit(a) == PadicInt::one(13, 40));
}

TEST_CASE("div_exact_p and mul_p_power") {
    CHECK(jph::div_exact_p(P(5, 3, 50), 1) == P(5, 2, 10));
    CHECK(jph::div_exact_p(P(5, 3, 0), 2) == P(5, 1, 0));
    CHECK_THROWS_AS(jph::div_exact_p(P(5, 3, 7), 1), jph::NotDivisible);
    CHECK_THROWS_AS(jph::div_exact_p(P(5, 3, 0), 3), jph::PrecisionExhausted);
    CHECK(jph::mul_p_power(P(5, 2, 10), 1) == P(5, 3, 50));
}

TEST_CASE("valuation") {
    CHECK(jph::valuation(P(5, 3, 50)) == jph::Valuation{2, false});
    CHECK(jph::valuation(P(5, 3, 0)) == jph::Valuation{3, true});
    CHECK(jph::valuation(P(5, 3, 1)) == jph::Valuation{0, false});
    // H_6 = 49/20; 49 * 20^{-1} mod 343 = 294.
    const PadicInt h6 = P(7, 3, 49) * jph::inv_unit(P(7, 3, 20));
    CHECK(h6.residue() == 294);
    CHECK(jph::valuation(h6) == jph::Valuation{2, false});
}

TEST_CASE("batch_inverse") {
    std::vector<PadicInt> one{P(5, 2, 1)};
    CHECK(jph::batch_inverse(one) == one);

    std::vector<PadicInt> pair{P(5, 2, 7), P(5, 2, 18)};
    CHECK(jph::batch_inverse(pair) == std::vector<PadicInt>{P(5, 2, 18), P(5, 2, 7)});

    std::mt19937_64 rng(20240611);
    std::vector<PadicInt> units;
    while (units.size() < 100) {
        const long v = static_cast<long>(rng() % 161051);  // 11^5
        if (v % 11) units.push_back(P(11, 5, v));
    }
    const auto inv = jph::batch_inverse(units);
    REQUIRE(inv.size() == units.size());
    for (std::size_t i = 0; i < units.size(); ++i) CHECK(inv[i] == jph::inv_unit(units[i]));

    std::vector<PadicInt> bad{P(5, 2, 1), P(5, 2, 2), P(5, 2, 15), P(5, 2, 3)};
    try {
        jph::batch_inverse(bad);
        FAIL("expected NonUnit");
    } catch (const jph::NonUnit& e) {
        CHECK(e.index() == 2);
    }
}

TEST_CASE("hex and text round trip") {
    const PadicInt a = P(127, 9, 987654321);
    CHECK(jph::deserialize_padic(jph::serialize(a)) == a);
    CHECK(jph::to_hex(mpz_class(0)) == "0");
    CHECK(jph::from_hex("ff") == 255);
    CHECK_THROWS_AS(jph::from_hex("0ff"), jph::UsageError);
    CHECK_THROWS_AS(jph::from_hex("FF"), jph::UsageError);
    CHECK_THROWS_AS(jph::from_hex(""), jph::UsageError);
    CHECK_THROWS_AS(jph::deserialize_padic("5 2 ff"), jph::UsageError);  // 255 >= 25
}

TEST_CASE("precision must be positive") {
    CHECK_THROWS_AS(P(5, 0, 1), jph::UsageError);
    CHECK_THROWS_AS(P(5, 3, 1).reduced(4), jph::PrecisionExhausted);
    CHECK(P(5, 3, 124).reduced(2) == P(5, 2, 24));
}
