#include <random>

#include "doctest.h"
#include "jph/boyd_series.hpp"
#include "jph/harmonic_kernel.hpp"
#include "support.hpp"

using jph::PadicInt;

namespace {

int factorial_valuation(std::uint64_t n, std::uint64_t p) {
    int v = 0;
    for (std::uint64_t q = p; q <= n; q *= p) v += static_cast<int>(n / q);
    return v;
}

}  // namespace

TEST_CASE("tail precision") {
    CHECK(jph::tail_precision(11, 5) == 12);
    CHECK(jph::tail_precision(127, 1) == 4);
    // (p - 1) | 2(N + 1): the first omitted coefficient is not p-integral.
    CHECK(jph::tail_precision(11, 4) == 9);
    CHECK(jph::tail_precision(17, 7) == 15);
    CHECK(jph::tail_precision(17, 8) == 18);
    CHECK(jph::tail_precision(3, 8) == 15);
    CHECK(jph::tail_precision(3, 2) == 4);  // floor(log_3 3) = 1
}

TEST_CASE("interpolation loss is v_p((2N)!) and below 2N/(p-1)") {
    for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u, 127u}) {
        for (int n = 1; n <= 60; ++n) {
            const int loss = jph::interpolation_loss(p, n);
            CHECK(loss == factorial_valuation(2 * static_cast<std::uint64_t>(n), p));
            CHECK(static_cast<std::uint64_t>(loss) * (p - 1) < 2 * static_cast<std::uint64_t>(n));
            CHECK(loss <= jph::vandermonde_loss_budget(p, n));
        }
    }
}

TEST_CASE("plan_series leaves room for the requested depth") {
    for (std::uint64_t p : {3u, 5u, 11u, 127u}) {
        for (int depth : {2, 16, 64, 300}) {
            const auto plan = jph::plan_series(p, depth);
            const auto series = jph::fit_coefficients(p, plan.terms, plan.input_precision);
            CHECK(series.effective_precision >= depth - 1);
            CHECK(series.valuation_loss * static_cast<int>(p - 1) < 2 * plan.terms);
        }
    }
}

TEST_CASE("fit reproduces its data and extrapolates") {
    for (std::uint64_t p : {5u, 7u, 11u}) {
        const int n_terms = 8, s = 24;
        const auto series = jph::fit_coefficients(p, n_terms, s);
        const int eff = series.effective_precision;
        CHECK(eff == std::min(jph::tail_precision(p, n_terms), s - series.valuation_loss));
        CHECK(series.gamma_valuation(1) >= 2);
        const auto b = jph::restricted_sums(p, eff, n_terms + 5);
        for (int n = 1; n <= n_terms + 5; ++n)
            CHECK(jph::eval_series(series, mpz_class(n), eff) == b[static_cast<std::size_t>(n - 1)]);
    }
}

TEST_CASE("extrapolation holds for random (p, N)") {
    std::mt19937_64 rng(7);
    const std::uint64_t primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 83, 127};
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t p = primes[rng() % std::size(primes)];
        const int n_terms = 1 + static_cast<int>(rng() % 12);
        const int s = jph::vandermonde_loss_budget(p, n_terms) + 2 + static_cast<int>(rng() % 20);
        const auto series = jph::fit_coefficients(p, n_terms, s);
        const int eff = series.effective_precision;
        const auto b = jph::restricted_sums(p, eff, n_terms + 5);
        for (int n = n_terms + 1; n <= n_terms + 5; ++n)
            CHECK_MESSAGE(jph::eval_series(series, mpz_class(n), eff) == b[static_cast<std::size_t>(n - 1)], "p=" << p << " N=" << n_terms << " s=" << s << " eff=" << eff << " n=" << n);
    }
}

TEST_CASE("fit rejects data that cannot carry the loss") {
    // N = 20, p = 3: v_3(40!) = 18.
    CHECK_THROWS_AS(jph::fit_coefficients(3, 20, 18), jph::PrecisionExhausted);
}

TEST_CASE("eval_lift") {
    const auto series = jph::fit_coefficients(7, 6, 20);
    // n = 0: H_0 / p + empty sum.
    CHECK(jph::eval_lift(series, mpz_class(0), PadicInt::zero(7, 5)) == PadicInt::zero(7, 4));

    const PadicInt h6 = jph::test::harmonic_residue(6, 7, 5);
    const PadicInt h42 = jph::eval_lift(series, mpz_class(6), h6);
    CHECK(h42.precision() == 4);
    CHECK(h42 == jph::test::harmonic_residue(42, 7, 4));
    CHECK(jph::valuation(h42).value >= 1);

    const auto s5 = jph::fit_coefficients(5, 6, 20);
    const PadicInt h20 = jph::eval_lift(s5, mpz_class(4), jph::test::harmonic_residue(4, 5, 4));
    CHECK(h20 == jph::test::harmonic_residue(20, 5, 3));
    CHECK(h20.residue() == 65);
    CHECK(jph::valuation(h20).value >= 1);

    CHECK_THROWS_AS(jph::eval_lift(series, mpz_class(1), PadicInt::one(7, 5)), jph::NotDivisible);
    const PadicInt too_precise(7, series.effective_precision + 2, 49L);
    CHECK_THROWS_AS(jph::eval_lift(series, mpz_class(6), too_precise), jph::PrecisionExhausted);
}
