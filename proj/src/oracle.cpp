#include "jph/oracle.hpp"

#include <string>

namespace jph {

namespace {

constexpr std::uint64_t reduce_every = 64;

void check_bound(std::uint64_t n, std::uint64_t bound) {
    if (n > bound)
        throw OracleBoundExceeded("oracle refuses n = " + std::to_string(n) + " beyond its bound " +
                                  std::to_string(bound));
}

int valuation_of(const mpz_class& x, std::uint64_t p) {
    mpz_class q = x;
    int v = 0;
    while (mpz_divisible_ui_p(q.get_mpz_t(), p)) {
        mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), p);
        ++v;
    }
    return v;
}

}  // namespace

void ExactHarmonic::step() {
    check_bound(n_ + 1, bound_);
    ++n_;
    // a/b + 1/n = (a n + b) / (b n)
    num_ *= n_;
    num_ += den_;
    den_ *= n_;
    reduced_ = false;
    if (n_ % reduce_every == 0) reduce();
}

void ExactHarmonic::advance_to(std::uint64_t target) {
    if (target < n_) throw std::invalid_argument("ExactHarmonic only moves forward");
    check_bound(target, bound_);
    while (n_ < target) step();
}

void ExactHarmonic::reduce() {
    if (reduced_) return;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
    if (g != 1) {
        mpz_divexact(num_.get_mpz_t(), num_.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
    reduced_ = true;
}

const mpz_class& ExactHarmonic::numerator() {
    reduce();
    return num_;
}

const mpz_class& ExactHarmonic::denominator() {
    reduce();
    return den_;
}

mpq_class ExactHarmonic::value() {
    reduce();
    return mpq_class(num_, den_);
}

int ExactHarmonic::valuation(std::uint64_t p) {
    if (n_ == 0) throw std::domain_error("H_0 = 0 has no valuation");
    // The valuation of a fraction does not depend on its representation.
    if (num_ == 0) throw std::domain_error("valuation of zero");
    return valuation_of(num_, p) - valuation_of(den_, p);
}

int exact_valuation(std::uint64_t p, std::uint64_t n, std::uint64_t bound) {
    if (n < 1) throw std::invalid_argument("exact_valuation needs n >= 1");
    check_bound(n, bound);
    ExactHarmonic h(bound);
    h.advance_to(n);
    return h.valuation(p);
}

std::vector<std::pair<std::uint64_t, int>> naive_jp(std::uint64_t p, std::uint64_t xmax, std::uint64_t bound) {
    check_bound(xmax, bound);
    std::vector<std::pair<std::uint64_t, int>> out;
    ExactHarmonic h(bound);
    while (h.n() < xmax) {
        h.step();
        const int v = h.valuation(p);
        if (v >= 1) out.emplace_back(h.n(), v);
    }
    return out;
}

}  // namespace jph
