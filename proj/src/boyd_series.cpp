#include "jph/boyd_series.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "jph/harmonic_kernel.hpp"

namespace jph {

namespace {

int small_valuation(std::uint64_t x, std::uint64_t p) {
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

std::uint64_t unit_part(std::uint64_t x, std::uint64_t p) {
    while (x % p == 0) x /= p;
    return x;
}

}  // namespace

void SeriesApprox::refresh() {
    valuations_.clear();
    valuations_.reserve(gammas.size());
    for (const auto& g : gammas) valuations_.push_back(valuation(g).value);
}

int tail_precision(std::uint64_t p, int terms) {
    if (terms < 1) throw UsageError("tail_precision needs N >= 1");
    int floor_log = 0;
    for (std::uint64_t power = p; power <= static_cast<std::uint64_t>(terms) + 1; power *= p) ++floor_log;
    // c_k has p in its denominator when (p - 1) | 2k (von Staudt-Clausen), which costs
    // one digit more than 2N + 2 - floor(log_p(N + 1)). The bound is monotone in k, so
    // the first omitted term decides.
    const std::uint64_t two_k = 2 * static_cast<std::uint64_t>(terms) + 2;
    return static_cast<int>(two_k) - floor_log - (two_k % (p - 1) == 0 ? 1 : 0);
}

int vandermonde_loss_budget(std::uint64_t p, int terms) {
    const std::uint64_t num = 2 * static_cast<std::uint64_t>(terms);
    return static_cast<int>((num + p - 2) / (p - 1));
}

int interpolation_loss(std::uint64_t p, int terms) {
    // x_i - x_l = (i - l)(i + l)
    int worst = 0;
    for (int i = 0; i <= terms; ++i) {
        int sum = 0;
        for (int l = 0; l <= terms; ++l) {
            if (l == i) continue;
            sum += small_valuation(static_cast<std::uint64_t>(std::abs(i - l)), p);
            if (i + l > 0) sum += small_valuation(static_cast<std::uint64_t>(i + l), p);
        }
        worst = std::max(worst, sum);
    }
    return worst;
}

SeriesPlan plan_series(std::uint64_t p, int target_depth) {
    if (target_depth < 1) throw UsageError("target depth must be positive");
    int n = 1;
    while (tail_precision(p, n) - vandermonde_loss_budget(p, n) < target_depth + 1) ++n;
    return {n, tail_precision(p, n) + vandermonde_loss_budget(p, n)};
}

SeriesApprox fit_coefficients(std::uint64_t p, int terms, int precision) {
    if (terms < 1) throw UsageError("fit needs at least one coefficient");
    const auto sums = restricted_sums(p, precision, terms);
    return fit_coefficients(sums);
}

SeriesApprox fit_coefficients(std::span<const PadicInt> restricted) {
    if (restricted.empty()) throw UsageError("fit needs at least one data point");
    const std::uint64_t p = restricted.front().prime();
    const int s = restricted.front().precision();
    const int n_terms = static_cast<int>(restricted.size());
    for (const auto& b : restricted)
        if (b.prime() != p || b.precision() != s) throw UsageError("fit data must share prime and precision");

    const int loss = interpolation_loss(p, n_terms);
    if (static_cast<std::uint64_t>(loss) * (p - 1) >= 2 * static_cast<std::uint64_t>(n_terms))
        throw std::logic_error("interpolation loss " + std::to_string(loss) + " violates the bound 2N/(p-1)");
    if (loss >= s)
        throw PrecisionExhausted("interpolation loss " + std::to_string(loss) + " reaches data precision " +
                                 std::to_string(s));

    const auto nodes = static_cast<std::size_t>(n_terms) + 1;

    // Lower bound on the valuation of every divided difference of p-integral
    // data; scaling by p^scale makes all of them p-integral.
    int scale = 0;
    {
        std::vector<int> den(nodes, 0);
        for (std::size_t j = 1; j < nodes; ++j)
            for (std::size_t i = nodes - 1; i >= j; --i) {
                const int t = small_valuation(j, p) + small_valuation(2 * i - j, p);
                den[i] = std::max(den[i], den[i - 1]) + t;
                scale = std::max(scale, den[i]);
            }
    }
    const int work = s + 2 * scale;

    // Inverses of the unit parts of 1..2N, the only factors of x_i - x_l.
    std::vector<mpz_class> unit_inverse(2 * nodes);
    unit_inverse[0] = 1;
    for (std::size_t m = 1; m < unit_inverse.size(); ++m) unit_inverse[m] = unit_part(m, p);
    raw::batch_inverse(std::span(unit_inverse).subspan(1), p, work);

    // In-place Newton divided differences on x_i = i^2 with exact data b_0 = 0, b_i.
    std::vector<mpz_class> table(nodes);
    std::vector<int> digits(nodes, work);
    const mpz_class& scale_power = prime_power(p, scale);
    table[0] = 0;
    for (std::size_t i = 1; i < nodes; ++i) {
        table[i] = restricted[i - 1].residue() * scale_power;
        mpz_mod(table[i].get_mpz_t(), table[i].get_mpz_t(), prime_power(p, work).get_mpz_t());
    }
    mpz_class diff;
    for (std::size_t j = 1; j < nodes; ++j) {
        for (std::size_t i = nodes - 1; i >= j; --i) {
            const std::uint64_t a = j, b = 2 * i - j;
            const int t = small_valuation(a, p) + small_valuation(b, p);
            const int known = std::min(digits[i], digits[i - 1]);
            const int left = known - t;
            if (left <= 0) throw PrecisionExhausted("divided differences ran out of digits");
            diff = table[i] - table[i - 1];
            const mpz_class& m = prime_power(p, known);
            mpz_mod(diff.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
            if (t > 0) {
                const mpz_class& pt = prime_power(p, t);
                if (!mpz_divisible_p(diff.get_mpz_t(), pt.get_mpz_t()))
                    throw std::logic_error("divided difference not integral after scaling");
                mpz_divexact(diff.get_mpz_t(), diff.get_mpz_t(), pt.get_mpz_t());
            }
            diff *= unit_inverse[unit_part(a, p)];
            diff *= unit_inverse[unit_part(b, p)];
            table[i] = std::move(diff);
            mpz_mod(table[i].get_mpz_t(), table[i].get_mpz_t(), prime_power(p, left).get_mpz_t());
            digits[i] = left;
        }
    }

    // Undo the scaling. The Newton coefficients are now correct modulo p^s
    // as divided differences of the lifted data.
    const mpz_class& target = prime_power(p, s);
    for (std::size_t j = 0; j < nodes; ++j) {
        if (digits[j] - scale < s) throw PrecisionExhausted("working precision too small for the fit");
        if (!mpz_divisible_p(table[j].get_mpz_t(), scale_power.get_mpz_t()))
            throw PrecisionExhausted("Newton coefficient " + std::to_string(j) + " is not p-integral");
        mpz_divexact(table[j].get_mpz_t(), table[j].get_mpz_t(), scale_power.get_mpz_t());
        mpz_mod(table[j].get_mpz_t(), table[j].get_mpz_t(), target.get_mpz_t());
    }

    // Newton form to monomial form: P = F_N; P <- P * (x - x_j) + F_j.
    std::vector<mpz_class> coeffs(nodes);
    coeffs[0] = table[nodes - 1];
    for (std::size_t jj = nodes - 1; jj-- > 0;) {
        const unsigned long xj = static_cast<unsigned long>(jj * jj);
        const std::size_t degree = nodes - 1 - jj;
        for (std::size_t k = degree; k >= 1; --k) {
            mpz_class next = coeffs[k - 1];
            mpz_submul_ui(next.get_mpz_t(), coeffs[k].get_mpz_t(), xj);
            mpz_mod(next.get_mpz_t(), next.get_mpz_t(), target.get_mpz_t());
            coeffs[k] = std::move(next);
        }
        mpz_mul_ui(coeffs[0].get_mpz_t(), coeffs[0].get_mpz_t(), xj);
        coeffs[0] = table[jj] - coeffs[0];
        mpz_mod(coeffs[0].get_mpz_t(), coeffs[0].get_mpz_t(), target.get_mpz_t());
    }

    SeriesApprox series;
    series.prime = p;
    series.terms = n_terms;
    series.input_precision = s;
    series.valuation_loss = loss;
    series.effective_precision = std::min(tail_precision(p, n_terms), s - loss);
    const int eff = series.effective_precision;
    if (!mpz_divisible_p(coeffs[0].get_mpz_t(), prime_power(p, eff).get_mpz_t()))
        throw std::logic_error("fitted series has a nonzero constant term");
    series.gammas.reserve(static_cast<std::size_t>(n_terms));
    for (std::size_t k = 1; k < nodes; ++k) series.gammas.emplace_back(p, eff, coeffs[k]);
    series.refresh();
    // Wolstenholme: p^2 | gamma_1 once p >= 5.
    if (p >= 5 && series.gamma_valuation(1) < std::min(2, eff))
        throw std::logic_error("fitted gamma_1 is not divisible by p^2");
    return series;
}

PadicInt eval_series(const SeriesApprox& series, const mpz_class& n_residue, int precision) {
    if (precision > series.effective_precision)
        throw PrecisionExhausted("series known to precision " + std::to_string(series.effective_precision) +
                                 ", requested " + std::to_string(precision));
    const std::uint64_t p = series.prime;
    const mpz_class& m = prime_power(p, precision);
    int top = 0;
    for (int k = series.terms; k >= 1; --k)
        if (series.gamma_valuation(k) < precision) {
            top = k;
            break;
        }
    if (top == 0) return PadicInt::zero(p, precision);

    mpz_class x = n_residue * n_residue;
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    mpz_class acc = 0;
    for (int k = top; k >= 1; --k) {
        if (series.gamma_valuation(k) < precision) acc += series.gamma(k).residue();
        acc *= x;
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), m.get_mpz_t());
    }
    return {p, precision, acc};
}

PadicInt eval_lift(const SeriesApprox& series, const mpz_class& n_residue, const PadicInt& h_n) {
    const int r = h_n.precision();
    if (r < 2) throw PrecisionExhausted("lifting needs H_n to at least two digits");
    if (h_n.prime() != series.prime) throw UsageError("series and residue use different primes");
    const PadicInt quotient = div_exact_p(h_n, 1);
    return quotient + eval_series(series, n_residue, r - 1);
}

}  // namespace jph
