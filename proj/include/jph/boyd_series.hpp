#pragma once

/// Truncated series for H_{pn} - H_n/p and one-level lifting.
///
/// There are p-adic integers gamma_k (with v_p(gamma_k) growing like 2k) such
/// that for every integer n
///
///     H_{pn} - H_n / p = sum_{k >= 1} gamma_k n^{2k}.
///
/// The first N coefficients are fitted from b_1..b_N (restricted sums) by
/// interpolating on the nodes 0, 1, 4, ..., N^2. Knowing the series, H_{pn}
/// follows from H_n without touching the p*n terms of the harmonic sum.

#include <cstdint>
#include <span>
#include <vector>

#include "jph/padic.hpp"

namespace jph {

struct SeriesApprox {
    std::uint64_t prime = 0;
    /// Number of fitted coefficients N.
    int terms = 0;
    /// Precision of the b_n the fit was made from.
    int input_precision = 0;
    /// p-valuation divided out by the interpolation (exact, from the nodes).
    int valuation_loss = 0;
    /// The series matches H_{pn} - H_n/p modulo p^effective_precision for every n.
    int effective_precision = 0;
    /// gammas[k-1] is gamma_k, stored at effective_precision.
    std::vector<PadicInt> gammas;

    const PadicInt& gamma(int k) const { return gammas.at(static_cast<std::size_t>(k - 1)); }
    /// v_p(gamma_k), capped at effective_precision.
    int gamma_valuation(int k) const { return valuations_.at(static_cast<std::size_t>(k - 1)); }

    /// Recomputes the cached valuations; call after editing `gammas`.
    void refresh();

    friend bool operator==(const SeriesApprox& a, const SeriesApprox& b) {
        return a.prime == b.prime && a.terms == b.terms && a.input_precision == b.input_precision &&
               a.valuation_loss == b.valuation_loss && a.effective_precision == b.effective_precision &&
               a.gammas == b.gammas;
    }

private:
    std::vector<int> valuations_;
};

/// 2N + 2 - floor(log_p(N + 1)), less one when (p - 1) | 2(N + 1): every omitted
/// term gamma_k n^{2k}, k > N, is divisible by p to at least this power.
int tail_precision(std::uint64_t p, int terms);

/// ceil(2N / (p - 1)), the worst-case interpolation loss.
int vandermonde_loss_budget(std::uint64_t p, int terms);

/// Exact p-valuation of the worst Lagrange denominator prod_{l != i} (x_i - x_l)
/// over the nodes x_i = i^2, i = 0..N.
int interpolation_loss(std::uint64_t p, int terms);

struct SeriesPlan {
    int terms = 0;
    int input_precision = 0;
};

/// Smallest N whose series supports lifting from a level-one precision of
/// `target_depth`, and the data precision to fit it with.
SeriesPlan plan_series(std::uint64_t p, int target_depth);

/// Fits N coefficients from b_n = H*_{pn} computed to precision s.
SeriesApprox fit_coefficients(std::uint64_t p, int terms, int precision);

/// Fits from caller-supplied b_1..b_N (all at one precision).
SeriesApprox fit_coefficients(std::span<const PadicInt> restricted);

/// sum_{k} gamma_k n^{2k} mod p^precision.
PadicInt eval_series(const SeriesApprox& series, const mpz_class& n_residue, int precision);

/// H_{pn} mod p^{r-1} from H_n mod p^r, for v_p(H_n) >= 1.
PadicInt eval_lift(const SeriesApprox& series, const mpz_class& n_residue, const PadicInt& h_n);

}  // namespace jph
