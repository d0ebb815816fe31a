#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "unseen/errors.hpp"
#include "unseen/fingerprint.hpp"
#include "unseen/polynomial.hpp"

// Support-size estimators: plug-in, the Chebyshev linear estimator (with a
// known lower bound 1/k on nonzero masses, or agnostic to it), and the
// classical baselines Good-Turing, Chao 1, Good-Toulmin, Efron-Thisted.

namespace unseen {

// Per-multiplicity weight table defining the linear estimate sum_j g(j) Phi_j.
struct LinearEstimator {
    std::vector<double> g;            // index j = 0..J_max; g[0] = 0
    double default_weight = 1.0;      // applied for j > J_max

    struct Meta {
        unsigned L = 0;
        double l = 0.0, r = 0.0;
        double c0 = 0.0, c1 = 0.0;
        std::uint64_t k = 0;
        std::uint64_t n = 0;
        bool adaptive = false;
        double eps = 0.0;
        std::vector<std::string> warnings;
    } meta;

    double weight(std::uint64_t j) const {
        return j < g.size() ? g[j] : default_weight;
    }

    // u_j = g(j) - 1, the correction applied on top of the plug-in count.
    double correction(std::uint64_t j) const { return weight(j) - 1.0; }
};

struct SupportEstimate {
    double raw = 0.0;            // unrounded, unclamped linear combination
    std::uint64_t value = 0;     // rounded half-up, clamped to [S_plug, k]
    std::vector<std::string> warnings;
};

// log is natural throughout; the experimental degree choices pin this down.
struct SupportConfig {
    std::uint64_t k = 0;
    double c0 = 0.45;
    double c1 = 0.5;
};

inline std::uint64_t plugin_support(const Fingerprint& f) { return f.distinct(); }

namespace detail {

inline double round_half_up(double x) { return std::floor(x + 0.5); }

inline LinearEstimator plugin_weights() {
    LinearEstimator e;
    e.g = {0.0};
    e.default_weight = 1.0;
    return e;
}

// Common tail of both parameter choices: weights from the least-deviating
// degree-L polynomial through (0,-1) on [l,r].
inline LinearEstimator chebyshev_weights(unsigned L, double l, double r, std::uint64_t n) {
    LinearEstimator e;
    if (L == 0) {
        e = plugin_weights();
        return e;
    }
    if (l >= r) {
        e = plugin_weights();
        e.meta.warnings.push_back(
            "approximation interval [1/k, c1 log(k)/n] is degenerate; using plug-in weights");
        return e;
    }
    const Polynomial p = shifted_chebyshev(L, l, r);
    e.g.assign(L + 1, 0.0);
    double jfact = 1.0, npow = 1.0;
    for (unsigned j = 1; j <= L; ++j) {
        jfact *= static_cast<double>(j);
        npow *= static_cast<double>(n);
        const double u = p.coeff(j) * jfact / npow;
        e.g[j] = u + 1.0;
    }
    e.default_weight = 1.0;
    return e;
}

}  // namespace detail

// Weights for the estimator that knows p_min >= 1/k:
//   L = floor(c0 log k), r = c1 log(k)/n, l = 1/k.
inline LinearEstimator chebyshev_support_coeffs(const SupportConfig& cfg, std::uint64_t n) {
    if (cfg.k < 2) throw std::domain_error("chebyshev_support_coeffs: need k >= 2");
    if (n < 1) throw std::domain_error("chebyshev_support_coeffs: need n >= 1");
    if (!(cfg.c0 > 0.0 && cfg.c0 < cfg.c1))
        throw std::domain_error("chebyshev_support_coeffs: need 0 < c0 < c1");
    const double logk = std::log(static_cast<double>(cfg.k));
    const unsigned L = static_cast<unsigned>(std::floor(cfg.c0 * logk));
    const double r = cfg.c1 * logk / static_cast<double>(n);
    const double l = 1.0 / static_cast<double>(cfg.k);
    LinearEstimator e = detail::chebyshev_weights(L, l, r, n);
    e.meta.L = L;
    e.meta.l = l;
    e.meta.r = r;
    e.meta.c0 = cfg.c0;
    e.meta.c1 = cfg.c1;
    e.meta.k = cfg.k;
    e.meta.n = n;
    return e;
}

// Variant agnostic to p_min; eps is the desired relative accuracy:
//   l = (c1/c0^2) log^2(1/eps) / (n log n), r = c1 log(n)/n, L = floor(c0 log n).
// The theory wants eps > n^{-C} for a constant C; that is documented, not
// enforced.
inline LinearEstimator chebyshev_support_coeffs_adaptive(std::uint64_t n, double eps,
                                                         double c0 = 0.45, double c1 = 0.5) {
    if (n < 3) throw std::domain_error("chebyshev_support_coeffs_adaptive: need n >= 3");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("chebyshev_support_coeffs_adaptive: need eps in (0,1)");
    if (!(c0 > 0.0 && c0 < c1))
        throw std::domain_error("chebyshev_support_coeffs_adaptive: need 0 < c0 < c1");
    const double logn = std::log(static_cast<double>(n));
    const double le = std::log(1.0 / eps);
    const unsigned L = static_cast<unsigned>(std::floor(c0 * logn));
    const double l = (c1 / (c0 * c0)) * le * le / (static_cast<double>(n) * logn);
    const double r = c1 * logn / static_cast<double>(n);
    LinearEstimator e = detail::chebyshev_weights(L, l, r, n);
    e.meta.L = L;
    e.meta.l = l;
    e.meta.r = r;
    e.meta.c0 = c0;
    e.meta.c1 = c1;
    e.meta.n = n;
    e.meta.adaptive = true;
    e.meta.eps = eps;
    return e;
}

// S_hat = sum_j g(j) Phi_j, rounded half-up and clamped to [S_plug, k].
// The raw value is kept alongside: the rounding and clamping rules are ours,
// not part of the estimator definition.
inline SupportEstimate apply_linear(const Fingerprint& f, const LinearEstimator& e,
                                    std::uint64_t k) {
    double raw = 0.0;
    for (const auto& [j, c] : f.phi) raw += e.weight(j) * static_cast<double>(c);
    const std::uint64_t lo = plugin_support(f);
    const double rounded = detail::round_half_up(raw);
    std::uint64_t value;
    if (rounded <= static_cast<double>(lo))
        value = lo;
    else if (rounded >= static_cast<double>(k))
        value = k;
    else
        value = static_cast<std::uint64_t>(rounded);
    SupportEstimate out{raw, std::max(lo, std::min(value, k)), e.meta.warnings};
    return out;
}

// Coverage-adjusted count: S_plug / (1 - Phi_1/n). Undefined when every
// observation is a singleton (zero estimated coverage).
inline std::uint64_t good_turing_support(const Fingerprint& f) {
    if (f.n < 1) throw std::domain_error("good_turing_support: empty sample");
    const std::uint64_t phi1 = f.at(1);
    if (phi1 == f.n)
        throw undefined_estimator_error(
            "good_turing_support: all symbols are singletons, estimated coverage is zero");
    const double coverage = 1.0 - static_cast<double>(phi1) / static_cast<double>(f.n);
    return static_cast<std::uint64_t>(
        detail::round_half_up(static_cast<double>(plugin_support(f)) / coverage));
}

// Bias-corrected Chao 1: S_plug + Phi_1 (Phi_1 - 1) / (2 (Phi_2 + 1)).
inline std::uint64_t chao1_support(const Fingerprint& f) {
    const double phi1 = static_cast<double>(f.at(1));
    const double phi2 = static_cast<double>(f.at(2));
    const double est = static_cast<double>(plugin_support(f)) + phi1 * (phi1 - 1.0) / (2.0 * (phi2 + 1.0));
    return static_cast<std::uint64_t>(detail::round_half_up(est));
}

// S_plug + t Phi_1 - t^2 Phi_2 + t^3 Phi_3 - ...; diverges for t > 1 as the
// signed terms blow up with the multiplicity.
inline double good_toulmin_support(const Fingerprint& f, double t) {
    if (!(t > 0.0)) throw std::domain_error("good_toulmin_support: need t > 0");
    double est = static_cast<double>(plugin_support(f));
    for (const auto& [j, c] : f.phi) {
        const double term = std::pow(t, static_cast<double>(j)) * static_cast<double>(c);
        est += (j % 2 == 1) ? term : -term;
    }
    return est;
}

// S_plug + sum_{j<=J} (-1)^{j+1} t^j b_j Phi_j with b_j = P[Binom(J, 1/(t+1)) >= j],
// computed by exact binomial tail summation.
inline double efron_thisted_support(const Fingerprint& f, double t, unsigned J) {
    if (!(t > 0.0)) throw std::domain_error("efron_thisted_support: need t > 0");
    if (J < 1) throw std::domain_error("efron_thisted_support: need J >= 1");
    const double q = 1.0 / (t + 1.0);
    const double lq = std::log(q), l1q = std::log1p(-q);
    double est = static_cast<double>(plugin_support(f));
    for (const auto& [j, c] : f.phi) {
        if (j > J) continue;
        double tail = 0.0;
        for (std::uint64_t i = j; i <= J; ++i)
            tail += std::exp(detail::log_binomial(J, static_cast<unsigned>(i)) +
                             static_cast<double>(i) * lq + static_cast<double>(J - i) * l1q);
        const double term =
            std::pow(t, static_cast<double>(j)) * tail * static_cast<double>(c);
        est += (j % 2 == 1) ? term : -term;
    }
    return est;
}

}  // namespace unseen
