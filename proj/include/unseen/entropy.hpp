#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>

#include "unseen/fingerprint.hpp"
#include "unseen/polynomial.hpp"
#include "unseen/remez.hpp"

// Entropy estimators (nats): empirical, Miller-Madow, and the
// polynomial-approximation estimator that applies an unbiased estimate of the
// best degree-L approximant of x log(1/x) to rarely-seen symbols and a
// bias-corrected plug-in rule to frequent ones.

namespace unseen {

inline double phi_xlog(double x) { return x > 0.0 ? x * std::log(1.0 / x) : 0.0; }

inline double empirical_entropy(const Fingerprint& f) {
    if (f.n < 1) throw std::domain_error("empirical_entropy: empty sample");
    double h = 0.0;
    for (const auto& [j, c] : f.phi)
        h += static_cast<double>(c) * phi_xlog(static_cast<double>(j) / static_cast<double>(f.n));
    return h;
}

inline double empirical_entropy(const Histogram& h) { return empirical_entropy(build_fingerprint(h)); }

inline double miller_madow(const Fingerprint& f) {
    return empirical_entropy(f) +
           static_cast<double>(f.distinct() - 1) / (2.0 * static_cast<double>(f.n));
}

inline double miller_madow(const Histogram& h) { return miller_madow(build_fingerprint(h)); }

// Best uniform approximation of x log(1/x) on [0,1] at a given degree.
struct PhiApprox {
    std::vector<double> a;  // monomial coefficients a_0..a_L
    double err = 0.0;       // uniform error
};

// Coefficients are data independent, so they are computed once per degree and
// cached for the life of the process.
inline const PhiApprox& phi_approx(unsigned L) {
    static std::map<unsigned, PhiApprox> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(L);
    if (it == cache.end()) {
        const RemezResult r = remez(phi_xlog, 0.0, 1.0, L, 1e-9, 500);
        PhiApprox pa;
        pa.a.assign(L + 1, 0.0);
        for (unsigned m = 0; m <= L; ++m) pa.a[m] = r.poly.coeff(m);
        pa.err = r.error;
        it = cache.emplace(L, std::move(pa)).first;
    }
    return it->second;
}

struct EntropyConfig {
    std::uint64_t k = 0;    // alphabet-size bound; ignored in adaptive mode
    double c0 = 1.6;
    double c1 = 3.5;
    double c2 = 1.6;
    bool split = false;     // coin-split selection sample (default: reuse counts)
    bool adaptive = false;  // replace log k by log n, drop the constant term
};

// Frozen per-sample state: the approximating polynomial and the two
// per-count rules.
struct EntropyEstimator {
    PhiApprox approx;
    unsigned L = 0;
    double beta = 0.0;      // approximation interval is [0, beta]
    double interval = 0.0;  // c1 log(kappa) = beta * n
    std::uint64_t T = 0;    // counts above this use the plug-in rule
    std::uint64_t n = 0;
    double clamp_hi = 0.0;  // log k, or +inf in adaptive mode

    // Unbiased estimate of the scaled approximant at the symbol's mass:
    // (1/n) (sum_m a_m (c1 log kappa)^{1-m} (N)_m - N log beta).
    double g_small(std::uint64_t count) const {
        const double nc = static_cast<double>(count);
        double sum = 0.0, prod = 1.0;  // prod = (N)_m / interval^m
        for (unsigned m = 0; m < approx.a.size(); ++m) {
            if (m > 0) {
                if (m > count) break;
                prod *= (nc - static_cast<double>(m - 1)) / interval;
            }
            sum += approx.a[m] * prod;
        }
        return (sum * interval - nc * std::log(beta)) / static_cast<double>(n);
    }

    // Bias-corrected plug-in rule for frequent symbols.
    double g_large(std::uint64_t count) const {
        return phi_xlog(static_cast<double>(count) / static_cast<double>(n)) +
               1.0 / (2.0 * static_cast<double>(n));
    }
};

inline EntropyEstimator build_entropy_estimator(const EntropyConfig& cfg, std::uint64_t n) {
    if (cfg.adaptive) {
        if (n < 3) throw std::domain_error("build_entropy_estimator: adaptive mode needs n >= 3");
    } else if (cfg.k < 2) {
        throw std::domain_error("build_entropy_estimator: need k >= 2");
    }
    if (!(cfg.c0 > 0.0 && cfg.c1 > 0.0 && cfg.c2 > 0.0))
        throw std::domain_error("build_entropy_estimator: constants must be positive");
    const double kappa = static_cast<double>(cfg.adaptive ? n : cfg.k);
    const double logk = std::log(kappa);

    EntropyEstimator e;
    e.L = static_cast<unsigned>(std::floor(cfg.c0 * logk));
    e.interval = cfg.c1 * logk;
    e.beta = e.interval / static_cast<double>(n);
    e.T = static_cast<std::uint64_t>(std::floor(cfg.c2 * logk));
    e.n = n;
    if (e.beta >= 1.0)
        throw std::domain_error(
            "build_entropy_estimator: approximation interval [0, c1 log(k)/n] is degenerate; "
            "n is too small relative to log k");
    e.approx = phi_approx(e.L);
    if (cfg.adaptive) e.approx.a[0] = 0.0;  // g_small(0) = 0: unseen symbols are uncountable
    e.clamp_hi = cfg.adaptive ? std::numeric_limits<double>::infinity()
                              : std::log(static_cast<double>(cfg.k));
    return e;
}

// The sum runs over observed symbols; in split mode selection uses one
// seeded coin-split half and estimation the other, both normalized by the
// realized size of the estimation half.
inline double estimate_entropy(const Fingerprint& f, const EntropyConfig& cfg,
                               std::optional<std::uint64_t> seed = std::nullopt) {
    if (f.n < 1) throw std::domain_error("estimate_entropy: empty sample");

    double h = 0.0;
    if (!cfg.split) {
        const EntropyEstimator e = build_entropy_estimator(cfg, f.n);
        for (const auto& [j, c] : f.phi) {
            const double rule = (j <= e.T) ? e.g_small(j) : e.g_large(j);
            h += static_cast<double>(c) * rule;
        }
        return std::min(std::max(h, 0.0), e.clamp_hi);
    }

    std::mt19937_64 rng(seed.value_or(0));
    std::vector<std::pair<std::uint64_t, std::uint64_t>> halves;  // (estimation, selection)
    std::uint64_t n_est = 0;
    for (const auto& [j, c] : f.phi)
        for (std::uint64_t i = 0; i < c; ++i) {
            std::binomial_distribution<std::uint64_t> coin_split(j, 0.5);
            const std::uint64_t est = coin_split(rng);
            halves.emplace_back(est, j - est);
            n_est += est;
        }
    if (n_est == 0)
        throw std::domain_error("estimate_entropy: estimation half of the split is empty");
    const EntropyEstimator e = build_entropy_estimator(cfg, n_est);
    for (const auto& [est, sel] : halves)
        h += (sel <= e.T) ? e.g_small(est) : e.g_large(est);
    return std::min(std::max(h, 0.0), e.clamp_hi);
}

inline double estimate_entropy(const Histogram& h, const EntropyConfig& cfg,
                               std::optional<std::uint64_t> seed = std::nullopt) {
    return estimate_entropy(build_fingerprint(h), cfg, seed);
}

}  // namespace unseen
