#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "unseen/detail/linalg.hpp"
#include "unseen/fingerprint.hpp"
#include "unseen/polynomial.hpp"
#include "unseen/support.hpp"

// Distinct-elements estimator for the k-ball urn model. Probabilities are
// multiples of 1/k, so the approximation problem lives on the grid
// {1/M, ..., 1}: least-squares weights when the design is overdetermined
// (M > L), exact interpolation through the origin otherwise.

namespace unseen {

struct DistinctConfig {
    std::uint64_t k = 0;   // number of balls in the urn
    std::uint64_t n = 0;   // expected sample size
    double alpha = 0.5;
    double beta = 1.0;
};

enum class WeightRegime { least_squares, interpolation };

inline const char* to_string(WeightRegime r) {
    return r == WeightRegime::least_squares ? "least-squares" : "interpolation";
}

struct WeightSolution {
    std::vector<double> w;  // length L, w[j-1] multiplies x^j
    double residual = 0.0;  // ||B w - 1||_2
    WeightRegime regime = WeightRegime::least_squares;
};

struct DistinctEstimate {
    double raw = 0.0;
    std::uint64_t value = 0;
    unsigned L = 0;
    unsigned M = 0;
    WeightRegime regime = WeightRegime::least_squares;
    double residual = 0.0;
};

// L = alpha log k and M = beta k log(k) / n, floored/ceiled to integers with
// a floor of one.
inline std::pair<unsigned, unsigned> select_params(const DistinctConfig& cfg) {
    if (cfg.k < 3) throw std::domain_error("select_params: need k >= 3");
    if (cfg.n < 1) throw std::domain_error("select_params: need n >= 1");
    if (!(cfg.alpha > 0.0) || !(cfg.beta > cfg.alpha))
        throw std::domain_error("select_params: need 0 < alpha < beta");
    const double logk = std::log(static_cast<double>(cfg.k));
    const auto L = static_cast<unsigned>(std::max(1.0, std::floor(cfg.alpha * logk)));
    const auto M = static_cast<unsigned>(
        std::max(1.0, std::ceil(cfg.beta * static_cast<double>(cfg.k) * logk /
                                static_cast<double>(cfg.n))));
    return {L, M};
}

// B[i][j] = ((i+1)/M)^(j+1): the grid points {1/M,...,1} raised to powers 1..L.
inline detail::Matrix build_design(unsigned L, unsigned M) {
    if (L < 1 || M < 1) throw std::domain_error("build_design: need L, M >= 1");
    detail::Matrix b(M, L);
    for (unsigned i = 0; i < M; ++i) {
        const double x = static_cast<double>(i + 1) / M;
        double xp = 1.0;
        for (unsigned j = 0; j < L; ++j) {
            xp *= x;
            b(i, j) = xp;
        }
    }
    return b;
}

inline WeightSolution solve_weights(unsigned L, unsigned M) {
    if (L < 1 || M < 1) throw std::domain_error("solve_weights: need L, M >= 1");
    WeightSolution sol;
    if (M > L) {
        sol.regime = WeightRegime::least_squares;
        sol.w = detail::lstsq(build_design(L, M), std::vector<double>(M, 1.0));
    } else {
        // Underdetermined: take the minimum-degree polynomial through the
        // origin with p(i/M) = 1 on the grid, zero-padded to length L.
        sol.regime = WeightRegime::interpolation;
        Polynomial p({0.0});
        for (unsigned i = 1; i <= M; ++i) {
            const double xi = static_cast<double>(i) / M;
            Polynomial basis({1.0});
            double denom = 1.0;
            for (unsigned j = 0; j <= M; ++j) {
                if (j == i) continue;
                const double xj = static_cast<double>(j) / M;
                basis = basis * Polynomial({-xj, 1.0});
                denom *= xi - xj;
            }
            basis *= 1.0 / denom;
            p += basis;
        }
        sol.w.assign(L, 0.0);
        for (unsigned j = 1; j <= M; ++j) sol.w[j - 1] = p.coeff(j);
    }
    const detail::Matrix b = build_design(L, M);
    double r2 = 0.0;
    for (unsigned i = 0; i < M; ++i) {
        double row = -1.0;
        for (unsigned j = 0; j < L; ++j) row += b(i, j) * sol.w[j];
        r2 += row * row;
    }
    sol.residual = std::sqrt(r2);
    return sol;
}

// u_j = w_j j! (k/(nM))^j; weights above L stay at the plug-in value.
inline LinearEstimator coeffs_from_weights(const std::vector<double>& w, const DistinctConfig& cfg,
                                           unsigned M) {
    LinearEstimator e;
    const unsigned L = static_cast<unsigned>(w.size());
    e.g.assign(L + 1, 0.0);
    const double scale = static_cast<double>(cfg.k) / (static_cast<double>(cfg.n) * M);
    double jfact = 1.0, spow = 1.0;
    for (unsigned j = 1; j <= L; ++j) {
        jfact *= static_cast<double>(j);
        spow *= scale;
        e.g[j] = w[j - 1] * jfact * spow + 1.0;
    }
    e.default_weight = 1.0;
    e.meta.L = L;
    e.meta.k = cfg.k;
    e.meta.n = cfg.n;
    return e;
}

inline DistinctEstimate estimate_distinct(const Fingerprint& f, const DistinctConfig& cfg) {
    const auto [L, M] = select_params(cfg);
    const WeightSolution sol = solve_weights(L, M);
    const LinearEstimator e = coeffs_from_weights(sol.w, cfg, M);
    const SupportEstimate s = apply_linear(f, e, cfg.k);
    return DistinctEstimate{s.raw, s.value, L, M, sol.regime, sol.residual};
}

}  // namespace unseen
