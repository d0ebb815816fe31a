#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "unseen/detail/linalg.hpp"
#include "unseen/polynomial.hpp"

// Best uniform polynomial approximation by single-point Remez exchange:
// solve the alternation system on the current reference, locate the worst
// error over the interval, swap it into the reference preserving sign
// alternation, stop once the levelled error is within rel_tol of the
// observed maximum.

namespace unseen {

struct RemezResult {
    Polynomial poly;
    double error = 0.0;                      // uniform deviation of poly over [a,b]
    std::vector<double> alternation_points;  // L+2 sorted reference points
    int iterations = 0;
};

class remez_convergence_error : public std::runtime_error {
public:
    remez_convergence_error(const std::string& what, RemezResult best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const RemezResult& best_iterate() const { return best_; }

private:
    RemezResult best_;
};

namespace detail {

struct LevelledFit {
    std::vector<double> cheb_coeffs;  // basis T_i((2x-a-b)/(b-a))
    double delta = 0.0;               // signed levelled error
};

inline double eval_cheb_basis(const std::vector<double>& c, double a, double b, double x) {
    const double y = (2.0 * x - a - b) / (b - a);
    // Clenshaw recurrence.
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) {
        const double t = 2.0 * y * b1 - b2 + c[i];
        b2 = b1;
        b1 = t;
    }
    return y * b1 - b2 + c[0];
}

// Golden-section search for the maximum of |err| on [lo, hi].
inline double golden_max(const std::function<double(double)>& abs_err, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = abs_err(x1), f2 = abs_err(x2);
    while (hi - lo > 1e-13 * (1.0 + std::fabs(lo) + std::fabs(hi))) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = abs_err(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = abs_err(x1);
        }
    }
    return (lo + hi) / 2.0;
}

}  // namespace detail

inline RemezResult remez(const std::function<double(double)>& f, double a, double b, unsigned L,
                         double rel_tol = 1e-9, int max_iter = 200) {
    if (!(a < b)) throw std::domain_error("remez: need a < b");
    if (!(rel_tol > 0.0)) throw std::domain_error("remez: rel_tol must be positive");
    if (max_iter < 1) throw std::domain_error("remez: max_iter must be positive");

    const std::size_t npts = L + 2;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);

    // Chebyshev(-Lobatto) nodes of [a,b], ascending.
    std::vector<double> ref(npts);
    for (std::size_t j = 0; j < npts; ++j)
        ref[j] = mid - half * std::cos(static_cast<double>(j) * M_PI / (npts - 1));
    ref.front() = a;
    ref.back() = b;
    for (std::size_t j = 1; j < npts; ++j)
        if (!(ref[j] > ref[j - 1]))
            throw std::domain_error("remez: interval too short to hold L+2 distinct nodes");

    double fscale = 0.0;
    for (double x : ref) {
        const double v = f(x);
        if (!std::isfinite(v)) throw std::domain_error("remez: f not finite on [a,b]");
        fscale = std::max(fscale, std::fabs(v));
    }
    const double atol = 1e-15 * (1.0 + fscale);

    auto to_result = [&](const detail::LevelledFit& fit, double err, int iter) {
        // Convert from the scaled Chebyshev basis to monomial coefficients.
        Polynomial poly({0.0});
        const double s = 2.0 / (b - a), c = -(a + b) / (b - a);
        for (std::size_t i = 0; i < fit.cheb_coeffs.size(); ++i) {
            Polynomial term = detail::compose_affine(chebyshev_first_kind(static_cast<unsigned>(i)), s, c);
            term *= fit.cheb_coeffs[i];
            poly += term;
        }
        // The reported deviation must dominate the error as seen through the
        // monomial form, which differs from the internal basis by rounding.
        for (double x : ref) err = std::max(err, std::fabs(f(x) - poly(x)));
        return RemezResult{std::move(poly), err, ref, iter};
    };

    detail::LevelledFit fit;
    fit.cheb_coeffs.assign(L + 1, 0.0);
    for (int iter = 1; iter <= max_iter; ++iter) {
        // Alternation system: Q(x_j) + (-1)^j delta = f(x_j).
        detail::Matrix sys(npts, npts);
        std::vector<double> rhs(npts);
        for (std::size_t j = 0; j < npts; ++j) {
            const double y = (2.0 * ref[j] - a - b) / (b - a);
            double tm1 = 1.0, t = y;
            for (std::size_t i = 0; i <= L; ++i) {
                if (i == 0)
                    sys(j, i) = 1.0;
                else if (i == 1)
                    sys(j, i) = y;
                else {
                    const double tn = 2.0 * y * t - tm1;
                    tm1 = t;
                    t = tn;
                    sys(j, i) = t;
                }
            }
            sys(j, L + 1) = (j % 2 == 0) ? 1.0 : -1.0;
            rhs[j] = f(ref[j]);
        }
        std::vector<double> sol = detail::solve_inplace(sys, std::move(rhs));
        fit.delta = sol[L + 1];
        sol.resize(L + 1);
        fit.cheb_coeffs = std::move(sol);

        auto err = [&](double x) { return f(x) - detail::eval_cheb_basis(fit.cheb_coeffs, a, b, x); };
        auto abs_err = [&](double x) { return std::fabs(err(x)); };

        // Worst point over [a,b]: 64-point scan on every panel between
        // consecutive reference points (plus end panels), then golden-section
        // refinement around the best scan sample.
        double worst_x = ref[0], worst = abs_err(ref[0]);
        auto search_panel = [&](double lo, double hi) {
            if (!(hi > lo)) return;
            constexpr int kScan = 64;
            int best_i = 0;
            double best_v = -1.0;
            for (int i = 0; i < kScan; ++i) {
                const double x = lo + (hi - lo) * i / (kScan - 1);
                const double v = abs_err(x);
                if (v > best_v) {
                    best_v = v;
                    best_i = i;
                }
            }
            double cand_x = lo + (hi - lo) * best_i / (kScan - 1);
            double cand_v = best_v;
            const double x_lo = lo + (hi - lo) * std::max(best_i - 1, 0) / (kScan - 1);
            const double x_hi = lo + (hi - lo) * std::min(best_i + 1, kScan - 1) / (kScan - 1);
            const double xg = detail::golden_max(abs_err, x_lo, x_hi);
            const double vg = abs_err(xg);
            if (vg > cand_v) {
                cand_v = vg;
                cand_x = xg;
            }
            if (cand_v > worst) {
                worst = cand_v;
                worst_x = cand_x;
            }
        };
        search_panel(a, ref.front());
        for (std::size_t j = 0; j + 1 < npts; ++j) search_panel(ref[j], ref[j + 1]);
        search_panel(ref.back(), b);

        if (worst - std::fabs(fit.delta) <= rel_tol * worst + atol)
            return to_result(fit, worst, iter);

        if (iter == max_iter) {
            throw remez_convergence_error(
                "remez: no convergence in " + std::to_string(max_iter) + " iterations",
                to_result(fit, worst, iter));
        }

        // Single-point exchange preserving sign alternation.
        const double sign_new = err(worst_x) >= 0 ? 1.0 : -1.0;
        auto sign_at = [&](std::size_t j) { return err(ref[j]) >= 0 ? 1.0 : -1.0; };
        if (worst_x < ref.front()) {
            if (sign_new == sign_at(0)) {
                ref.front() = worst_x;
            } else {
                ref.pop_back();
                ref.insert(ref.begin(), worst_x);
            }
        } else if (worst_x > ref.back()) {
            if (sign_new == sign_at(npts - 1)) {
                ref.back() = worst_x;
            } else {
                ref.erase(ref.begin());
                ref.push_back(worst_x);
            }
        } else {
            std::size_t i = 0;
            while (i + 1 < npts && ref[i + 1] < worst_x) ++i;
            // worst_x lies in [ref[i], ref[i+1]].
            if (sign_new == sign_at(i))
                ref[i] = worst_x;
            else
                ref[i + 1] = worst_x;
        }
    }
    throw remez_convergence_error("remez: unreachable", to_result(fit, 0.0, 0));
}

}  // namespace unseen
