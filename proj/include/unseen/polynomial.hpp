#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

// Approximation-theory kernel: monomial-basis polynomials, Chebyshev and
// discrete Chebyshev families, Bernstein evaluation, falling factorials.
// All manipulation stays in the monomial basis with doubles; every degree
// used by the estimators is logarithmic in the alphabet size, so the
// conditioning is acceptable without extended precision.

namespace unseen {

// (x)_m = x (x-1) ... (x-m+1); empty product for m = 0.
inline double falling_factorial(double x, unsigned m) {
    double p = 1.0;
    for (unsigned i = 0; i < m; ++i) p *= x - static_cast<double>(i);
    return p;
}

class Polynomial {
public:
    Polynomial() : coeffs_(1, 0.0) {}

    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.assign(1, 0.0);
        for (double c : coeffs_)
            if (!std::isfinite(c)) throw std::invalid_argument("Polynomial: non-finite coefficient");
    }

    // coeffs()[m] multiplies x^m; trailing zeros are kept as constructed.
    const std::vector<double>& coeffs() const { return coeffs_; }

    double coeff(std::size_t m) const { return m < coeffs_.size() ? coeffs_[m] : 0.0; }

    // Highest index with a nonzero coefficient; the zero polynomial has degree 0.
    std::size_t degree() const {
        for (std::size_t i = coeffs_.size(); i-- > 0;)
            if (coeffs_[i] != 0.0) return i;
        return 0;
    }

    // Horner recurrence.
    double operator()(double x) const {
        double r = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) r = r * x + coeffs_[i];
        return r;
    }

    Polynomial& operator+=(const Polynomial& other) {
        if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
        for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
        return *this;
    }

    Polynomial& operator*=(double s) {
        for (double& c : coeffs_) c *= s;
        return *this;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        std::vector<double> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                r[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(r));
    }

private:
    std::vector<double> coeffs_;
};

namespace detail {

// p(x) -> p(s*x + c), computed by Horner in polynomial arithmetic.
inline Polynomial compose_affine(const Polynomial& p, double s, double c) {
    std::vector<double> acc{p.coeffs().back()};
    for (std::size_t i = p.coeffs().size() - 1; i-- > 0;) {
        std::vector<double> next(acc.size() + 1, 0.0);
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next[j] += acc[j] * c;
            next[j + 1] += acc[j] * s;
        }
        next[0] += p.coeffs()[i];
        acc = std::move(next);
    }
    return Polynomial(std::move(acc));
}

// p(x) -> p(x + 1) via binomial expansion of each monomial.
inline Polynomial shift_by_one(const Polynomial& p) {
    const std::size_t n = p.coeffs().size();
    std::vector<double> r(n, 0.0);
    // Pascal row built incrementally: binom[j] = C(i, j) for the current i.
    std::vector<double> binom(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        binom[i] = 1.0;
        for (std::size_t j = i; j-- > 1;) binom[j] += binom[j - 1];
        for (std::size_t j = 0; j <= i; ++j) r[j] += p.coeffs()[i] * binom[j];
    }
    return Polynomial(std::move(r));
}

// Value of T_L at x by the three-term recurrence.
inline double chebyshev_value(unsigned L, double x) {
    double tm1 = 1.0, t = x;
    if (L == 0) return 1.0;
    for (unsigned k = 1; k < L; ++k) {
        const double tn = 2.0 * x * t - tm1;
        tm1 = t;
        t = tn;
    }
    return t;
}

inline double log_binomial(unsigned n, unsigned k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace detail

// Monomial coefficients of T_L via T_{k+1} = 2x T_k - T_{k-1}.
inline Polynomial chebyshev_first_kind(unsigned L) {
    if (L > 64) throw std::out_of_range("chebyshev_first_kind: degree above cap 64");
    Polynomial tm1({1.0});
    if (L == 0) return tm1;
    Polynomial t({0.0, 1.0});
    const Polynomial two_x({0.0, 2.0});
    for (unsigned k = 1; k < L; ++k) {
        Polynomial tn = two_x * t;
        Polynomial neg = tm1;
        neg *= -1.0;
        tn += neg;
        tm1 = std::move(t);
        t = std::move(tn);
    }
    return t;
}

// The degree-L polynomial passing through (0,-1) with the least deviation
// from zero over [l, r]: a Chebyshev polynomial shifted to [l, r] and
// normalized by its value at the image of the origin.
inline Polynomial shifted_chebyshev(unsigned L, double l, double r) {
    if (!(l > 0.0) || !(r > l)) throw std::domain_error("shifted_chebyshev: need 0 < l < r");
    if (L == 0) throw std::domain_error("shifted_chebyshev: degree must be positive");
    const Polynomial t = chebyshev_first_kind(L);
    const double s = 2.0 / (r - l);
    const double c = -(r + l) / (r - l);
    Polynomial composed = detail::compose_affine(t, s, c);
    composed *= -1.0 / detail::chebyshev_value(L, c);
    return composed;
}

// Degree-m polynomial orthogonal under the counting measure on {0,...,n-1}:
// the m-th forward difference of (x)_m (x-n)_m, divided by m!.
inline Polynomial discrete_chebyshev(unsigned m, unsigned n) {
    if (m >= n) throw std::domain_error("discrete_chebyshev: need m < n");
    Polynomial p({1.0});
    for (unsigned i = 0; i < m; ++i) {
        p = p * Polynomial({-static_cast<double>(i), 1.0});
        p = p * Polynomial({-static_cast<double>(n) - static_cast<double>(i), 1.0});
    }
    double mfact = 1.0;
    for (unsigned i = 0; i < m; ++i) {
        Polynomial shifted = detail::shift_by_one(p);
        Polynomial neg = p;
        neg *= -1.0;
        shifted += neg;
        p = std::move(shifted);
        mfact *= static_cast<double>(i + 1);
    }
    p *= 1.0 / mfact;
    // Drop the m zeroed leading coefficients left by differencing.
    std::vector<double> coeffs(p.coeffs().begin(), p.coeffs().begin() + (m + 1));
    return Polynomial(std::move(coeffs));
}

// B_n(x) = E[f(N/n)] with N ~ Binomial(n, x), summed directly with
// log-space binomial weights.
inline double bernstein_eval(const std::function<double(double)>& f, unsigned n, double x) {
    if (n == 0) throw std::domain_error("bernstein_eval: n must be positive");
    if (n > 1000000) throw std::domain_error("bernstein_eval: n above cap 10^6");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("bernstein_eval: x outside [0,1]");
    if (x == 0.0) return f(0.0);
    if (x == 1.0) return f(1.0);
    const double lx = std::log(x), l1x = std::log1p(-x);
    double sum = 0.0;
    for (unsigned k = 0; k <= n; ++k) {
        const double lw = detail::log_binomial(n, k) + k * lx + (n - k) * l1x;
        sum += std::exp(lw) * f(static_cast<double>(k) / n);
    }
    return sum;
}

}  // namespace unseen
