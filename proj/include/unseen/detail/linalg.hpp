#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "unseen/errors.hpp"

// Small dense solvers. Every system in this library is tiny (at most a few
// dozen rows), so plain pivoted elimination and Householder QR suffice.

namespace unseen::detail {

// Row-major dense matrix, fixed shape after construction.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

// Gaussian elimination with partial pivoting. A is destroyed.
inline std::vector<double> solve_inplace(Matrix& a, std::vector<double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw numerical_error("solve: non-square system");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::fabs(a(i, col)) > std::fabs(a(piv, col))) piv = i;
        if (a(piv, col) == 0.0)
            throw numerical_error("solve: singular matrix at column " + std::to_string(col));
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const double m = a(i, col) / a(col, col);
            if (m == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(i, j) -= m * a(col, j);
            b[i] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

// Least squares min ||Ax - b||_2 for rows >= cols via Householder QR.
// Throws numerical_error with a conditioning diagnostic when R is
// (numerically) rank deficient.
inline std::vector<double> lstsq(Matrix a, std::vector<double> b) {
    const std::size_t m = a.rows(), n = a.cols();
    if (b.size() != m || m < n)
        throw numerical_error("lstsq: need rows >= cols");

    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) throw numerical_error("lstsq: zero column " + std::to_string(k));
        const double alpha = a(k, k) > 0 ? -norm : norm;

        // Householder vector v, stored in place of column k below the diagonal.
        std::vector<double> v(m - k);
        v[0] = a(k, k) - alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i - k] = a(i, k);
        double vnorm2 = 0.0;
        for (double t : v) vnorm2 += t * t;
        a(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) a(i, k) = 0.0;
        if (vnorm2 == 0.0) continue;

        for (std::size_t j = k + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i - k] * a(i, j);
            const double c = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) a(i, j) -= c * v[i - k];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i - k] * b[i];
        const double c = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) b[i] -= c * v[i - k];
    }

    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double d = std::fabs(a(k, k));
        rmax = std::max(rmax, d);
        rmin = std::min(rmin, d);
    }
    if (rmin <= 1e-13 * rmax)
        throw numerical_error("lstsq: rank deficient (|R_min|/|R_max| = " +
                              std::to_string(rmin / rmax) + ")");

    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

// Pairwise (cascade) summation; error grows only logarithmically in length.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double t : v) s += t;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace unseen::detail
