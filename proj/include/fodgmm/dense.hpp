#pragma once

// Dense row-major matrices and the handful of products the GMM pipelines need.
//
// Every product accumulates an inner product of length r as
// x_1*y_1 + x_2*y_2 + ... + x_r*y_r, i.e. r multiplications and r-1 additions,
// so a (q x r)(r x s) product costs exactly q*s*(2r-1) flops. The loop orders
// are chosen so rows are traversed contiguously; they do not change the count.

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fodgmm/counted.hpp"

namespace fodgmm {

template <class Real>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Real& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Real& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Real> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Real> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const Real> data() const noexcept { return data_; }
    std::span<Real> data() noexcept { return data_; }

    static Matrix identity(std::size_t n) {
        Matrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = Real(1.0);
        return out;
    }

    template <class Other>
    Matrix<Other> cast() const {
        Matrix<Other> out(rows_, cols_);
        auto dst = out.data();
        for (std::size_t k = 0; k < data_.size(); ++k) dst[k] = Other(to_double(data_[k]));
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Real> data_;
};

/// A * B.
template <class Real>
Matrix<Real> multiply(const Matrix<Real>& a, const Matrix<Real>& b) {
    assert(a.cols() == b.rows() && a.cols() > 0);
    Matrix<Real> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        const Real lead = a(i, 0);
        auto src = b.row(0);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = lead * src[j];
        for (std::size_t k = 1; k < a.cols(); ++k) {
            const Real s = a(i, k);
            src = b.row(k);
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += s * src[j];
        }
    }
    return out;
}

/// A' * B without forming A'.
template <class Real>
Matrix<Real> multiply_at_b(const Matrix<Real>& a, const Matrix<Real>& b) {
    assert(a.rows() == b.rows() && a.rows() > 0);
    Matrix<Real> out(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        auto dst = out.row(i);
        const Real lead = a(0, i);
        auto src = b.row(0);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = lead * src[j];
        for (std::size_t k = 1; k < a.rows(); ++k) {
            const Real s = a(k, i);
            src = b.row(k);
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += s * src[j];
        }
    }
    return out;
}

template <class Real>
Real dot(std::span<const Real> x, std::span<const Real> y) {
    assert(x.size() == y.size() && !x.empty());
    Real sum = x[0] * y[0];
    for (std::size_t k = 1; k < x.size(); ++k) sum += x[k] * y[k];
    return sum;
}

/// A * B'.
template <class Real>
Matrix<Real> multiply_a_bt(const Matrix<Real>& a, const Matrix<Real>& b) {
    assert(a.cols() == b.cols() && a.cols() > 0);
    Matrix<Real> out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot<Real>(a.row(i), b.row(j));
    }
    return out;
}

/// A * x.
template <class Real>
std::vector<Real> multiply(const Matrix<Real>& a, std::span<const Real> x) {
    assert(a.cols() == x.size());
    std::vector<Real> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot<Real>(a.row(i), x);
    return out;
}

/// A' * x (equivalently x' * A, returned as a column).
template <class Real>
std::vector<Real> multiply_at(const Matrix<Real>& a, std::span<const Real> x) {
    assert(a.rows() == x.size() && a.rows() > 0);
    std::vector<Real> out(a.cols());
    const Real lead = x[0];
    auto src = a.row(0);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = lead * src[j];
    for (std::size_t k = 1; k < a.rows(); ++k) {
        const Real s = x[k];
        src = a.row(k);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += s * src[j];
    }
    return out;
}

template <class Real>
void add_in_place(std::span<Real> acc, std::span<const Real> x) {
    assert(acc.size() == x.size());
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += x[k];
}

template <class Real>
void add_in_place(Matrix<Real>& acc, const Matrix<Real>& x) {
    add_in_place<Real>(acc.data(), x.data());
}

/// Explicit inverse from dense LU with partial pivoting.
template <class Real>
struct Inverse {
    Matrix<Real> value;
    /// Smallest |pivot| / max|entry| met during factorization.
    double pivot_ratio;
};

/// Inverts `a` by LU with partial pivoting followed by forward and back
/// substitution against the identity. Returns nullopt when a pivot falls
/// below `relative_threshold * max|a_ij|`.
template <class Real>
std::optional<Inverse<Real>> invert_lu(Matrix<Real> a, double relative_threshold = 1e-12) {
    assert(a.rows() == a.cols());
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (const auto& x : a.data()) scale = std::max(scale, magnitude(x));
    if (n == 0 || scale == 0.0) return std::nullopt;
    const double floor = relative_threshold * scale;

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double min_pivot = scale;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = magnitude(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = magnitude(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (!(best > floor)) return std::nullopt;
        min_pivot = std::min(min_pivot, best);
        if (p != k) {
            auto rk = a.row(k);
            auto rp = a.row(p);
            for (std::size_t j = 0; j < n; ++j) std::swap(rk[j], rp[j]);
            std::swap(perm[k], perm[p]);
        }
        const Real pivot = a(k, k);
        auto pivot_row = a.row(k);
        for (std::size_t i = k + 1; i < n; ++i) {
            auto r = a.row(i);
            const Real l = r[k] / pivot;
            r[k] = l;
            for (std::size_t j = k + 1; j < n; ++j) r[j] -= l * pivot_row[j];
        }
    }

    // Solve L U X = P.
    Matrix<Real> x(n, n);
    for (std::size_t i = 0; i < n; ++i) x(i, perm[i]) = Real(1.0);
    for (std::size_t i = 1; i < n; ++i) {
        auto xi = x.row(i);
        for (std::size_t k = 0; k < i; ++k) {
            const Real l = a(i, k);
            auto xk = x.row(k);
            for (std::size_t j = 0; j < n; ++j) xi[j] -= l * xk[j];
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        auto xi = x.row(ii);
        for (std::size_t k = ii + 1; k < n; ++k) {
            const Real u = a(ii, k);
            auto xk = x.row(k);
            for (std::size_t j = 0; j < n; ++j) xi[j] -= u * xk[j];
        }
        const Real d = a(ii, ii);
        for (std::size_t j = 0; j < n; ++j) xi[j] /= d;
    }
    return Inverse<Real>{std::move(x), min_pivot / scale};
}

}  // namespace fodgmm
