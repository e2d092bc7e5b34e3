#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fodgmm/dense.hpp"

namespace fodgmm {

enum class Method { FD, FOD };

const char* to_string(Method m) noexcept;

/// Dense (T-1) x T transformation matrix that removes unit effects.
///
/// FD: row t has -1 at column t and +1 at column t+1 (1-based).
/// FOD: row t is c_t * (0, ..., 0, 1, -1/(T-t), ..., -1/(T-t)) with
/// c_t = sqrt((T-t)/(T-t+1)); the rows are orthonormal.
///
/// Immutable once built.
class TransformMatrix {
public:
    Method kind() const noexcept { return kind_; }
    std::size_t periods() const noexcept { return entries_.cols(); }
    std::size_t rows() const noexcept { return entries_.rows(); }
    std::size_t cols() const noexcept { return entries_.cols(); }
    /// 0-based access into the row-major layout.
    double operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }
    const Matrix<double>& entries() const noexcept { return entries_; }

    /// Dense product M * v. Throws DimensionError when v.size() != cols().
    std::vector<double> apply(std::span<const double> v) const;

private:
    friend TransformMatrix build_fd(std::size_t);
    friend TransformMatrix build_fod(std::size_t);
    TransformMatrix(Method kind, Matrix<double> entries) : kind_(kind), entries_(std::move(entries)) {}

    Method kind_;
    Matrix<double> entries_;
};

/// First-difference matrix D. Throws DimensionError for T < 2.
TransformMatrix build_fd(std::size_t periods);
/// Forward-orthogonal-deviations matrix F. Throws DimensionError for T < 2.
TransformMatrix build_fod(std::size_t periods);
TransformMatrix build_transform(Method kind, std::size_t periods);

}  // namespace fodgmm
