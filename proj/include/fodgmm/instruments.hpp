#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fodgmm/dense.hpp"
#include "fodgmm/panel.hpp"

namespace fodgmm {

/// Number of moment restrictions when every available lag is used: T(T-1)/2.
constexpr std::size_t moment_count(std::size_t periods) noexcept {
    return periods * (periods - 1) / 2;
}

/// Column offset of the t-th (1-based) diagonal block of Z_i: t(t-1)/2.
constexpr std::size_t block_offset(std::size_t t) noexcept { return t * (t - 1) / 2; }

/// Lagged-level instruments z_{it} = (y_{i0}, ..., y_{i,t-1}), t = 1..T-1.
///
/// Each z_{it} is a prefix of z_{i,T-1}, so only that longest history is
/// stored per unit.
class InstrumentBlocks {
public:
    /// Throws DimensionError when the panel has T < 2.
    explicit InstrumentBlocks(const PanelData& panel);

    std::size_t units() const noexcept { return units_; }
    std::size_t periods() const noexcept { return periods_; }
    std::size_t moments() const noexcept { return moment_count(periods_); }

    /// z_{it} for 0-based unit i and 1-based period t in [1, T-1].
    std::span<const double> z(std::size_t i, std::size_t t) const {
        return {history_.data() + i * (periods_ - 1), t};
    }

    /// Dense (T-1) x m block-diagonal Z_i; row t-1 carries z_{it}' in columns
    /// [t(t-1)/2, t(t-1)/2 + t). Throws std::out_of_range for a bad unit.
    template <class Real = double>
    Matrix<Real> block_diag(std::size_t i) const;

private:
    std::size_t units_;
    std::size_t periods_;
    std::vector<double> history_;  // N x (T-1)
};

/// Free-function form of InstrumentBlocks construction.
InstrumentBlocks build_instruments(const PanelData& panel);

/// Dense Z_i as doubles.
Matrix<double> block_diag_view(const InstrumentBlocks& blocks, std::size_t unit);

template <class Real>
Matrix<Real> InstrumentBlocks::block_diag(std::size_t i) const {
    if (i >= units_) throw std::out_of_range("unit index out of range");
    Matrix<Real> out(periods_ - 1, moments());
    for (std::size_t t = 1; t < periods_; ++t) {
        auto src = z(i, t);
        auto dst = out.row(t - 1).subspan(block_offset(t), t);
        for (std::size_t k = 0; k < t; ++k) dst[k] = Real(src[k]);
    }
    return out;
}

}  // namespace fodgmm
