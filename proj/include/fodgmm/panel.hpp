#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fodgmm {

/// Balanced panel of outcomes y_{i0}, ..., y_{iT} for units i = 1..N.
///
/// Storage is row-major by unit: row i holds the T+1 observations of unit i,
/// column 0 being the first available observation. Indices are 0-based in
/// code; unit i here is unit i+1 in files and reports.
class PanelData {
public:
    /// Throws DimensionError unless N >= 1, T >= 2 and values.size() == N*(T+1),
    /// and std::invalid_argument on a non-finite entry.
    PanelData(std::size_t units, std::size_t periods, std::vector<double> values);

    std::size_t units() const noexcept { return units_; }
    /// Number of estimation periods T (each unit has T+1 observations).
    std::size_t periods() const noexcept { return periods_; }

    /// All T+1 observations of one unit.
    std::span<const double> unit(std::size_t i) const {
        return {values_.data() + i * (periods_ + 1), periods_ + 1};
    }
    /// y_i = (y_{i1}, ..., y_{iT}).
    std::span<const double> current(std::size_t i) const { return unit(i).subspan(1); }
    /// y_{i,-1} = (y_{i0}, ..., y_{i,T-1}).
    std::span<const double> lagged(std::size_t i) const { return unit(i).first(periods_); }

    double operator()(std::size_t i, std::size_t t) const { return values_[i * (periods_ + 1) + t]; }

    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const PanelData&, const PanelData&) = default;

private:
    std::size_t units_;
    std::size_t periods_;
    std::vector<double> values_;
};

}  // namespace fodgmm
