#pragma once

#include <cstddef>
#include <cstdint>

#include "fodgmm/panel.hpp"

namespace fodgmm {

/// Stationary AR(1) panel with unit effects:
///   y_it = delta * y_{i,t-1} + eta_i + v_it,  y_{i,-burn_in} = 0,
/// simulated for t = -(burn_in - 1), ..., T and truncated to t = 0..T.
struct DgpConfig {
    double delta = 0.5;
    std::size_t periods = 5;  // T
    std::size_t units = 100;  // N
    std::uint64_t seed = 0;
    std::size_t burn_in = 50;
    double eta_sd = 1.0;
    double v_sd = 1.0;

    /// Throws DimensionError for T < 2 or N < 1 and std::invalid_argument for
    /// negative or non-finite scales, or |delta| >= 1 with a burn-in.
    void validate() const;
};

/// Unit i (0-based) draws from stream substream_key(seed, i): first eta_i,
/// then v_it for each simulated period in time order. Output is identical
/// whether units are generated sequentially or in parallel, and unit i's path
/// does not depend on N.
PanelData simulate(const DgpConfig& config);

}  // namespace fodgmm
