#include "fodgmm/dgp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fodgmm/errors.hpp"
#include "fodgmm/rng.hpp"

namespace fodgmm {

void DgpConfig::validate() const {
    if (periods < 2) throw DimensionError("simulation needs T >= 2");
    if (units < 1) throw DimensionError("simulation needs N >= 1");
    if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
    if (burn_in > 0 && !(std::abs(delta) < 1.0)) {
        throw std::invalid_argument("|delta| must be < 1 when a burn-in is used");
    }
    if (!(eta_sd >= 0.0) || !std::isfinite(eta_sd)) throw std::invalid_argument("eta_sd must be >= 0");
    if (!(v_sd >= 0.0) || !std::isfinite(v_sd)) throw std::invalid_argument("v_sd must be >= 0");
}

PanelData simulate(const DgpConfig& config) {
    config.validate();
    const std::size_t width = config.periods + 1;
    std::vector<double> values(config.units * width);
    for (std::size_t i = 0; i < config.units; ++i) {
        CounterStream stream(substream_key(config.seed, i));
        const double eta = config.eta_sd * stream.next_normal();
        double y = 0.0;  // t = -burn_in
        for (std::size_t k = 0; k < config.burn_in; ++k) {
            y = config.delta * y + eta + config.v_sd * stream.next_normal();
        }
        double* row = values.data() + i * width;
        row[0] = y;
        for (std::size_t t = 1; t < width; ++t) {
            y = config.delta * y + eta + config.v_sd * stream.next_normal();
            row[t] = y;
        }
    }
    return PanelData(config.units, config.periods, std::move(values));
}

}  // namespace fodgmm
