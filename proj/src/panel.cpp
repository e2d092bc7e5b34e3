#include "fodgmm/panel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fodgmm/errors.hpp"

namespace fodgmm {

PanelData::PanelData(std::size_t units, std::size_t periods, std::vector<double> values)
    : units_(units), periods_(periods), values_(std::move(values)) {
    if (units_ < 1) throw DimensionError("panel needs at least one unit");
    if (periods_ < 2) throw DimensionError("panel needs T >= 2: no differenced observations exist");
    if (values_.size() != units_ * (periods_ + 1)) {
        throw DimensionError("panel holds " + std::to_string(values_.size()) +
                             " values, expected N*(T+1) = " +
                             std::to_string(units_ * (periods_ + 1)));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw std::invalid_argument("non-finite value for unit " +
                                        std::to_string(k / (periods_ + 1) + 1) + ", time " +
                                        std::to_string(k % (periods_ + 1)));
        }
    }
}

}  // namespace fodgmm
