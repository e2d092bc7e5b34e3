#include "fodgmm/instruments.hpp"

#include <algorithm>

#include "fodgmm/errors.hpp"

namespace fodgmm {

InstrumentBlocks::InstrumentBlocks(const PanelData& panel)
    : units_(panel.units()), periods_(panel.periods()) {
    if (periods_ < 2) throw DimensionError("instruments need T >= 2");
    history_.resize(units_ * (periods_ - 1));
    for (std::size_t i = 0; i < units_; ++i) {
        auto y = panel.unit(i);
        std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(periods_ - 1),
                  history_.begin() + static_cast<std::ptrdiff_t>(i * (periods_ - 1)));
    }
}

InstrumentBlocks build_instruments(const PanelData& panel) { return InstrumentBlocks(panel); }

Matrix<double> block_diag_view(const InstrumentBlocks& blocks, std::size_t unit) {
    return blocks.block_diag<double>(unit);
}

}  // namespace fodgmm
