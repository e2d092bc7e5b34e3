#include "fodgmm/counted.hpp"

#include <algorithm>

namespace fodgmm {

void OpTally::begin_stage(std::string_view name) {
    auto it = std::find_if(stages_.begin(), stages_.end(),
                           [&](const auto& s) { return s.first == name; });
    if (it == stages_.end()) {
        stages_.emplace_back(std::string(name), 0);
        current_ = stages_.size() - 1;
    } else {
        current_ = static_cast<std::size_t>(it - stages_.begin());
    }
}

std::uint64_t OpTally::count(std::string_view name) const {
    for (const auto& [stage, n] : stages_) {
        if (stage == name) return n;
    }
    return 0;
}

std::uint64_t OpTally::total() const {
    std::uint64_t sum = 0;
    for (const auto& s : stages_) sum += s.second;
    return sum;
}

}  // namespace fodgmm
