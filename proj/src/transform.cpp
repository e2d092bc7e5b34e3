#include "fodgmm/transform.hpp"

#include <cmath>
#include <string>

#include "fodgmm/errors.hpp"

namespace fodgmm {

namespace {

void require_periods(std::size_t periods) {
    if (periods < 2) {
        throw DimensionError("T = " + std::to_string(periods) +
                             " < 2: no differenced observations exist");
    }
}

}  // namespace

const char* to_string(Method m) noexcept { return m == Method::FD ? "fd" : "fod"; }

TransformMatrix build_fd(std::size_t periods) {
    require_periods(periods);
    Matrix<double> d(periods - 1, periods);
    for (std::size_t r = 0; r + 1 < periods; ++r) {
        d(r, r) = -1.0;
        d(r, r + 1) = 1.0;
    }
    return {Method::FD, std::move(d)};
}

TransformMatrix build_fod(std::size_t periods) {
    require_periods(periods);
    Matrix<double> f(periods - 1, periods);
    for (std::size_t r = 0; r + 1 < periods; ++r) {
        // Row r (0-based) averages the `ahead` observations that follow it.
        const double ahead = static_cast<double>(periods - r - 1);
        const double scale = std::sqrt(ahead / (ahead + 1.0));
        f(r, r) = scale;
        const double tail = -scale / ahead;
        for (std::size_t c = r + 1; c < periods; ++c) f(r, c) = tail;
    }
    return {Method::FOD, std::move(f)};
}

TransformMatrix build_transform(Method kind, std::size_t periods) {
    return kind == Method::FD ? build_fd(periods) : build_fod(periods);
}

std::vector<double> TransformMatrix::apply(std::span<const double> v) const {
    if (v.size() != cols()) {
        throw DimensionError("transform expects a vector of length " + std::to_string(cols()) +
                             ", got " + std::to_string(v.size()));
    }
    return multiply<double>(entries_, v);
}

}  // namespace fodgmm
