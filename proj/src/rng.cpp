#include "fodgmm/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

namespace fodgmm {

double normal_quantile(double p) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p); }

double CounterStream::next_normal() { return normal_quantile(next_uniform()); }

}  // namespace fodgmm
