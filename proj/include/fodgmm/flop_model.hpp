#pragma once

// Closed-form flop counts of the two one-step GMM recipes.
//
// A flop is one addition, subtraction, multiplication or division. For
// q x r matrices B, E, an r x s matrix H and a scalar d, dB and B +/- E cost
// qr flops and BH costs qs(2r - 1). Inverting a q x q matrix is charged q^3.
// Counts are exact arbitrary-precision integers.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fodgmm/transform.hpp"

namespace fodgmm {

using FlopCount = boost::multiprecision::cpp_int;

namespace stage {
// First-difference pipeline, in execution order.
inline constexpr std::string_view fd_transform = "transform";  // D y_i
inline constexpr std::string_view fd_s = "s";
inline constexpr std::string_view fd_s_lag = "s_lag";  // includes D y_{i,-1}
inline constexpr std::string_view fd_g = "G";
inline constexpr std::string_view fd_gz = "GZ products";
inline constexpr std::string_view fd_zgz = "ZGZ products";
inline constexpr std::string_view fd_sum = "A_N sum";
inline constexpr std::string_view fd_invert = "invert A_N";
inline constexpr std::string_view fd_a = "a";
inline constexpr std::string_view fd_dots = "a.s and a.s_lag";

// Forward-orthogonal-deviations pipeline.
inline constexpr std::string_view fod_s = "f1";        // F y_i and every s_t
inline constexpr std::string_view fod_s_lag = "f2";    // F y_{i,-1} and every s_{t-1}
inline constexpr std::string_view fod_weight = "f3";   // every S_t
inline constexpr std::string_view fod_invert = "f4";   // every S_t^{-1}
inline constexpr std::string_view fod_a = "f5";        // every a_t
inline constexpr std::string_view fod_dots = "f6";     // every a_t . s_t
inline constexpr std::string_view fod_sum = "f7";      // sum over t of a_t . s_t

// Work the closed forms leave out; only the instrumented pipelines report it.
inline constexpr std::string_view ratio = "ratio";
inline constexpr std::string_view fod_denominator = "denominator";
}  // namespace stage

struct FlopStage {
    std::string name;
    FlopCount flops;
};

struct FlopReport {
    Method method = Method::FD;
    std::uint64_t periods = 0;
    std::uint64_t units = 0;
    std::vector<FlopStage> stages;
    FlopCount total;

    /// Count of the named stage; throws std::out_of_range for an unknown name.
    const FlopCount& stage(std::string_view name) const;
    /// True for the matrix-inversion stages, which the model charges q^3
    /// rather than an exact operation count.
    static bool is_inversion(std::string_view name) noexcept;
};

/// Throws DimensionError unless T >= 2 and N >= 1.
FlopReport fd_flops(std::uint64_t periods, std::uint64_t units);
FlopReport fod_flops(std::uint64_t periods, std::uint64_t units);
FlopReport flop_report(Method method, std::uint64_t periods, std::uint64_t units);

enum class GrowthAxis { T, N };

/// log2(total(2T, N) / total(T, N)) for GrowthAxis::T, and the analogue in N.
double growth_exponent(Method method, std::uint64_t periods, std::uint64_t units, GrowthAxis axis);

/// fd total / fod total.
double flop_ratio(std::uint64_t periods, std::uint64_t units);

/// {schema_version, method, T, N, stages: [{name, flops}], total}. Counts are
/// written as decimal strings since they can exceed 64 bits.
nlohmann::json to_json(const FlopReport& report);
FlopReport flop_report_from_json(const nlohmann::json& j);

}  // namespace fodgmm
