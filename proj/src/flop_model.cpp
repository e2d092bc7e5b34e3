#include "fodgmm/flop_model.hpp"

#include <cmath>
#include <stdexcept>

#include "fodgmm/errors.hpp"

namespace fodgmm {

namespace {

constexpr int kSchemaVersion = 1;

void require_dimensions(std::uint64_t periods, std::uint64_t units) {
    if (periods < 2) throw DimensionError("flop model needs T >= 2");
    if (units < 1) throw DimensionError("flop model needs N >= 1");
}

FlopReport finish(Method method, std::uint64_t periods, std::uint64_t units,
                  std::vector<FlopStage> stages) {
    FlopReport r{method, periods, units, std::move(stages), 0};
    for (const auto& s : r.stages) r.total += s.flops;
    return r;
}

double to_real(const FlopCount& x) { return x.convert_to<double>(); }

}  // namespace

const FlopCount& FlopReport::stage(std::string_view name) const {
    for (const auto& s : stages) {
        if (s.name == name) return s.flops;
    }
    throw std::out_of_range("no stage named '" + std::string(name) + "'");
}

bool FlopReport::is_inversion(std::string_view name) noexcept {
    return name == stage::fd_invert || name == stage::fod_invert;
}

FlopReport fd_flops(std::uint64_t periods, std::uint64_t units) {
    require_dimensions(periods, units);
    const FlopCount t = periods;
    const FlopCount n = units;
    const FlopCount m = t * (t - 1) / 2;

    const FlopCount transform = n * (t - 1) * (2 * t - 1);
    const FlopCount moment_sum = m * (2 * n * (t - 1) - 1);
    return finish(Method::FD, periods, units,
                  {
                      {std::string(stage::fd_transform), transform},
                      {std::string(stage::fd_s), moment_sum},
                      {std::string(stage::fd_s_lag), moment_sum + transform},
                      {std::string(stage::fd_g), (t - 1) * (t - 1) * (2 * t - 1)},
                      {std::string(stage::fd_gz), n * m * (t - 1) * (2 * t - 3)},
                      {std::string(stage::fd_zgz), n * m * m * (2 * t - 3)},
                      {std::string(stage::fd_sum), (n - 1) * m * m},
                      {std::string(stage::fd_invert), m * m * m},
                      {std::string(stage::fd_a), m * (2 * m - 1)},
                      {std::string(stage::fd_dots), 2 * (2 * m - 1)},
                  });
}

FlopReport fod_flops(std::uint64_t periods, std::uint64_t units) {
    require_dimensions(periods, units);
    const FlopCount t = periods;
    const FlopCount n = units;

    const FlopCount f1 = n * (t - 1) * (2 * t - 1) + (2 * n - 1) * t * (t - 1) / 2;
    return finish(Method::FOD, periods, units,
                  {
                      {std::string(stage::fod_s), f1},
                      {std::string(stage::fod_s_lag), f1},
                      {std::string(stage::fod_weight), (2 * n - 1) * t * (2 * t - 1) * (t - 1) / 6},
                      {std::string(stage::fod_invert), t * t * (t - 1) * (t - 1) / 4},
                      {std::string(stage::fod_a), t * (t - 1) * (4 * t - 5) / 6},
                      {std::string(stage::fod_dots), t * (t - 2) + 1},
                      {std::string(stage::fod_sum), t - 2},
                  });
}

FlopReport flop_report(Method method, std::uint64_t periods, std::uint64_t units) {
    return method == Method::FD ? fd_flops(periods, units) : fod_flops(periods, units);
}

double growth_exponent(Method method, std::uint64_t periods, std::uint64_t units, GrowthAxis axis) {
    const auto base = flop_report(method, periods, units);
    const auto grown = axis == GrowthAxis::T ? flop_report(method, 2 * periods, units)
                                             : flop_report(method, periods, 2 * units);
    return std::log2(to_real(grown.total) / to_real(base.total));
}

double flop_ratio(std::uint64_t periods, std::uint64_t units) {
    return to_real(fd_flops(periods, units).total) / to_real(fod_flops(periods, units).total);
}

nlohmann::json to_json(const FlopReport& report) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : report.stages) {
        stages.push_back({{"name", s.name}, {"flops", s.flops.str()}});
    }
    return {{"schema_version", kSchemaVersion},
            {"method", to_string(report.method)},
            {"T", report.periods},
            {"N", report.units},
            {"stages", std::move(stages)},
            {"total", report.total.str()}};
}

FlopReport flop_report_from_json(const nlohmann::json& j) {
    FlopReport r;
    const auto method = j.at("method").get<std::string>();
    if (method != "fd" && method != "fod") throw ParseError(0, "unknown method '" + method + "'");
    r.method = method == "fd" ? Method::FD : Method::FOD;
    r.periods = j.at("T").get<std::uint64_t>();
    r.units = j.at("N").get<std::uint64_t>();
    for (const auto& s : j.at("stages")) {
        r.stages.push_back({s.at("name").get<std::string>(),
                            FlopCount(s.at("flops").get<std::string>())});
    }
    r.total = FlopCount(j.at("total").get<std::string>());
    return r;
}

}  // namespace fodgmm
