#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fodgmm/bench.hpp"
#include "fodgmm/errors.hpp"
#include "fodgmm/panel_io.hpp"

namespace fodgmm {

namespace {

constexpr int kSchemaVersion = 1;

Method method_from_string(const std::string& s) {
    if (s == "fd") return Method::FD;
    if (s == "fod") return Method::FOD;
    throw ParseError(0, "unknown method '" + s + "'");
}

CellStatus status_from_string(const std::string& s) {
    if (s == "ok") return CellStatus::Ok;
    if (s == "skipped") return CellStatus::Skipped;
    if (s == "failed") return CellStatus::Failed;
    throw ParseError(0, "unknown cell status '" + s + "'");
}

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json series_json(const std::vector<Series>& series) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : series) out.push_back({{"name", s.name}, {"x", s.x}, {"y", s.y}});
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

nlohmann::json to_json(const BenchPlan& plan) {
    std::vector<std::string> methods;
    for (Method m : plan.methods) methods.emplace_back(to_string(m));
    return {{"T_grid", plan.periods_grid},       {"N_grid", plan.units_grid},
            {"replications", plan.replications}, {"methods", methods},
            {"warmup", plan.warmup},             {"seed", plan.seed},
            {"delta", plan.delta},               {"parallel_cells", plan.parallel_cells}};
}

BenchPlan bench_plan_from_json(const nlohmann::json& j) {
    BenchPlan plan;
    plan.periods_grid = j.at("T_grid").get<std::vector<std::size_t>>();
    plan.units_grid = j.at("N_grid").get<std::vector<std::size_t>>();
    plan.replications = j.at("replications").get<std::size_t>();
    plan.methods.clear();
    for (const auto& m : j.at("methods")) plan.methods.push_back(method_from_string(m.get<std::string>()));
    plan.warmup = j.at("warmup").get<std::size_t>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.delta = j.at("delta").get<double>();
    plan.parallel_cells = j.at("parallel_cells").get<bool>();
    return plan;
}

nlohmann::json to_json(const BenchResult& result) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : result.cells) {
        cells.push_back({{"method", to_string(c.method)},
                         {"T", c.periods},
                         {"N", c.units},
                         {"status", to_string(c.status)},
                         {"reason", c.reason},
                         {"replications", c.replications},
                         {"seconds", c.seconds},
                         {"estimates", c.estimates},
                         {"predicted_flops", c.predicted_flops.str()}});
    }
    const RatioTable t1 = table1(result);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < t1.units.size(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& v : t1.ratio[r]) row.push_back(optional_number(v));
        rows.push_back({{"N", t1.units[r]}, {"fd_over_fod", row}});
    }
    return {{"schema_version", kSchemaVersion},
            {"timing_scope", "estimation call only; panel generation excluded"},
            {"timing_comparable", result.timing_comparable},
            {"plan", to_json(result.plan)},
            {"equivalence", {{"failures", result.equivalence_failures},
                             {"max_relative_gap", result.max_equivalence_gap}}},
            {"cells", cells},
            {"table1", {{"T", t1.periods}, {"rows", rows}}},
            {"fig1", series_json(scaling_curves(result, ScalingAxis::N))},
            {"fig2", series_json(scaling_curves(result, ScalingAxis::T))}};
}

BenchResult bench_result_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
        throw ParseError(0, "unsupported bench.json schema_version");
    }
    BenchResult r;
    r.plan = bench_plan_from_json(j.at("plan"));
    r.timing_comparable = j.at("timing_comparable").get<bool>();
    r.equivalence_failures = j.at("equivalence").at("failures").get<std::size_t>();
    r.max_equivalence_gap = j.at("equivalence").at("max_relative_gap").get<double>();
    for (const auto& c : j.at("cells")) {
        CellResult cell;
        cell.method = method_from_string(c.at("method").get<std::string>());
        cell.periods = c.at("T").get<std::size_t>();
        cell.units = c.at("N").get<std::size_t>();
        cell.status = status_from_string(c.at("status").get<std::string>());
        cell.reason = c.at("reason").get<std::string>();
        cell.replications = c.at("replications").get<std::size_t>();
        cell.seconds = c.at("seconds").get<double>();
        cell.estimates = c.at("estimates").get<std::vector<double>>();
        cell.predicted_flops = FlopCount(c.at("predicted_flops").get<std::string>());
        r.cells.push_back(std::move(cell));
    }
    return r;
}

std::string table1_csv(const RatioTable& table) {
    std::ostringstream out;
    out << "N";
    for (auto t : table.periods) out << ",T=" << t;
    out << '\n';
    for (std::size_t r = 0; r < table.units.size(); ++r) {
        out << table.units[r];
        for (const auto& v : table.ratio[r]) {
            out << ',';
            if (v) out << format_double(*v);
        }
        out << '\n';
    }
    return out.str();
}

std::string series_csv(const std::vector<Series>& series, const char* axis_name) {
    std::vector<std::size_t> xs;
    for (const auto& s : series) xs.insert(xs.end(), s.x.begin(), s.x.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::ostringstream out;
    out << axis_name;
    for (const auto& s : series) out << ',' << s.name;
    out << '\n';
    for (auto x : xs) {
        out << x;
        for (const auto& s : series) {
            out << ',';
            if (auto v = s.at(x)) out << format_double(*v);
        }
        out << '\n';
    }
    return out.str();
}

std::string cells_csv(const BenchResult& result) {
    std::ostringstream out;
    out << "method,T,N,status,replications,seconds,seconds_per_estimate,predicted_flops\n";
    for (const auto& c : result.cells) {
        out << to_string(c.method) << ',' << c.periods << ',' << c.units << ','
            << to_string(c.status) << ',' << c.replications << ',' << format_double(c.seconds)
            << ',';
        if (c.replications > 0) out << format_double(c.seconds / static_cast<double>(c.replications));
        out << ',' << c.predicted_flops.str() << '\n';
    }
    return out.str();
}

std::string series_svg(const std::vector<Series>& series, const std::string& title,
                       const char* axis_name) {
    constexpr double width = 640, height = 400, left = 70, right = 130, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = 0, x_max = 0, y_max = 0;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            const double x = static_cast<double>(s.x[k]);
            if (first) {
                x_min = x_max = x;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            if (std::isfinite(s.y[k])) y_max = std::max(y_max, s.y[k]);
        }
    }
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max <= 0) y_max = 1;
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + plot_h - y / y_max * plot_h; };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\">" << axis_name << "</text>\n";
    for (int k = 0; k <= 4; ++k) {
        const double y = y_max * k / 4.0;
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
            << format_double(std::round(y * 100) / 100) << "</text>\n";
    }
    std::size_t idx = 0;
    for (const auto& s : series) {
        const char* color = colors[idx % 6];
        const bool dashed = s.name.find("_model") != std::string::npos;
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
            << (dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            out << px(static_cast<double>(s.x[k])) << ',' << py(s.y[k]) << ' ';
        }
        out << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(idx);
        out << "<line x1=\"" << left + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\""
            << left + plot_w + 35 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n"
            << "<text x=\"" << left + plot_w + 40 << "\" y=\"" << ly + 4 << "\">" << s.name
            << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
    return out.str();
}

void write_reports(const BenchResult& result, const std::filesystem::path& dir, bool svg) {
    std::filesystem::create_directories(dir);
    const auto fig1 = scaling_curves(result, ScalingAxis::N);
    const auto fig2 = scaling_curves(result, ScalingAxis::T);
    write_text(dir / "table1.csv", table1_csv(table1(result)));
    write_text(dir / "fig1.csv", series_csv(fig1, "N"));
    write_text(dir / "fig2.csv", series_csv(fig2, "T"));
    write_text(dir / "cells.csv", cells_csv(result));
    write_text(dir / "bench.json", to_json(result).dump(2) + "\n");
    if (svg) {
        write_text(dir / "fig1.svg", series_svg(fig1, "Time relative to smallest N", "N"));
        write_text(dir / "fig2.svg", series_svg(fig2, "Time relative to smallest T", "T"));
    }
}

}  // namespace fodgmm
