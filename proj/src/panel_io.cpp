#include "fodgmm/panel_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

#include "fodgmm/errors.hpp"

namespace fodgmm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::size_t parse_index(std::string_view field, std::size_t line, const char* what) {
    field = trim(field);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view field, std::size_t line) {
    field = trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(line, "bad number '" + std::string(field) + "'");
    }
    return value;
}

void write_panel_csv(std::ostream& out, const PanelData& panel) {
    out << "unit,time,y\n";
    for (std::size_t i = 0; i < panel.units(); ++i) {
        for (std::size_t t = 0; t <= panel.periods(); ++t) {
            out << (i + 1) << ',' << t << ',' << format_double(panel(i, t)) << '\n';
        }
    }
}

void write_panel_csv(const std::filesystem::path& path, const PanelData& panel) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_panel_csv(out, panel);
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

PanelData read_panel_csv(std::istream& in) {
    std::string text;
    std::size_t line = 0;
    if (!std::getline(in, text)) throw ParseError(1, "empty file, expected header 'unit,time,y'");
    ++line;
    if (trim(text) != "unit,time,y") throw ParseError(line, "expected header 'unit,time,y'");

    std::map<std::pair<std::size_t, std::size_t>, double> cells;
    std::size_t max_unit = 0;
    std::size_t max_time = 0;
    while (std::getline(in, text)) {
        ++line;
        std::string_view row = trim(text);
        if (row.empty()) continue;
        std::array<std::string_view, 3> fields;
        std::size_t count = 0;
        while (true) {
            const auto comma = row.find(',');
            if (count == 3) throw ParseError(line, "expected 3 fields");
            fields[count++] = row.substr(0, comma);
            if (comma == std::string_view::npos) break;
            row.remove_prefix(comma + 1);
        }
        if (count != 3) throw ParseError(line, "expected 3 fields, got " + std::to_string(count));
        const std::size_t unit = parse_index(fields[0], line, "unit");
        const std::size_t time = parse_index(fields[1], line, "time");
        const double y = parse_double(fields[2], line);
        if (unit < 1) throw ParseError(line, "unit numbers start at 1");
        if (!std::isfinite(y)) throw ParseError(line, "non-finite y");
        if (!cells.try_emplace({unit, time}, y).second) {
            throw ParseError(line, "duplicate row for unit " + std::to_string(unit) + ", time " +
                                       std::to_string(time));
        }
        max_unit = std::max(max_unit, unit);
        max_time = std::max(max_time, time);
    }
    if (cells.empty()) throw ParseError(line, "no data rows");
    if (max_time < 2) throw ParseError(0, "panel needs T >= 2 (times 0..T)");
    const std::size_t width = max_time + 1;
    if (cells.size() != max_unit * width) {
        for (std::size_t i = 1; i <= max_unit; ++i) {
            for (std::size_t t = 0; t < width; ++t) {
                if (!cells.count({i, t})) {
                    throw ParseError(0, "unbalanced panel: missing unit " + std::to_string(i) +
                                            ", time " + std::to_string(t));
                }
            }
        }
    }
    std::vector<double> values(max_unit * width);
    for (const auto& [key, cell] : cells) values[(key.first - 1) * width + key.second] = cell;
    return PanelData(max_unit, max_time, std::move(values));
}

PanelData read_panel_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return read_panel_csv(in);
}

}  // namespace fodgmm
