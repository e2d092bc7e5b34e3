#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fodgmm/panel.hpp"

namespace fodgmm {

/// Shortest decimal form that parses back to exactly `x`.
std::string format_double(double x);
/// Strict parse of a whole field; throws ParseError(line, ...) on failure.
double parse_double(std::string_view field, std::size_t line);

/// CSV with header `unit,time,y`, one row per observation, unit 1..N
/// major, time 0..T minor.
void write_panel_csv(std::ostream& out, const PanelData& panel);
void write_panel_csv(const std::filesystem::path& path, const PanelData& panel);

/// Reads the layout written by write_panel_csv. Rows may come in any order
/// but every (unit, time) cell must appear exactly once. Errors name the
/// offending 1-based line.
PanelData read_panel_csv(std::istream& in);
PanelData read_panel_csv(const std::filesystem::path& path);

}  // namespace fodgmm
