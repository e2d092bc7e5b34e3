#pragma once

// Timing harness: for every (T, N) cell of a grid, estimate a batch of
// independent simulated panels with both pipelines and compare total time.
//
// Only the estimation call is timed. Panel generation happens outside the
// clock; instrument construction, transforms, moment sums, inversions and the
// final ratio happen inside it.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fodgmm/flop_model.hpp"
#include "fodgmm/transform.hpp"

namespace fodgmm {

struct BenchPlan {
    std::vector<std::size_t> periods_grid{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    std::vector<std::size_t> units_grid{100, 200, 300, 400, 500};
    std::size_t replications = 100;
    std::vector<Method> methods{Method::FD, Method::FOD};
    /// Untimed estimates per method and cell before the clock starts.
    std::size_t warmup = 3;
    std::uint64_t seed = 2018;
    double delta = 0.5;
    /// Run cells concurrently. Timings are then flagged as not comparable.
    bool parallel_cells = false;

    /// Throws std::invalid_argument for empty grids, zero replications,
    /// T < 2, N < 1 or no methods.
    void validate() const;
    bool runs(Method m) const;
};

/// Seed of replication `rep` in cell (T, N); shared by both methods.
std::uint64_t replication_seed(std::uint64_t base, std::size_t periods, std::size_t units,
                               std::size_t rep);

enum class CellStatus { Ok, Skipped, Failed };
const char* to_string(CellStatus s) noexcept;

struct CellResult {
    Method method = Method::FD;
    std::size_t periods = 0;
    std::size_t units = 0;
    CellStatus status = CellStatus::Ok;
    std::string reason;  // why a cell was skipped or failed
    std::size_t replications = 0;
    /// Total wall-clock seconds over the timed replications (steady clock).
    double seconds = 0.0;
    std::vector<double> estimates;
    FlopCount predicted_flops;
};

struct BenchResult {
    BenchPlan plan;
    std::vector<CellResult> cells;
    bool timing_comparable = true;
    /// Replications where FD and FOD disagreed beyond 1e-8 * (1 + |fd|).
    std::size_t equivalence_failures = 0;
    double max_equivalence_gap = 0.0;

    const CellResult* find(Method method, std::size_t periods, std::size_t units) const;
    /// Total seconds of an Ok cell, nullopt otherwise.
    std::optional<double> seconds(Method method, std::size_t periods, std::size_t units) const;
    bool all_ok() const;
};

BenchResult run(const BenchPlan& plan);

/// FD time over FOD time, rows N, columns T, in grid order.
struct RatioTable {
    std::vector<std::size_t> units;
    std::vector<std::size_t> periods;
    std::vector<std::vector<std::optional<double>>> ratio;  // [row N][col T]

    std::optional<double> at(std::size_t n, std::size_t t) const;
};

RatioTable table1(const BenchResult& result);

enum class ScalingAxis { N, T };

struct Series {
    std::string name;  // "fd", "fod", "fd_model", "fod_model"
    std::vector<std::size_t> x;
    std::vector<double> y;

    std::optional<double> at(std::size_t xv) const;
};

/// Each cell's time divided by the reference cell's, along one axis. The
/// reference is the smallest T and smallest N of the grid; the other
/// coordinate is held at that reference. Measured series come first, then
/// flop-model predictions for the same points.
std::vector<Series> scaling_curves(const BenchResult& result, ScalingAxis axis);

nlohmann::json to_json(const BenchPlan& plan);
BenchPlan bench_plan_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BenchResult& result);
BenchResult bench_result_from_json(const nlohmann::json& j);

std::string table1_csv(const RatioTable& table);
std::string series_csv(const std::vector<Series>& series, const char* axis_name);
/// Per-cell times next to the flop-model prediction.
std::string cells_csv(const BenchResult& result);
/// Line chart with one polyline per series.
std::string series_svg(const std::vector<Series>& series, const std::string& title,
                       const char* axis_name);

/// Writes table1.csv, fig1.csv, fig2.csv, cells.csv, bench.json and, when
/// `svg` is set, fig1.svg and fig2.svg into `dir`.
void write_reports(const BenchResult& result, const std::filesystem::path& dir, bool svg);

}  // namespace fodgmm
