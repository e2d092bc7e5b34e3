#include "fodgmm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

#include "fodgmm/dgp.hpp"
#include "fodgmm/estimator.hpp"
#include "fodgmm/rng.hpp"

namespace fodgmm {

namespace {

bool equivalent(double fd, double fod) { return std::abs(fd - fod) <= 1e-8 * (1.0 + std::abs(fd)); }

struct CellPair {
    std::vector<CellResult> cells;  // one per requested method
    std::size_t equivalence_failures = 0;
    double max_gap = 0.0;
};

CellPair run_cell(const BenchPlan& plan, std::size_t periods, std::size_t units) {
    CellPair out;
    std::vector<Method> active;
    for (Method m : plan.methods) {
        CellResult c;
        c.method = m;
        c.periods = periods;
        c.units = units;
        c.predicted_flops = flop_report(m, periods, units).total * plan.replications;
        if (m == Method::FOD && units + 1 < periods) {
            c.status = CellStatus::Skipped;
            c.reason = "FOD needs N >= T-1 (S_t is singular for t > N)";
        } else {
            active.push_back(m);
        }
        out.cells.push_back(std::move(c));
    }
    if (active.empty()) return out;
    auto cell_for = [&](Method m) -> CellResult& {
        return *std::find_if(out.cells.begin(), out.cells.end(),
                             [m](const CellResult& c) { return c.method == m; });
    };

    DgpConfig config;
    config.delta = plan.delta;
    config.periods = periods;
    config.units = units;

    if (plan.warmup > 0) {
        config.seed = replication_seed(plan.seed, periods, units, 0);
        const PanelData panel = simulate(config);
        for (Method m : active) {
            for (std::size_t w = 0; w < plan.warmup; ++w) {
                try {
                    (void)estimate(panel, m);
                } catch (const std::exception&) {
                    break;  // surfaces again in the timed loop
                }
            }
        }
    }

    for (std::size_t rep = 0; rep < plan.replications; ++rep) {
        config.seed = replication_seed(plan.seed, periods, units, rep);
        const PanelData panel = simulate(config);
        std::optional<double> fd_value;
        std::optional<double> fod_value;
        for (Method m : active) {
            CellResult& cell = cell_for(m);
            if (cell.status == CellStatus::Failed) continue;
            try {
                const auto start = std::chrono::steady_clock::now();
                const Estimate e = m == Method::FD ? fd_estimate(panel) : fod_estimate(panel);
                cell.seconds +=
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                cell.estimates.push_back(e.delta_hat);
                ++cell.replications;
                (m == Method::FD ? fd_value : fod_value) = e.delta_hat;
            } catch (const std::exception& ex) {
                cell.status = CellStatus::Failed;
                cell.reason = "replication " + std::to_string(rep) + ": " + ex.what();
            }
        }
        if (fd_value && fod_value) {
            const double gap = std::abs(*fd_value - *fod_value);
            out.max_gap = std::max(out.max_gap, gap / (1.0 + std::abs(*fd_value)));
            if (!equivalent(*fd_value, *fod_value)) ++out.equivalence_failures;
        }
    }
    return out;
}

}  // namespace

void BenchPlan::validate() const {
    if (periods_grid.empty() || units_grid.empty()) throw std::invalid_argument("empty grid");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (methods.empty()) throw std::invalid_argument("no methods selected");
    for (auto t : periods_grid) {
        if (t < 2) throw std::invalid_argument("T grid entries must be >= 2");
    }
    for (auto n : units_grid) {
        if (n < 1) throw std::invalid_argument("N grid entries must be >= 1");
    }
    if (!(std::abs(delta) < 1.0)) throw std::invalid_argument("|delta| must be < 1");
}

bool BenchPlan::runs(Method m) const {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t periods, std::size_t units,
                               std::size_t rep) {
    return substream_key(substream_key(substream_key(base, periods), units), rep);
}

const char* to_string(CellStatus s) noexcept {
    switch (s) {
        case CellStatus::Ok: return "ok";
        case CellStatus::Skipped: return "skipped";
        case CellStatus::Failed: return "failed";
    }
    return "?";
}

const CellResult* BenchResult::find(Method method, std::size_t periods, std::size_t units) const {
    for (const auto& c : cells) {
        if (c.method == method && c.periods == periods && c.units == units) return &c;
    }
    return nullptr;
}

std::optional<double> BenchResult::seconds(Method method, std::size_t periods,
                                           std::size_t units) const {
    const CellResult* c = find(method, periods, units);
    if (!c || c->status != CellStatus::Ok) return std::nullopt;
    return c->seconds;
}

bool BenchResult::all_ok() const {
    return std::all_of(cells.begin(), cells.end(),
                       [](const CellResult& c) { return c.status == CellStatus::Ok; });
}

BenchResult run(const BenchPlan& plan) {
    plan.validate();
    BenchResult result;
    result.plan = plan;
    result.timing_comparable = !plan.parallel_cells;

    std::vector<std::pair<std::size_t, std::size_t>> grid;
    for (auto t : plan.periods_grid) {
        for (auto n : plan.units_grid) grid.emplace_back(t, n);
    }

    std::vector<CellPair> pairs(grid.size());
    if (plan.parallel_cells) {
        const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::future<CellPair>> pending;
        std::size_t next = 0;
        while (next < grid.size()) {
            pending.clear();
            const std::size_t batch_end = std::min(grid.size(), next + workers);
            for (std::size_t k = next; k < batch_end; ++k) {
                pending.push_back(std::async(std::launch::async, run_cell, std::cref(plan),
                                             grid[k].first, grid[k].second));
            }
            for (std::size_t k = next; k < batch_end; ++k) pairs[k] = pending[k - next].get();
            next = batch_end;
        }
    } else {
        for (std::size_t k = 0; k < grid.size(); ++k) pairs[k] = run_cell(plan, grid[k].first, grid[k].second);
    }

    for (auto& p : pairs) {
        result.equivalence_failures += p.equivalence_failures;
        result.max_equivalence_gap = std::max(result.max_equivalence_gap, p.max_gap);
        for (auto& c : p.cells) result.cells.push_back(std::move(c));
    }
    return result;
}

std::optional<double> RatioTable::at(std::size_t n, std::size_t t) const {
    const auto row = std::find(units.begin(), units.end(), n);
    const auto col = std::find(periods.begin(), periods.end(), t);
    if (row == units.end() || col == periods.end()) return std::nullopt;
    return ratio[static_cast<std::size_t>(row - units.begin())]
                [static_cast<std::size_t>(col - periods.begin())];
}

RatioTable table1(const BenchResult& result) {
    RatioTable table;
    table.units = result.plan.units_grid;
    table.periods = result.plan.periods_grid;
    for (auto n : table.units) {
        auto& row = table.ratio.emplace_back();
        for (auto t : table.periods) {
            const auto fd = result.seconds(Method::FD, t, n);
            const auto fod = result.seconds(Method::FOD, t, n);
            if (fd && fod && *fod > 0.0) {
                row.push_back(*fd / *fod);
            } else {
                row.push_back(std::nullopt);
            }
        }
    }
    return table;
}

std::optional<double> Series::at(std::size_t xv) const {
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == xv) return y[k];
    }
    return std::nullopt;
}

std::vector<Series> scaling_curves(const BenchResult& result, ScalingAxis axis) {
    const auto& plan = result.plan;
    const std::size_t t_ref = *std::min_element(plan.periods_grid.begin(), plan.periods_grid.end());
    const std::size_t n_ref = *std::min_element(plan.units_grid.begin(), plan.units_grid.end());
    const auto& xs = axis == ScalingAxis::N ? plan.units_grid : plan.periods_grid;

    std::vector<Series> out;
    for (Method m : plan.methods) {
        const auto ref = result.seconds(m, t_ref, n_ref);
        Series s{to_string(m), {}, {}};
        if (ref && *ref > 0.0) {
            for (auto x : xs) {
                const auto t = axis == ScalingAxis::N ? t_ref : x;
                const auto n = axis == ScalingAxis::N ? x : n_ref;
                if (auto v = result.seconds(m, t, n)) {
                    s.x.push_back(x);
                    s.y.push_back(*v / *ref);
                }
            }
        }
        out.push_back(std::move(s));
    }
    for (Method m : plan.methods) {
        const auto ref = flop_report(m, t_ref, n_ref).total.convert_to<double>();
        Series s{std::string(to_string(m)) + "_model", {}, {}};
        for (auto x : xs) {
            const auto t = axis == ScalingAxis::N ? t_ref : x;
            const auto n = axis == ScalingAxis::N ? x : n_ref;
            s.x.push_back(x);
            s.y.push_back(flop_report(m, t, n).total.convert_to<double>() / ref);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace fodgmm
