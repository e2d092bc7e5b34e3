// Command-line front end: simulate panels, estimate delta, evaluate the flop
// model and run the timing benchmark.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fodgmm/bench.hpp"
#include "fodgmm/dgp.hpp"
#include "fodgmm/errors.hpp"
#include "fodgmm/estimator.hpp"
#include "fodgmm/flop_model.hpp"
#include "fodgmm/instruments.hpp"
#include "fodgmm/panel_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fodgmm;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kParse = 3, kSingular = 4, kDegenerate = 5 };

/// Relative output paths land under $FODGMM_OUT_DIR when it is set.
fs::path output_path(const std::string& p) {
    fs::path path(p);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("FODGMM_OUT_DIR"); dir && *dir) return fs::path(dir) / path;
    }
    return path;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Method parse_method(const std::string& s) {
    if (s == "fd") return Method::FD;
    if (s == "fod") return Method::FOD;
    throw std::invalid_argument("unknown method '" + s + "' (expected fd or fod)");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

std::size_t parse_size(const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-') {
        throw std::invalid_argument("not a non-negative integer: '" + s + "'");
    }
    return static_cast<std::size_t>(v);
}

// "5,10,...,50" continues the step of the two values before the ellipsis;
// "100,...,500" steps by the single leading value.
std::vector<std::size_t> parse_grid(const std::string& text) {
    std::vector<std::size_t> out;
    const auto items = split(text, ',');
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (items[k] != "...") {
            out.push_back(parse_size(items[k]));
            continue;
        }
        if (out.empty() || k + 1 >= items.size() || items[k + 1] == "...") {
            throw std::invalid_argument("grid '" + text + "': '...' needs values on both sides");
        }
        const std::size_t last = parse_size(items[k + 1]);
        const std::size_t step = out.size() >= 2 ? out.back() - out[out.size() - 2] : out.back();
        if (out.size() >= 2 && out.back() <= out[out.size() - 2]) {
            throw std::invalid_argument("grid '" + text + "': values before '...' must increase");
        }
        if (step == 0 || last < out.back() || (last - out.back()) % step != 0) {
            throw std::invalid_argument("grid '" + text + "': end value is not on the step");
        }
        for (std::size_t v = out.back() + step; v < last; v += step) out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("grid '" + text + "' is empty");
    return out;
}

// A JSON config file becomes flags placed ahead of the command line, so
// explicit flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::vector<std::string> from_file;
    std::size_t insert_at = 0;
    for (std::size_t k = 0; k < args.size(); ++k) {
        const std::string& a = args[k];
        std::string path;
        if (a == "--config") {
            if (k + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file name");
            path = args[++k];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        } else {
            out.push_back(a);
            continue;
        }
        if (insert_at == 0) insert_at = out.size();
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file " + path);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ParseError(0, "config " + path + ": " + e.what());
        }
        if (!j.is_object()) throw ParseError(0, "config " + path + ": expected a JSON object");
        for (const auto& [key, value] : j.items()) {
            const std::string flag = "--" + key;
            if (value.is_boolean()) {
                if (value.get<bool>()) from_file.push_back(flag);
            } else if (value.is_array()) {
                std::string joined;
                for (const auto& v : value) {
                    if (!joined.empty()) joined += ',';
                    joined += v.is_string() ? v.get<std::string>() : v.dump();
                }
                from_file.push_back(flag);
                from_file.push_back(joined);
            } else {
                from_file.push_back(flag);
                from_file.push_back(value.is_string() ? value.get<std::string>() : value.dump());
            }
        }
    }
    if (from_file.empty()) return out;
    // Config flags belong to the subcommand, which is the first argument
    // after the program name.
    if (insert_at < 2) insert_at = std::min<std::size_t>(2, out.size());
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(insert_at), from_file.begin(), from_file.end());
    return out;
}

json diagnostics_json(const Estimate& e) {
    return {{"delta_hat", e.delta_hat},
            {"min_pivot_ratio", e.diagnostics.min_pivot_ratio},
            {"numerator", e.diagnostics.numerator},
            {"denominator", e.diagnostics.denominator},
            {"seconds", e.diagnostics.seconds}};
}

struct SimulateArgs {
    DgpConfig config;
    std::string out;
};

struct EstimateArgs {
    std::string in;
    std::string method = "both";
    std::string out;
    bool generalized = false;
};

struct FlopsArgs {
    std::uint64_t periods = 5;
    std::uint64_t units = 100;
    std::string method = "fd";
    std::string stage;
    std::string exponent;
    std::string format = "json";
    std::string out;
};

struct BenchArgs {
    std::string periods_grid = "5,10,...,50";
    std::string units_grid = "100,...,500";
    std::size_t replications = 100;
    std::string methods = "fd,fod";
    std::size_t warmup = 3;
    std::uint64_t seed = 2018;
    double delta = 0.5;
    std::string out_dir = "bench_out";
    bool svg = false;
    bool parallel_cells = false;
};

int cmd_simulate(const SimulateArgs& a) {
    const auto panel = simulate(a.config);
    if (a.out.empty() || a.out == "-") {
        write_panel_csv(std::cout, panel);
    } else {
        const auto path = output_path(a.out);
        std::ostringstream buf;
        write_panel_csv(buf, panel);
        write_text(path, buf.str());
        std::cerr << "wrote " << panel.units() << " units x " << (panel.periods() + 1)
                  << " periods to " << path.string() << "\n";
    }
    return kOk;
}

int cmd_estimate(const EstimateArgs& a) {
    const auto panel = read_panel_csv(fs::path(a.in));
    EstimateOptions options;
    if (a.generalized) options.inverse = InverseKind::Generalized;

    json report{{"schema_version", 1},
                {"input", a.in},
                {"T", panel.periods()},
                {"N", panel.units()},
                {"m", moment_count(panel.periods())},
                {"inverse", a.generalized ? "generalized" : "lu"}};
    if (a.method != "both") parse_method(a.method);
    std::optional<Estimate> fd, fod;
    if (a.method == "fd" || a.method == "both") fd = estimate(panel, Method::FD, options);
    if (a.method == "fod" || a.method == "both") fod = estimate(panel, Method::FOD, options);
    if (fd) {
        report["delta_fd"] = fd->delta_hat;
        report["fd"] = diagnostics_json(*fd);
    }
    if (fod) {
        report["delta_fod"] = fod->delta_hat;
        report["fod"] = diagnostics_json(*fod);
    }
    if (fd && fod) report["abs_diff"] = std::abs(fd->delta_hat - fod->delta_hat);

    const std::string text = report.dump(2) + "\n";
    if (a.out.empty() || a.out == "-") {
        std::cout << text;
    } else {
        write_text(output_path(a.out), text);
    }
    return kOk;
}

int cmd_flops(const FlopsArgs& a) {
    const Method method = parse_method(a.method);
    std::string text;
    if (!a.exponent.empty()) {
        GrowthAxis axis;
        if (a.exponent == "in_T") {
            axis = GrowthAxis::T;
        } else if (a.exponent == "in_N") {
            axis = GrowthAxis::N;
        } else {
            throw std::invalid_argument("--exponent must be in_T or in_N");
        }
        const double g = growth_exponent(method, a.periods, a.units, axis);
        if (a.format == "json") {
            text = json{{"schema_version", 1}, {"method", to_string(method)}, {"T", a.periods},
                        {"N", a.units}, {"axis", a.exponent}, {"exponent", g}}
                       .dump(2) + "\n";
        } else {
            text = format_double(g) + "\n";
        }
    } else {
        const auto report = flop_report(method, a.periods, a.units);
        if (!a.stage.empty()) {
            text = report.stage(a.stage).str() + "\n";
        } else if (a.format == "json") {
            text = to_json(report).dump(2) + "\n";
        } else {
            text = "stage,flops\n";
            for (const auto& s : report.stages) text += "\"" + s.name + "\"," + s.flops.str() + "\n";
            text += "total," + report.total.str() + "\n";
        }
    }
    if (a.out.empty() || a.out == "-") {
        std::cout << text;
    } else {
        write_text(output_path(a.out), text);
    }
    return kOk;
}

int cmd_bench(const BenchArgs& a) {
    BenchPlan plan;
    plan.periods_grid = parse_grid(a.periods_grid);
    plan.units_grid = parse_grid(a.units_grid);
    plan.replications = a.replications;
    plan.methods.clear();
    for (const auto& m : split(a.methods, ',')) plan.methods.push_back(parse_method(m));
    plan.warmup = a.warmup;
    plan.seed = a.seed;
    plan.delta = a.delta;
    plan.parallel_cells = a.parallel_cells;
    plan.validate();

    const auto result = run(plan);
    const auto dir = output_path(a.out_dir);
    write_reports(result, dir, a.svg);

    std::cout << table1_csv(table1(result));
    int failed = 0;
    for (const auto& c : result.cells) {
        if (c.status == CellStatus::Ok) continue;
        std::cerr << to_string(c.method) << " T=" << c.periods << " N=" << c.units << ": "
                  << to_string(c.status) << " (" << c.reason << ")\n";
        if (c.status == CellStatus::Failed) ++failed;
    }
    if (result.equivalence_failures > 0) {
        std::cerr << "error: " << result.equivalence_failures
                  << " replications where FD and FOD disagree (max gap "
                  << result.max_equivalence_gap << ")\n";
    }
    std::cerr << "reports written to " << dir.string() << "\n";
    return failed > 0 || result.equivalence_failures > 0 ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-step GMM for AR(1) panels: FD versus forward orthogonal deviations"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate an AR(1) panel to CSV");
    simulate_cmd->add_option("--delta", sim.config.delta, "Autoregressive coefficient")->capture_default_str();
    simulate_cmd->add_option("--T", sim.config.periods, "Periods after y_i0")->capture_default_str();
    simulate_cmd->add_option("--N", sim.config.units, "Number of units")->capture_default_str();
    simulate_cmd->add_option("--seed", sim.config.seed, "Random seed")->capture_default_str();
    simulate_cmd->add_option("--burn-in", sim.config.burn_in, "Discarded start-up periods")->capture_default_str();
    simulate_cmd->add_option("--eta-sd", sim.config.eta_sd, "Fixed-effect standard deviation")->capture_default_str();
    simulate_cmd->add_option("--v-sd", sim.config.v_sd, "Shock standard deviation")->capture_default_str();
    simulate_cmd->add_option("--out", sim.out, "Output CSV (stdout when omitted)");

    EstimateArgs est;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate delta from a panel CSV");
    estimate_cmd->add_option("--in", est.in, "Panel CSV (unit,time,y)")->required();
    estimate_cmd->add_option("--method", est.method, "fd, fod or both")
        ->check(CLI::IsMember({"fd", "fod", "both"}))
        ->capture_default_str();
    estimate_cmd->add_option("--out", est.out, "Report JSON (stdout when omitted)");
    estimate_cmd->add_flag("--generalized-inverse", est.generalized,
                           "Use a Moore-Penrose inverse for rank-deficient weight matrices");

    FlopsArgs fl;
    auto* flops_cmd = app.add_subcommand("flops", "Evaluate the exact flop model");
    flops_cmd->add_option("--T", fl.periods, "Periods")->capture_default_str();
    flops_cmd->add_option("--N", fl.units, "Units")->capture_default_str();
    flops_cmd->add_option("--method", fl.method, "fd or fod")
        ->check(CLI::IsMember({"fd", "fod"}))
        ->capture_default_str();
    flops_cmd->add_option("--stage", fl.stage, "Print a single stage count");
    flops_cmd->add_option("--exponent", fl.exponent, "Local growth exponent: in_T or in_N")
        ->check(CLI::IsMember({"in_T", "in_N"}));
    flops_cmd->add_option("--format", fl.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    flops_cmd->add_option("--out", fl.out, "Output file (stdout when omitted)");

    BenchArgs bn;
    auto* bench_cmd = app.add_subcommand("bench", "Time FD against FOD over a (T, N) grid");
    bench_cmd->add_option("--T-grid", bn.periods_grid, "Periods, e.g. 5,10,...,50")->capture_default_str();
    bench_cmd->add_option("--N-grid", bn.units_grid, "Units, e.g. 100,...,500")->capture_default_str();
    bench_cmd->add_option("--replications", bn.replications, "Timed samples per cell")->capture_default_str();
    bench_cmd->add_option("--methods", bn.methods, "Comma-separated: fd,fod")->capture_default_str();
    bench_cmd->add_option("--warmup", bn.warmup, "Untimed runs per cell")->capture_default_str();
    bench_cmd->add_option("--seed", bn.seed, "Base seed")->capture_default_str();
    bench_cmd->add_option("--delta", bn.delta, "True delta")->capture_default_str();
    bench_cmd->add_option("--out-dir", bn.out_dir, "Report directory")->capture_default_str();
    bench_cmd->add_flag("--svg", bn.svg, "Also draw fig1.svg and fig2.svg");
    bench_cmd->add_flag("--parallel-cells", bn.parallel_cells,
                        "Run cells concurrently; timings are marked not comparable");

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = expand_config(args);
        std::vector<const char*> cargs;
        for (const auto& s : args) cargs.push_back(s.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ParseError& e) {
        std::cerr << "error (parse): " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*simulate_cmd) return cmd_simulate(sim);
        if (*estimate_cmd) return cmd_estimate(est);
        if (*flops_cmd) return cmd_flops(fl);
        if (*bench_cmd) return cmd_bench(bn);
    } catch (const ParseError& e) {
        std::cerr << "error (parse): " << e.what() << "\n";
        return kParse;
    } catch (const SingularMatrixError& e) {
        std::cerr << "error (singular " << e.label() << ", "
                  << (e.label() == std::string("A_N") ? "m = " : "t = ") << e.index()
                  << "): " << e.what() << "\n";
        return kSingular;
    } catch (const DegenerateEstimateError& e) {
        std::cerr << "error (degenerate): " << e.what() << "\n";
        return kDegenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (invalid argument): " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
