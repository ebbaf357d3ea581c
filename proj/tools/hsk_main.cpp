// Command-line runner for the scenario registry: list scenarios, run one
// configuration, sweep a parameter, or compare a scenario against its
// reference counterpart.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hsk/closeness.hpp"
#include "hsk/core.hpp"
#include "hsk/report_io.hpp"
#include "hsk/scenarios.hpp"

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string scenario;
    std::map<std::string, double> overrides;
    // Solver fields default to the scenario's recommended config.
    std::optional<double> h, t_max, tol_mem, tol_event;
    std::optional<int> j_max, record_stride;
    std::optional<std::string> policy;
    std::optional<std::uint64_t> seed;
    bool write_arc = true;
    bool write_report = true;
    std::string sweep_param;
    std::vector<double> sweep_values;
    double tau = 10.0;
    std::vector<double> eps_grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value '" + v + "' for key '" + key + "'");
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "scenario.name") {
            cfg.scenario = value;
        } else if (key.rfind("scenario.param.", 0) == 0) {
            cfg.overrides[key.substr(15)] = parse_double(key, value);
        } else if (key == "solver.h") {
            cfg.h = parse_double(key, value);
        } else if (key == "solver.t_max") {
            cfg.t_max = parse_double(key, value);
        } else if (key == "solver.j_max") {
            cfg.j_max = static_cast<int>(parse_double(key, value));
        } else if (key == "solver.record_stride") {
            cfg.record_stride = static_cast<int>(parse_double(key, value));
        } else if (key == "solver.tol_mem") {
            cfg.tol_mem = parse_double(key, value);
        } else if (key == "solver.tol_event") {
            cfg.tol_event = parse_double(key, value);
        } else if (key == "solver.policy") {
            if (value != "jump_first" && value != "flow_first")
                throw ConfigError("solver.policy must be jump_first or flow_first");
            cfg.policy = value;
        } else if (key == "solver.seed") {
            cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
        } else if (key == "output.arc_csv") {
            cfg.write_arc = parse_double(key, value) != 0.0;
        } else if (key == "output.report_json") {
            cfg.write_report = parse_double(key, value) != 0.0;
        } else if (key == "sweep.param") {
            cfg.sweep_param = value;
        } else if (key == "sweep.values") {
            cfg.sweep_values = parse_list(key, value);
        } else if (key == "compare.tau") {
            cfg.tau = parse_double(key, value);
        } else if (key == "compare.eps_grid") {
            cfg.eps_grid = parse_list(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    if (cfg.scenario.empty()) throw ConfigError("config is missing scenario.name");
    for (double v : cfg.sweep_values)
        if (!std::isfinite(v)) throw ConfigError("sweep.values contains a non-finite entry");
    return cfg;
}

hsk::SolverConfig solver_config(const RunConfig& cfg, const hsk::BuiltScenario& built,
                                std::optional<std::uint64_t> seed_flag) {
    hsk::SolverConfig sc = built.config;
    if (cfg.h) sc.h = *cfg.h;
    if (cfg.t_max) sc.t_max = *cfg.t_max;
    if (cfg.j_max) sc.j_max = *cfg.j_max;
    if (cfg.record_stride) sc.record_stride = *cfg.record_stride;
    if (cfg.tol_mem) sc.tol_mem = *cfg.tol_mem;
    if (cfg.tol_event) sc.tol_event = *cfg.tol_event;
    if (cfg.policy)
        sc.policy = *cfg.policy == "flow_first" ? hsk::JumpPolicy::FlowFirst
                                                : hsk::JumpPolicy::JumpFirst;
    if (cfg.seed) sc.rng_seed = *cfg.seed;
    if (seed_flag) sc.rng_seed = *seed_flag;
    return sc;
}

int exit_code(hsk::Termination term) {
    switch (term) {
        case hsk::Termination::HorizonTime:
        case hsk::Termination::HorizonJumps:
            return 0;
        case hsk::Termination::FlowSetExit:
            return 2;
        case hsk::Termination::NoDynamicsFromPoint:
            return 3;
    }
    return 1;
}

std::string out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("HSK_OUT_DIR")) return env;
    return ".";
}

int cmd_list() {
    for (const auto& info : hsk::list_scenarios()) {
        std::cout << info.name << " — " << info.anchor << "\n";
        for (const auto& [key, param] : info.params)
            std::cout << "    " << key << " = " << param.value << " [" << param.origin
                      << (param.note.empty() ? "" : ": " + param.note) << "]\n";
    }
    return 0;
}

struct RunResult {
    hsk::Solution solution;
    hsk::BuiltScenario built;
};

RunResult run_once(const RunConfig& cfg, const std::map<std::string, double>& overrides,
                   std::optional<std::uint64_t> seed_flag) {
    RunResult r{.solution = {}, .built = hsk::build_scenario(cfg.scenario, overrides)};
    const hsk::SolverConfig sc = solver_config(cfg, r.built, seed_flag);
    r.solution = hsk::simulate(r.built.system, r.built.x0, sc);
    return r;
}

int cmd_run(const RunConfig& cfg, const std::string& out_flag,
            std::optional<std::uint64_t> seed_flag) {
    RunResult r = run_once(cfg, cfg.overrides, seed_flag);
    const fs::path dir = out_dir(out_flag);
    fs::create_directories(dir);
    if (cfg.write_arc)
        hsk::write_arc_csv((dir / (cfg.scenario + "_arc.csv")).string(), r.solution.arc,
                           r.built.state_names);
    if (cfg.write_report) {
        std::ofstream meta(dir / (cfg.scenario + "_meta.json"));
        meta << hsk::metadata_json(cfg.scenario, r.built.params,
                                   hsk::to_string(r.solution.termination),
                                   r.solution.jumps, r.solution.flow_time);
    }
    std::cout << cfg.scenario << ": " << hsk::to_string(r.solution.termination) << ", "
              << r.solution.jumps << " jumps, flow time " << r.solution.flow_time << "\n";
    return exit_code(r.solution.termination);
}

double state_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_flag,
              std::optional<std::uint64_t> seed_flag, int jobs) {
    if (cfg.sweep_param.empty() || cfg.sweep_values.empty()) {
        std::cerr << "error: sweep requires sweep.param and a non-empty sweep.values\n";
        return 1;
    }
    bool has_reference = true;
    try {
        hsk::reference_mask(cfg.scenario);
    } catch (const hsk::NoCounterpart&) {
        has_reference = false;
    }
    const fs::path dir = out_dir(out_flag);
    fs::create_directories(dir);

    struct Row {
        double value = 0.0;
        std::string termination;
        int jumps = 0;
        double flow_time = 0.0;
        double norm_ratio = 0.0;
        bool diverged = false;
        double min_eps = -1.0;  // -1: no counterpart or grid exceeded
        int code = 1;
        std::string error;
    };
    std::vector<Row> rows(cfg.sweep_values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.sweep_values.size()) return;
            Row& row = rows[i];
            row.value = cfg.sweep_values[i];
            try {
                auto overrides = cfg.overrides;
                overrides[cfg.sweep_param] = row.value;
                RunResult r = run_once(cfg, overrides, seed_flag);
                row.termination = hsk::to_string(r.solution.termination);
                row.jumps = r.solution.jumps;
                row.flow_time = r.solution.flow_time;
                row.code = exit_code(r.solution.termination);
                const double n0 = state_norm(r.built.x0);
                double worst = 0.0;
                for (const auto& iv : r.solution.arc.intervals())
                    for (std::size_t k = 0; k < iv.t.size(); ++k)
                        worst = std::max(worst, state_norm(r.solution.arc.state(iv, k)));
                row.norm_ratio = n0 > 0.0 ? worst / n0 : worst;
                row.diverged = row.norm_ratio > 10.0;
                if (has_reference) {
                    hsk::HybridArc ref;
                    try {
                        ref = hsk::reference_arc(cfg.scenario, overrides);
                    } catch (const hsk::InvalidOverride&) {
                        // The counterpart need not share the swept parameter.
                        ref = hsk::reference_arc(cfg.scenario, cfg.overrides);
                    }
                    const auto rep = hsk::min_epsilon(r.solution.arc, ref, cfg.tau,
                                                      cfg.eps_grid,
                                                      hsk::reference_mask(cfg.scenario));
                    if (rep.found) row.min_eps = rep.min_eps;
                }
                hsk::write_arc_csv(
                    (dir / (cfg.scenario + "_" + cfg.sweep_param + "_" +
                            std::to_string(i) + "_arc.csv")).string(),
                    r.solution.arc, r.built.state_names);
            } catch (const std::exception& e) {
                row.error = e.what();
                row.code = 1;
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(cfg.sweep_values.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ofstream summary(dir / (cfg.scenario + "_sweep.csv"));
    summary << "value,termination,jumps,flow_time,norm_ratio,diverged,min_eps,error\n";
    int worst_code = 0;
    for (const Row& row : rows) {
        summary << row.value << ',' << row.termination << ',' << row.jumps << ','
                << row.flow_time << ',' << row.norm_ratio << ','
                << (row.diverged ? 1 : 0) << ',';
        if (row.min_eps >= 0.0) summary << row.min_eps;
        summary << ',' << row.error << '\n';
        worst_code = std::max(worst_code, row.code);
        std::cout << cfg.sweep_param << " = " << row.value << ": "
                  << (row.error.empty() ? row.termination : row.error) << "\n";
    }
    return worst_code;
}

int cmd_compare(const RunConfig& cfg, const std::string& out_flag,
                std::optional<std::uint64_t> seed_flag) {
    RunResult r = run_once(cfg, cfg.overrides, seed_flag);
    const hsk::HybridArc ref = hsk::reference_arc(cfg.scenario, cfg.overrides);
    const auto report = hsk::min_epsilon(r.solution.arc, ref, cfg.tau, cfg.eps_grid,
                                         hsk::reference_mask(cfg.scenario));
    const fs::path dir = out_dir(out_flag);
    fs::create_directories(dir);
    std::ofstream out(dir / (cfg.scenario + "_closeness.json"));
    out << hsk::closeness_report_json(report);
    if (report.found)
        std::cout << cfg.scenario << ": min_eps = " << report.min_eps << " at tau = "
                  << report.tau << "\n";
    else
        std::cout << cfg.scenario << ": closeness exceeds the epsilon grid\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid set-seeking scenario runner"};
    app.require_subcommand(1);

    std::string config_path, out_flag;
    int jobs = 1;
    std::optional<std::uint64_t> seed_flag;
    std::uint64_t seed_value = 0;

    auto* list_cmd = app.add_subcommand("list", "List registered scenarios");
    auto* run_cmd = app.add_subcommand("run", "Run one scenario configuration");
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
    auto* compare_cmd =
        app.add_subcommand("compare", "Compare a scenario against its counterpart");
    for (auto* cmd : {run_cmd, sweep_cmd, compare_cmd}) {
        cmd->add_option("--config", config_path, "Flat dotted-key config file")->required();
        cmd->add_option("--out", out_flag, "Output directory (default $HSK_OUT_DIR or .)");
        auto* seed_opt = cmd->add_option("--seed", seed_value, "Solver RNG seed");
        cmd->callback([&, seed_opt]() {
            if (seed_opt->count() > 0) seed_flag = seed_value;
        });
    }
    sweep_cmd->add_option("--jobs", jobs, "Parallel sweep workers")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) return cmd_list();
        const RunConfig cfg = parse_config(config_path);
        if (run_cmd->parsed()) return cmd_run(cfg, out_flag, seed_flag);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, out_flag, seed_flag, jobs);
        if (compare_cmd->parsed()) return cmd_compare(cfg, out_flag, seed_flag);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const hsk::UnknownScenario& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hsk::InvalidOverride& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hsk::NoCounterpart& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
