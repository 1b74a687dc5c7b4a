// bankopt command-line driver: solve single instances, run parameter sweeps,
// simulate optimal paths.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "bankopt/errors.hpp"
#include "bankopt/json_io.hpp"

using namespace bankopt;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string format = "json";
};

ModelParams load_params(const CommonOpts& opts) {
    ModelParams p;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw ConfigError("cannot open config: " + opts.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        p = params_from_json(j);
    }
    for (const auto& o : opts.overrides) apply_override(p, o);
    return p;
}

void write_output(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path);
    if (!out) throw ConfigError("cannot open output: " + opts.out_path);
    out << text;
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Sweeps over bankruptcy-side parameters (alpha, F, eta, d, x0) reuse the
// post-bankruptcy solve; key on the fields that enter it.
struct PbCache {
    std::map<std::string, PbSolution> cache;
    std::mutex mu;

    static std::string key(const ModelParams& p) {
        std::ostringstream os;
        os.precision(17);
        os << p.delta << '|' << p.k << '|' << p.r << '|' << p.mu << '|' << p.sigma
           << '|' << p.gamma << '|' << p.w << '|' << p.L_bar << '|' << p.L;
        return os.str();
    }

    PbSolution get(const ModelParams& p, const DerivedConstants& dc) {
        const std::string k = key(p);
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = cache.find(k);
            if (it != cache.end()) return it->second;
        }
        PbSolution pb = solve_pb(p, dc);
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(k, pb);
        return pb;
    }
};

int cmd_solve(const CommonOpts& opts) {
    const ModelParams p = load_params(opts);
    const auto rep = validate(p);
    if (!rep.solvable()) {
        std::cerr << "invalid parameters: " << rep.summary() << "\n";
        return 1;
    }
    const auto dc = derive(p);
    PrimalSolution sol;
    try {
        sol = solve_primal(p, dc, solve_pb(p, dc));
    } catch (const NoCaseAdmissible& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    const auto j = solution_report(sol);
    if (opts.format == "json") {
        write_output(opts, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        std::vector<std::string> keys, vals;
        const auto flat = j.flatten();
        for (auto it = flat.begin(); it != flat.end(); ++it) {
            keys.push_back(it.key());
            vals.push_back(it.value().is_number()
                               ? fmt_num(it.value().get<double>())
                               : it.value().dump());
        }
        for (size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
        os << "\n";
        for (size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << vals[i];
        os << "\n";
        write_output(opts, os.str());
    }
    return 0;
}

struct GridSpec {
    std::string name;
    double start = 0, stop = 0;
    int count = 0;
    bool log_spacing = false;

    double at(int i) const {
        if (count == 1) return start;
        const double t = double(i) / (count - 1);
        if (log_spacing) return start * std::pow(stop / start, t);
        return start + (stop - start) * t;
    }
};

GridSpec parse_grid(const std::string& name, const std::string& grid, bool log_spacing) {
    GridSpec g;
    g.name = name;
    g.log_spacing = log_spacing;
    if (std::sscanf(grid.c_str(), "%lf:%lf:%d", &g.start, &g.stop, &g.count) != 3 ||
        g.count < 2)
        throw ConfigError("grid must be start:stop:count with count >= 2, got " + grid);
    return g;
}

int cmd_sweep(const CommonOpts& opts, const GridSpec& g1,
              const std::optional<GridSpec>& g2) {
    const ModelParams base = load_params(opts);

    struct Row {
        std::string status = "ok";
        double v1 = 0, v2 = 0;
        std::string case_tag;
        double z_bar = 0, z_hat = 0, lambda_star = 0, V = 0;
        double x_bar = 0, x_hat = 0, x_tilde = 0;
    };
    const int n1 = g1.count, n2 = g2 ? g2->count : 1;
    std::vector<Row> rows(size_t(n1) * n2);
    PbCache pb_cache;

    auto solve_point = [&](size_t idx) {
        Row& row = rows[idx];
        ModelParams p = base;
        row.v1 = g1.at(int(idx / n2));
        apply_override(p, g1.name + "=" + fmt_num(row.v1));
        if (g2) {
            row.v2 = g2->at(int(idx % n2));
            apply_override(p, g2->name + "=" + fmt_num(row.v2));
        }
        const auto rep = validate(p);
        if (!rep.solvable()) {
            row.status = "skipped";
            return;
        }
        try {
            const auto dc = derive(p);
            const auto pb = pb_cache.get(p, dc);
            const auto sol = solve_primal(p, dc, pb);
            const auto th = thresholds(sol);
            const auto m = invert_multiplier(p.x0, sol);
            row.case_tag = to_string(sol.case_tag);
            row.z_bar = sol.z_bar;
            row.z_hat = sol.z_hat;
            row.lambda_star = m.lambda_star;
            row.V = value_at(p.x0, sol);
            row.x_bar = th.x_bar;
            row.x_hat = th.x_hat;
            row.x_tilde = th.x_tilde;
        } catch (const NoCaseAdmissible&) {
            row.status = "no_case";
        } catch (const std::exception&) {
            row.status = "error";
        }
    };

    const size_t total = rows.size();
    unsigned hw = std::thread::hardware_concurrency();
    const size_t n_threads = std::max(1u, std::min<unsigned>(hw, total));
    std::vector<std::thread> pool;
    std::size_t chunk = (total + n_threads - 1) / n_threads;
    for (size_t t = 0; t < n_threads; ++t) {
        const size_t lo = t * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (size_t i = lo; i < hi; ++i) solve_point(i);
        });
    }
    for (auto& th : pool) th.join();

    std::ostringstream os;
    os << "# bankopt sweep schema_version=" << kSchemaVersion << "\n";
    os << g1.name;
    if (g2) os << "," << g2->name;
    os << ",case,z_bar,z_hat,lambda_star,V,x_bar,x_hat,x_tilde,status\n";
    for (const auto& row : rows) {
        os << fmt_num(row.v1);
        if (g2) os << "," << fmt_num(row.v2);
        if (row.status == "ok") {
            os << ",\"" << row.case_tag << "\"," << fmt_num(row.z_bar) << ","
               << fmt_num(row.z_hat) << "," << fmt_num(row.lambda_star) << ","
               << fmt_num(row.V) << "," << fmt_num(row.x_bar) << ","
               << fmt_num(row.x_hat) << ","
               << (std::isfinite(row.x_tilde) ? fmt_num(row.x_tilde) : "") << ",ok\n";
        } else {
            os << ",,,,,,,,," << row.status << "\n";
        }
    }
    write_output(opts, os.str());
    return 0;
}

int cmd_simulate(const CommonOpts& opts, SimConfig cfg, std::size_t budget_paths,
                 const std::string& backend_name) {
    const ModelParams p = load_params(opts);
    const auto rep = validate(p);
    if (!rep.solvable()) {
        std::cerr << "invalid parameters: " << rep.summary() << "\n";
        return 1;
    }
    if (backend_name == "scalar") cfg.backend = kernels::Backend::scalar;
    else if (backend_name == "avx2") cfg.backend = kernels::Backend::avx2;

    const auto dc = derive(p);
    PrimalSolution sol;
    try {
        sol = solve_primal(p, dc, solve_pb(p, dc));
    } catch (const NoCaseAdmissible& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    const auto paths = simulate(sol, cfg);

    std::ostringstream csv;
    csv << "# bankopt paths schema_version=" << kSchemaVersion << "\n";
    csv << "path,t,Z,X,c,l,pi,regime\n";
    for (size_t ip = 0; ip < paths.size(); ++ip) {
        const auto& pr = paths[ip];
        for (size_t i = 0; i < pr.times.size(); ++i) {
            csv << ip << "," << fmt_num(pr.times[i]) << "," << fmt_num(pr.z_path[i])
                << "," << fmt_num(pr.x_path[i]) << "," << fmt_num(pr.c_path[i]) << ","
                << fmt_num(pr.l_path[i]) << "," << fmt_num(pr.pi_path[i]) << ","
                << int(pr.regime[i]) << "\n";
        }
    }

    // tau statistics + budget identity summary
    size_t stopped = 0;
    double tsum = 0, tmin = HUGE_VAL, tmax = 0;
    for (const auto& pr : paths)
        if (pr.stopped()) {
            ++stopped;
            tsum += pr.tau;
            tmin = std::min(tmin, pr.tau);
            tmax = std::max(tmax, pr.tau);
        }
    nlohmann::json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["n_paths"] = cfg.n_paths;
    summary["dt"] = cfg.dt;
    summary["horizon"] = cfg.horizon;
    summary["seed"] = cfg.seed;
    summary["tau"] = {{"fraction_stopped", double(stopped) / paths.size()},
                      {"mean", stopped ? tsum / stopped : 0.0},
                      {"min", stopped ? tmin : 0.0},
                      {"max", stopped ? tmax : 0.0}};
    SimConfig bcfg = cfg;
    bcfg.n_paths = budget_paths ? budget_paths : cfg.n_paths;
    summary["budget"] = budget_to_json(budget_check(sol, bcfg));
    summary["backend"] = kernels::to_string(kernels::resolve(cfg.backend));

    if (opts.out_path.empty()) {
        std::cout << csv.str();
        std::cout << summary.dump(2) << "\n";
    } else {
        std::ofstream pcsv(opts.out_path + ".paths.csv");
        if (!pcsv) throw ConfigError("cannot open " + opts.out_path + ".paths.csv");
        pcsv << csv.str();
        std::ofstream js(opts.out_path + ".summary.json");
        if (!js) throw ConfigError("cannot open " + opts.out_path + ".summary.json");
        js << summary.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-analytical solver for the optimal consumption-portfolio-"
                 "leisure problem with bankruptcy"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON parameter file");
        sub->add_option("--param", opts.overrides, "key=value override (repeatable)");
        sub->add_option("--out", opts.out_path, "output path (default stdout)");
        sub->add_option("--format", opts.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* s_solve = app.add_subcommand("solve", "solve one instance, print report");
    add_common(s_solve);

    auto* s_sweep = app.add_subcommand("sweep", "sweep one or two parameters");
    add_common(s_sweep);
    std::string sweep1, grid1, sweep2, grid2;
    bool log1 = false, log2 = false;
    s_sweep->add_option("--sweep", sweep1, "swept parameter name")->required();
    s_sweep->add_option("--grid", grid1, "start:stop:count")->required();
    s_sweep->add_flag("--log", log1, "log-spaced grid");
    s_sweep->add_option("--sweep2", sweep2, "second swept parameter");
    s_sweep->add_option("--grid2", grid2, "second grid start:stop:count");
    s_sweep->add_flag("--log2", log2, "log-spaced second grid");

    auto* s_sim = app.add_subcommand("simulate", "simulate optimal paths");
    add_common(s_sim);
    SimConfig cfg;
    std::size_t budget_paths = 0;
    std::string backend = "auto";
    s_sim->add_option("--n-paths", cfg.n_paths, "number of paths");
    s_sim->add_option("--dt", cfg.dt, "time step");
    s_sim->add_option("--horizon", cfg.horizon, "simulated horizon");
    s_sim->add_option("--seed", cfg.seed, "RNG seed");
    s_sim->add_option("--stride", cfg.record_stride, "record every k-th step");
    s_sim->add_option("--threads", cfg.n_threads, "worker threads (0 = auto)");
    s_sim->add_option("--budget-paths", budget_paths,
                      "paths for the budget check (default n-paths)");
    s_sim->add_option("--backend", backend, "scalar|avx2|auto")
        ->check(CLI::IsMember({"scalar", "avx2", "auto"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (s_solve->parsed()) return cmd_solve(opts);
        if (s_sweep->parsed()) {
            const GridSpec g1 = parse_grid(sweep1, grid1, log1);
            std::optional<GridSpec> g2;
            if (!sweep2.empty()) g2 = parse_grid(sweep2, grid2, log2);
            return cmd_sweep(opts, g1, g2);
        }
        if (s_sim->parsed()) return cmd_simulate(opts, cfg, budget_paths, backend);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const InvalidParams& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
