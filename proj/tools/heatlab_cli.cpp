#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatlab/config.hpp"
#include "heatlab/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace heatlab;

namespace {

constexpr const char* kVersion = "heatlab 1.0.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << text;
}

void write_manifest(const ExperimentConfig& cfg, const fs::path& dir) {
    json m = cfg.to_manifest();
    m["version"] = kVersion;
    m["seed"] = cfg.seed;
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

/// Gnuplot-friendly twin of the norm CSV: whitespace columns, # header.
void write_norm_dat(const SolutionTrajectory& traj, const fs::path& path) {
    std::ostringstream os;
    os << "# t l1 linf t_half_n_linf\n";
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double t = traj.times[j];
        const double li = norm_linf(traj.fields[j]);
        os << fmt(t) << ' ' << fmt(norm_l1(traj.fields[j])) << ' ' << fmt(li) << ' '
           << fmt(std::pow(t, 0.5 * traj.fields[j].spec.dim) * li) << '\n';
    }
    write_text(path, os.str());
}

json classify_to_json(const WellPosednessClass& wc) {
    json j;
    j["classification"] = to_string(wc.classification);
    j["satisfies_I1"] = wc.satisfies_i1;
    j["satisfies_I2"] = wc.satisfies_i2;
    j["satisfies_I3"] = wc.satisfies_i3;
    j["odd"] = wc.odd;
    j["convex_on_positives"] = wc.convex_on_positives;
    j["global_for_small_data"] = wc.global_for_small_data;
    j["citations"] = wc.citations;
    j["diagnostics"] = wc.diagnostics;
    j["verdicts"] = json::object();
    for (const auto& [name, v] : wc.verdicts) {
        j["verdicts"][name] = {{"verdict", to_string(v.verdict)},
                               {"rule", v.rule},
                               {"total", v.total},
                               {"tail_exponent_estimate", v.tail_exponent_estimate}};
    }
    return j;
}

int run_classify(const ExperimentConfig& cfg, const fs::path& dir) {
    const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity, cfg.grid.dim);
    const WellPosednessClass wc = classify(nl, cfg.grid.dim);
    json rep = classify_to_json(wc);
    rep["nonlinearity"] = cfg.nonlinearity;
    rep["dim"] = cfg.grid.dim;
    write_text(dir / "report.json", rep.dump(2) + "\n");
    std::cout << "classification: " << to_string(wc.classification) << "\n";
    return 0;
}

int run_solve(const ExperimentConfig& cfg, const fs::path& dir) {
    const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity, cfg.grid.dim);
    const HeatPropagator prop(cfg.grid);
    const GridField phi = make_initial_data(cfg.initial_data, cfg.grid);
    save_binary(phi, (dir / "initial.bin").string());

    ContinuationOptions opts;
    opts.nodes_per_segment = cfg.time_nodes;
    opts.max_iter = cfg.max_iter;
    const SolutionTrajectory traj =
        continue_maximally(prop, nl, phi, cfg.horizon, cfg.tol, opts);
    traj.write_norm_csv((dir / "norms.csv").string());
    write_norm_dat(traj, dir / "norms.dat");
    save_binary(traj.fields.back(), (dir / "final.bin").string());

    json rep;
    rep["status"] = to_string(traj.status);
    rep["t_max_reached"] = traj.t_max_reached;
    if (traj.status == SolveStatus::BlowUpDetected) rep["detect_time"] = traj.detect_time;
    rep["final_l1"] = norm_l1(traj.fields.back());
    rep["final_linf"] = norm_linf(traj.fields.back());
    write_text(dir / "report.json", rep.dump(2) + "\n");
    std::cout << "solve: " << to_string(traj.status) << " at t = " << traj.t_max_reached
              << "\n";
    return traj.status == SolveStatus::MaxIterations ? 1 : 0;
}

/// Shared fixed-grid solve for the pairwise experiments: both data must
/// live on one time grid, so the run stays inside the first horizon.
SolutionTrajectory fixed_grid_solve(const HeatPropagator& prop, const Nonlinearity& nl,
                                    const GridField& phi, const TimeGrid& grid, double tol,
                                    int max_iter) {
    return monotone_solve(prop, nl, phi, grid, tol, max_iter).upper;
}

TimeGrid common_grid(const Nonlinearity& nl, int dim, const GridField& a, const GridField& b,
                     double horizon_cap, int nodes) {
    const auto env = compute_envelopes(nl, 2.2e12);
    double t_end = horizon_cap;
    for (const GridField* f : {&a, &b}) {
        const double m = norm_l1(*f);
        if (m == 0.0) continue;
        const auto hor = horizon(env, 2.0 * m, dim, nl.positive_only);
        if (!hor.unbounded) t_end = std::min(t_end, 0.9 * hor.t_b);
    }
    return TimeGrid::graded(t_end, nodes);
}

int run_compare(const ExperimentConfig& cfg, const fs::path& dir) {
    if (!cfg.has("initial_data_b"))
        throw std::runtime_error("config: compare needs initial_data_b");
    const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity, cfg.grid.dim);
    const HeatPropagator prop(cfg.grid);
    const GridField phi = make_initial_data(cfg.initial_data, cfg.grid);
    const GridField psi = make_initial_data(cfg.get_string("initial_data_b"), cfg.grid);
    if (!pointwise_leq(phi, psi, 0.0))
        throw std::runtime_error("compare: initial_data must lie below initial_data_b");

    const TimeGrid grid =
        common_grid(nl, cfg.grid.dim, phi, psi, cfg.horizon, cfg.time_nodes);
    const SolutionTrajectory u = fixed_grid_solve(prop, nl, phi, grid, cfg.tol, cfg.max_iter);
    const SolutionTrajectory v = fixed_grid_solve(prop, nl, psi, grid, cfg.tol, cfg.max_iter);
    u.write_norm_csv((dir / "norms_a.csv").string());
    v.write_norm_csv((dir / "norms_b.csv").string());
    write_norm_dat(u, dir / "norms_a.dat");
    write_norm_dat(v, dir / "norms_b.dat");

    const Report rep = verify_comparison(u, v, phi, psi);
    write_text(dir / "report.json", rep.to_json().dump(2) + "\n");
    std::cout << "comparison: " << (rep.pass ? "pass" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

int run_cdep(const ExperimentConfig& cfg, const fs::path& dir) {
    if (!cfg.has("initial_data_b"))
        throw std::runtime_error("config: continuous_dependence needs initial_data_b");
    const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity, cfg.grid.dim);
    const HeatPropagator prop(cfg.grid);
    const GridField phi = make_initial_data(cfg.initial_data, cfg.grid);
    const GridField psi = make_initial_data(cfg.get_string("initial_data_b"), cfg.grid);

    const TimeGrid grid =
        common_grid(nl, cfg.grid.dim, phi, psi, cfg.horizon, cfg.time_nodes);
    const SolutionTrajectory u = fixed_grid_solve(prop, nl, phi, grid, cfg.tol, cfg.max_iter);
    const SolutionTrajectory v = fixed_grid_solve(prop, nl, psi, grid, cfg.tol, cfg.max_iter);

    const auto env = compute_envelopes(nl, 2.2e12);
    ContinuousDependenceBound bound;
    const Report rep = verify_continuous_dependence(u, v, phi, psi, env, cfg.grid.dim, bound,
                                                    cfg.get_double("cdep_tol", 1e-2));
    write_text(dir / "report.json", rep.to_json().dump(2) + "\n");

    std::ostringstream os;
    os << "# t q ratio\n";
    for (std::size_t i = 0; i < bound.q_curve.size(); ++i)
        os << fmt(bound.q_curve[i].first) << ' ' << fmt(bound.q_curve[i].second) << ' '
           << fmt(bound.ratio_series[i].second) << '\n';
    write_text(dir / "dependence.dat", os.str());
    std::cout << "continuous dependence: " << (rep.pass ? "pass" : "FAIL")
              << " (tau = " << bound.tau << ")\n";
    return rep.pass ? 0 : 1;
}

int run_global(const ExperimentConfig& cfg, const fs::path& dir) {
    const Nonlinearity nl = make_nonlinearity(cfg.nonlinearity, cfg.grid.dim);
    const HeatPropagator prop(cfg.grid);
    const GridField phi = make_initial_data(cfg.initial_data, cfg.grid);
    GlobalEnvelopeConfig gc;
    gc.amplification = cfg.get_double("amplification", 2.0);
    gc.smallness = cfg.get_double("smallness", 1e-2);
    gc.horizon = cfg.horizon;
    const Report rep = verify_global_envelope(prop, nl, phi, gc, cfg.tol);
    write_text(dir / "report.json", rep.to_json().dump(2) + "\n");
    std::cout << "global envelope: " << (rep.pass ? "pass" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

int run_sweep(const ExperimentConfig& cfg, const fs::path& dir, int workers) {
    if (!cfg.has("sweep.values"))
        throw std::runtime_error("config: sweep needs sweep.values (comma-separated)");
    const std::string pattern = cfg.get_string("sweep.nonlinearity", cfg.nonlinearity);
    if (pattern.find("%v") == std::string::npos)
        throw std::runtime_error("config: sweep nonlinearity must contain the %v placeholder");

    std::vector<std::string> values;
    {
        std::istringstream in(cfg.get_string("sweep.values"));
        std::string tok;
        while (std::getline(in, tok, ',')) {
            while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front())))
                tok.erase(tok.begin());
            while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back())))
                tok.pop_back();
            if (!tok.empty()) values.push_back(tok);
        }
    }
    if (values.empty()) throw std::runtime_error("config: sweep.values is empty");

    std::vector<json> rows(values.size());
    std::vector<std::string> errors(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1)) {
            std::string text = pattern;
            text.replace(text.find("%v"), 2, values[i]);
            const fs::path sub = dir / ("sweep_" + values[i]);
            try {
                fs::create_directories(sub);
                const Nonlinearity nl = make_nonlinearity(text, cfg.grid.dim);
                const WellPosednessClass wc = classify(nl, cfg.grid.dim);
                json rep = classify_to_json(wc);
                rep["nonlinearity"] = text;
                write_text(sub / "report.json", rep.dump(2) + "\n");
                rows[i] = {{"value", values[i]},
                           {"nonlinearity", text},
                           {"classification", to_string(wc.classification)},
                           {"I1", to_string(wc.verdicts.at("I1").verdict)},
                           {"I2", to_string(wc.verdicts.at("I2").verdict)},
                           {"I3", to_string(wc.verdicts.at("I3").verdict)}};
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(workers, values.size()));
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < values.size(); ++i)
        if (!errors[i].empty())
            throw std::runtime_error("sweep value " + values[i] + ": " + errors[i]);

    std::ostringstream csv;
    csv << "value,nonlinearity,I1,I2,I3,classification\n";
    for (const auto& r : rows)
        csv << r["value"].get<std::string>() << ',' << r["nonlinearity"].get<std::string>()
            << ',' << r["I1"].get<std::string>() << ',' << r["I2"].get<std::string>() << ','
            << r["I3"].get<std::string>() << ',' << r["classification"].get<std::string>()
            << '\n';
    write_text(dir / "table.csv", csv.str());
    json rep;
    rep["rows"] = rows;
    write_text(dir / "report.json", rep.dump(2) + "\n");
    std::cout << "sweep: " << values.size() << " runs\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for semilinear heat flows with integrable data"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed = -1;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    bool dry_run = false;
    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--seed", seed, "seed override");
    app.add_option("--workers", workers, "worker cap for sweeps");
    app.add_flag("--dry-run", dry_run, "validate, print the resolved plan, exit");

    const char* subcommands[] = {"classify", "solve", "compare", "cdep", "global", "sweep"};
    const char* experiments[] = {"classify", "solve",           "compare",
                                 "continuous_dependence", "global_envelope", "sweep"};
    for (const char* name : subcommands) app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = parse_config_file(config_path);
        const std::string sub = app.get_subcommands().front()->get_name();
        for (int i = 0; i < 6; ++i)
            if (sub == subcommands[i]) {
                cfg.experiment = experiments[i];
                cfg.raw["experiment"] = experiments[i];
            }
        if (!out_dir.empty()) {
            cfg.output_dir = out_dir;
            cfg.raw["out"] = out_dir;
        }
        if (seed >= 0) {
            cfg.seed = static_cast<unsigned long>(seed);
            cfg.raw["seed"] = std::to_string(seed);
        }

        if (dry_run) {
            std::cout << "experiment: " << cfg.experiment << "\n";
            for (const auto& [k, v] : cfg.raw) std::cout << "  " << k << " = " << v << "\n";
            return 0;
        }

        const fs::path dir(cfg.output_dir);
        fs::create_directories(dir);
        write_manifest(cfg, dir);

        if (cfg.experiment == "classify") return run_classify(cfg, dir);
        if (cfg.experiment == "solve") return run_solve(cfg, dir);
        if (cfg.experiment == "compare") return run_compare(cfg, dir);
        if (cfg.experiment == "continuous_dependence") return run_cdep(cfg, dir);
        if (cfg.experiment == "global_envelope") return run_global(cfg, dir);
        if (cfg.experiment == "sweep") return run_sweep(cfg, dir, workers);
        std::cerr << "error: unknown experiment " << cfg.experiment << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
