#pragma once

#include <map>
#include <string>

#include "heatlab/grid.hpp"

#include <json.hpp>

namespace heatlab {

/// Key = value experiment description. Lines are `key = value`, blank, or
/// `#` comments. Unknown keys are kept verbatim so subcommands can define
/// their own; known keys are validated on parse.
///
/// Common keys: grid.dim, grid.half_width, grid.points, nonlinearity,
/// initial_data, experiment, tol, max_iter, time_nodes, horizon, seed, out.
struct ExperimentConfig {
    std::map<std::string, std::string> raw;  // resolved key/value pairs

    GridSpec grid;
    std::string nonlinearity;
    std::string initial_data;
    std::string experiment;
    double tol = 1e-6;
    int max_iter = 60;
    int time_nodes = 48;
    double horizon = 1.0;
    unsigned long seed = 0;
    std::string output_dir = ".";

    bool has(const std::string& key) const { return raw.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;

    /// Manifest with every resolved key; from_manifest(to_manifest(c))
    /// round-trips the semantic fields exactly.
    nlohmann::json to_manifest() const;
    static ExperimentConfig from_manifest(const nlohmann::json& manifest);
};

/// Throws std::runtime_error naming the offending line/key on bad input.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Initial-data grammar: signed sum of shape terms, e.g.
///   "gaussian(0.5, 1.0) - 0.25*gaussian(0.2, 0.5, 3.0)".
/// Shapes: gaussian(mass, width[, center...]) with L1 mass `mass`,
/// bump(mass, width[, center...]) compactly supported, and
/// spike(mass[, center...]) putting the whole mass into one cell.
GridField make_initial_data(const std::string& text, const GridSpec& spec);

}  // namespace heatlab
