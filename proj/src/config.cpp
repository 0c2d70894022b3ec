#include "heatlab/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace heatlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw std::runtime_error("config: key '" + key + "' is not a number: " + value);
    return v;
}

long to_long(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw std::runtime_error("config: key '" + key + "' is not an integer: " + value);
    return v;
}

const std::vector<std::string> kKnownExperiments = {
    "classify", "solve", "compare", "continuous_dependence", "global_envelope", "sweep"};

}  // namespace

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
    auto it = raw.find(key);
    return it == raw.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    auto it = raw.find(key);
    return it == raw.end() ? fallback : to_double(key, it->second);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
    auto it = raw.find(key);
    return it == raw.end() ? fallback : static_cast<int>(to_long(key, it->second));
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.raw[key] = value;
    }

    cfg.grid = GridSpec(cfg.get_int("grid.dim", 1), cfg.get_double("grid.half_width", 10.0),
                        cfg.get_int("grid.points", 64));
    cfg.nonlinearity = cfg.get_string("nonlinearity", "zero");
    cfg.initial_data = cfg.get_string("initial_data", "gaussian(1, 1)");
    cfg.experiment = cfg.get_string("experiment", "solve");
    cfg.tol = cfg.get_double("tol", 1e-6);
    cfg.max_iter = cfg.get_int("max_iter", 60);
    cfg.time_nodes = cfg.get_int("time_nodes", 48);
    cfg.horizon = cfg.get_double("horizon", 1.0);
    cfg.seed = static_cast<unsigned long>(cfg.get_int("seed", 0));
    cfg.output_dir = cfg.get_string("out", ".");

    bool known = false;
    for (const auto& e : kKnownExperiments) known = known || e == cfg.experiment;
    if (!known) throw std::runtime_error("config: unknown experiment '" + cfg.experiment + "'");
    if (!(cfg.tol > 0)) throw std::runtime_error("config: tol must be positive");
    if (cfg.max_iter < 1) throw std::runtime_error("config: max_iter must be >= 1");
    if (cfg.time_nodes < 1) throw std::runtime_error("config: time_nodes must be >= 1");
    if (!(cfg.horizon > 0)) throw std::runtime_error("config: horizon must be positive");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

nlohmann::json ExperimentConfig::to_manifest() const {
    nlohmann::json j;
    j["format"] = "heatlab-manifest-1";
    j["config"] = nlohmann::json::object();
    for (const auto& [k, v] : raw) j["config"][k] = v;
    // resolved defaults so the manifest alone reruns the experiment
    j["config"]["grid.dim"] = std::to_string(grid.dim);
    j["config"]["grid.half_width"] = std::to_string(grid.half_width);
    j["config"]["grid.points"] = std::to_string(grid.points_per_axis);
    j["config"]["nonlinearity"] = nonlinearity;
    j["config"]["initial_data"] = initial_data;
    j["config"]["experiment"] = experiment;
    j["config"]["seed"] = std::to_string(seed);
    return j;
}

ExperimentConfig ExperimentConfig::from_manifest(const nlohmann::json& manifest) {
    std::ostringstream text;
    for (const auto& [k, v] : manifest.at("config").items())
        text << k << " = " << v.get<std::string>() << "\n";
    return parse_config_text(text.str());
}

namespace {

struct ShapeTerm {
    double coefficient = 1.0;
    std::string name;
    std::vector<double> args;
};

/// Parses "coef*name(args)" terms joined by + / -.
std::vector<ShapeTerm> parse_shape_sum(const std::string& text) {
    std::vector<ShapeTerm> terms;
    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    double sign = 1.0;
    skip_ws();
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        sign = text[i] == '-' ? -1.0 : 1.0;
        ++i;
    }
    while (true) {
        skip_ws();
        ShapeTerm term;
        term.coefficient = sign;
        // optional leading numeric coefficient
        if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) ||
                                text[i] == '.')) {
            char* end = nullptr;
            term.coefficient = sign * std::strtod(text.c_str() + i, &end);
            i = end - text.c_str();
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        const std::size_t name_start = i;
        while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
        term.name = text.substr(name_start, i - name_start);
        if (term.name.empty())
            throw std::runtime_error("initial_data: expected a shape name in '" + text + "'");
        skip_ws();
        if (i >= text.size() || text[i] != '(')
            throw std::runtime_error("initial_data: '" + term.name + "' needs an argument list");
        ++i;
        while (true) {
            skip_ws();
            char* end = nullptr;
            const double v = std::strtod(text.c_str() + i, &end);
            if (end == text.c_str() + i)
                throw std::runtime_error("initial_data: bad number in '" + term.name + "(...)'");
            term.args.push_back(v);
            i = end - text.c_str();
            skip_ws();
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            break;
        }
        if (i >= text.size() || text[i] != ')')
            throw std::runtime_error("initial_data: missing ')' after '" + term.name + "'");
        ++i;
        terms.push_back(std::move(term));
        skip_ws();
        if (i >= text.size()) break;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1.0 : 1.0;
            ++i;
        } else {
            throw std::runtime_error("initial_data: unexpected character '" +
                                     std::string(1, text[i]) + "'");
        }
    }
    return terms;
}

void add_gaussian(GridField& out, double coef, const std::vector<double>& args) {
    if (args.size() < 2) throw std::runtime_error("initial_data: gaussian(mass, width, ...)");
    const double mass_arg = args[0];
    const double width = args[1];
    if (!(width > 0)) throw std::runtime_error("initial_data: gaussian width must be positive");
    std::array<double, 3> center{0, 0, 0};
    for (std::size_t a = 0; a + 2 < args.size() && a < 3; ++a) center[a] = args[a + 2];
    const int dim = out.spec.dim;
    const double amp = mass_arg / std::pow(width * std::sqrt(2.0 * M_PI), dim);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto idx = out.spec.unflatten(i);
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double d = out.spec.axis_coord(idx[a]) - center[a];
            r2 += d * d;
        }
        out.values[i] += coef * amp * std::exp(-r2 / (2.0 * width * width));
    }
}

void add_bump(GridField& out, double coef, const std::vector<double>& args) {
    if (args.size() < 2) throw std::runtime_error("initial_data: bump(mass, width, ...)");
    const double mass_arg = args[0];
    const double width = args[1];
    if (!(width > 0)) throw std::runtime_error("initial_data: bump width must be positive");
    std::array<double, 3> center{0, 0, 0};
    for (std::size_t a = 0; a + 2 < args.size() && a < 3; ++a) center[a] = args[a + 2];
    const int dim = out.spec.dim;
    GridField shape(out.spec);
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const auto idx = out.spec.unflatten(i);
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double d = (out.spec.axis_coord(idx[a]) - center[a]) / width;
            r2 += d * d;
        }
        shape.values[i] = r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    }
    const double m = mass(shape);
    if (!(m > 0)) throw std::runtime_error("initial_data: bump support misses the lattice");
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values[i] += coef * mass_arg / m * shape.values[i];
}

void add_spike(GridField& out, double coef, const std::vector<double>& args) {
    if (args.empty()) throw std::runtime_error("initial_data: spike(mass, ...)");
    const double mass_arg = args[0];
    std::array<double, 3> center{0, 0, 0};
    for (std::size_t a = 0; a + 1 < args.size() && a < 3; ++a) center[a] = args[a + 1];
    const double h = out.spec.spacing();
    std::size_t flat = 0;
    for (int a = 0; a < out.spec.dim; ++a) {
        int idx = static_cast<int>(std::lround((center[a] + out.spec.half_width) / h));
        idx = std::max(0, std::min(out.spec.points_per_axis - 1, idx));
        flat = flat * out.spec.points_per_axis + idx;
    }
    out.values[flat] += coef * mass_arg / out.spec.cell_volume();
}

}  // namespace

GridField make_initial_data(const std::string& text, const GridSpec& spec) {
    GridField out(spec);
    for (const auto& term : parse_shape_sum(text)) {
        if (term.name == "gaussian")
            add_gaussian(out, term.coefficient, term.args);
        else if (term.name == "bump")
            add_bump(out, term.coefficient, term.args);
        else if (term.name == "spike")
            add_spike(out, term.coefficient, term.args);
        else
            throw std::runtime_error("initial_data: unknown shape '" + term.name + "'");
    }
    return out;
}

}  // namespace heatlab
