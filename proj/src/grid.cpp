#include "heatlab/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace heatlab {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

GridSpec::GridSpec(int dim_, double half_width_, int points_per_axis_)
    : dim(dim_), half_width(half_width_), points_per_axis(points_per_axis_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("GridSpec: dim must be 1, 2 or 3");
    if (!(half_width > 0)) throw std::invalid_argument("GridSpec: half_width must be positive");
    if (!is_pow2(points_per_axis) || points_per_axis < 8)
        throw std::invalid_argument("GridSpec: points_per_axis must be a power of two >= 8");
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing();
    return v;
}

std::size_t GridSpec::total_points() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points_per_axis);
    return n;
}

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % points_per_axis);
        flat /= points_per_axis;
    }
    return idx;
}

double norm(const GridField& f, double q) {
    if (q < 1.0) throw std::invalid_argument("norm: q must be >= 1");
    if (std::isinf(q)) return norm_linf(f);
    if (q == 1.0) return norm_l1(f);
    double acc = 0.0;
    for (double v : f.values) acc += std::pow(std::fabs(v), q);
    return std::pow(f.spec.cell_volume() * acc, 1.0 / q);
}

double norm_l1(const GridField& f) {
    double acc = 0.0;
    for (double v : f.values) acc += std::fabs(v);
    return f.spec.cell_volume() * acc;
}

double norm_linf(const GridField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::fabs(v));
    return m;
}

double mass(const GridField& f) {
    double acc = 0.0;
    for (double v : f.values) acc += v;
    return f.spec.cell_volume() * acc;
}

GridField positive_part(const GridField& f) {
    GridField out(f.spec);
    for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = std::max(f.values[i], 0.0);
    return out;
}

GridField negative_part(const GridField& f) {
    GridField out(f.spec);
    for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = std::min(f.values[i], 0.0);
    return out;
}

bool pointwise_leq(const GridField& a, const GridField& b, double slack) {
    if (!(a.spec == b.spec)) throw std::invalid_argument("pointwise_leq: grid specs differ");
    if (slack < 0) throw std::invalid_argument("pointwise_leq: slack must be non-negative");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.values[i] > b.values[i] + slack) return false;
    return true;
}

bool all_finite(const GridField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

GridField operator+(const GridField& a, const GridField& b) {
    if (!(a.spec == b.spec)) throw std::invalid_argument("field +: grid specs differ");
    GridField out(a.spec);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] + b.values[i];
    return out;
}

GridField operator-(const GridField& a, const GridField& b) {
    if (!(a.spec == b.spec)) throw std::invalid_argument("field -: grid specs differ");
    GridField out(a.spec);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] - b.values[i];
    return out;
}

GridField operator*(double c, const GridField& a) {
    GridField out(a.spec);
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = c * a.values[i];
    return out;
}

double outer_shell_mass_fraction(const GridField& f) {
    const double total = norm_l1(f);
    if (total == 0.0) return 0.0;
    const double inner = f.spec.half_width / 2.0;
    double outer = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto idx = f.spec.unflatten(i);
        bool in_core = true;
        for (int a = 0; a < f.spec.dim; ++a)
            if (std::fabs(f.spec.axis_coord(idx[a])) > inner) in_core = false;
        if (!in_core) outer += std::fabs(f.values[i]);
    }
    return f.spec.cell_volume() * outer / total;
}

void save_binary(const GridField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_binary: cannot open " + path);
    const std::uint32_t dim = static_cast<std::uint32_t>(f.spec.dim);
    const std::uint32_t n = static_cast<std::uint32_t>(f.spec.points_per_axis);
    os.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    os.write(reinterpret_cast<const char*>(&f.spec.half_width), sizeof(double));
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("save_binary: write failed for " + path);
}

GridField load_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_binary: cannot open " + path);
    std::uint32_t dim = 0, n = 0;
    double half_width = 0;
    is.read(reinterpret_cast<char*>(&dim), sizeof dim);
    is.read(reinterpret_cast<char*>(&half_width), sizeof half_width);
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!is) throw std::runtime_error("load_binary: truncated header in " + path);
    GridField out(GridSpec(static_cast<int>(dim), half_width, static_cast<int>(n)));
    is.read(reinterpret_cast<char*>(out.values.data()),
            static_cast<std::streamsize>(out.values.size() * sizeof(double)));
    if (!is) throw std::runtime_error("load_binary: truncated payload in " + path);
    return out;
}

void save_csv(const GridField& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_csv: cannot open " + path);
    const char* headers[] = {"i,value\n", "i,j,value\n", "i,j,k,value\n"};
    os << headers[f.spec.dim - 1];
    char buf[128];
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto idx = f.spec.unflatten(i);
        for (int a = 0; a < f.spec.dim; ++a) os << idx[a] << ',';
        std::snprintf(buf, sizeof buf, "%.17g\n", f.values[i]);
        os << buf;
    }
}

}  // namespace heatlab
