#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace heatlab {

/// Uniform periodic box [-half_width, half_width]^dim sampled with
/// points_per_axis cells per axis. points_per_axis must be a power of two
/// (>= 8) so the spectral transforms stay radix-2.
struct GridSpec {
    int dim = 1;
    double half_width = 1.0;
    int points_per_axis = 8;

    GridSpec() = default;
    GridSpec(int dim_, double half_width_, int points_per_axis_);

    double spacing() const { return 2.0 * half_width / points_per_axis; }
    double cell_volume() const;
    std::size_t total_points() const;

    /// Physical coordinate of lattice index i along one axis, in [-L, L).
    double axis_coord(int i) const { return -half_width + i * spacing(); }

    /// Decompose a flat row-major index into per-axis indices.
    std::array<int, 3> unflatten(std::size_t flat) const;

    bool operator==(const GridSpec&) const = default;
};

/// Sampled real-valued function on a GridSpec lattice, row-major.
/// Values are expected to stay finite; the solver flags blown-up fields
/// explicitly instead of storing non-finite data here.
struct GridField {
    GridSpec spec;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const GridSpec& s, double fill = 0.0)
        : spec(s), values(s.total_points(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

/// Discrete L^q norm with midpoint quadrature weight h^dim per cell.
/// q may be infinity. Rejects q < 1.
double norm(const GridField& f, double q);

double norm_l1(const GridField& f);
double norm_linf(const GridField& f);

/// Plain lattice sum times cell volume (signed mass).
double mass(const GridField& f);

GridField positive_part(const GridField& f);
GridField negative_part(const GridField& f);

/// a_i <= b_i + slack at every lattice point. Requires matching specs.
bool pointwise_leq(const GridField& a, const GridField& b, double slack);

bool all_finite(const GridField& f);

GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(double c, const GridField& a);

/// Builds a field by sampling fn at lattice coordinates.
template <typename Fn>
GridField sample(const GridSpec& spec, Fn&& fn) {
    GridField out(spec);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto idx = spec.unflatten(i);
        std::array<double, 3> x{0, 0, 0};
        for (int a = 0; a < spec.dim; ++a) x[a] = spec.axis_coord(idx[a]);
        out.values[i] = fn(x);
    }
    return out;
}

/// Fraction of |f| mass carried by cells outside the central half of the
/// box. Experiments should keep this below ~1e-6; the torus is only a
/// faithful surrogate for whole space while the data stays inside.
double outer_shell_mass_fraction(const GridField& f);

/// Flat binary format: u32 dim, f64 half_width, u32 points_per_axis,
/// then total_points() little-endian f64 values.
void save_binary(const GridField& f, const std::string& path);
GridField load_binary(const std::string& path);

/// CSV rows "i[,j[,k]],value" with a header line.
void save_csv(const GridField& f, const std::string& path);

}  // namespace heatlab
