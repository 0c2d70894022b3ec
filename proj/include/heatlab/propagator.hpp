#pragma once

#include <utility>
#include <vector>

#include "heatlab/grid.hpp"

namespace heatlab {

/// Gaussian heat kernel G(x,t) = (4 pi t)^{-n/2} exp(-|x|^2 / 4t), t > 0.
/// x is read up to dim components.
double heat_kernel(const std::array<double, 3>& x, double t, int dim);

/// Heat semigroup S(t) on the periodic box, applied as the spectral
/// multiplier exp(-|xi|^2 t). The zero mode is untouched, so mass is
/// conserved exactly; inversion enforces real output and flags imaginary
/// residue above roundoff scale as an error.
class HeatPropagator {
  public:
    explicit HeatPropagator(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }

    /// S(t) f, t >= 0. S(0) returns the input unchanged.
    GridField apply(const GridField& f, double t) const;

    /// ||S(t)phi||_r * t^{(n/2)(1/q - 1/r)} / ||phi||_q.
    /// The whole-space smoothing estimate bounds this by 1; on the torus
    /// the bound is only meaningful within t <= (half_width/4)^2.
    double smoothing_ratio(const GridField& phi, double q, double r, double t) const;

    /// (t, t^alpha ||S(t)phi||_r) with alpha = (n/2)(1/q - 1/r), q < r.
    std::vector<std::pair<double, double>> smoothing_decay_profile(
        const GridField& phi, double q, double r, const std::vector<double>& times) const;

    /// Largest t for which whole-space estimates are trusted on the torus.
    double validity_window() const {
        const double l = spec_.half_width / 4.0;
        return l * l;
    }

  private:
    GridSpec spec_;
    std::vector<double> freq_sq_;  // |xi|^2 per row-major lattice point
};

}  // namespace heatlab
