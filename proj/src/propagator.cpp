#include "heatlab/propagator.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "heatlab/fft.hpp"

namespace heatlab {

double heat_kernel(const std::array<double, 3>& x, double t, int dim) {
    if (!(t > 0)) throw std::invalid_argument("heat_kernel: t must be positive");
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
    return std::pow(4.0 * std::numbers::pi * t, -0.5 * dim) * std::exp(-r2 / (4.0 * t));
}

HeatPropagator::HeatPropagator(const GridSpec& spec) : spec_(spec) {
    const int n = spec_.points_per_axis;
    const double base = std::numbers::pi / spec_.half_width;  // mode spacing for period 2L
    std::vector<double> axis_k2(n);
    for (int i = 0; i < n; ++i) {
        const int k = (i <= n / 2) ? i : i - n;
        axis_k2[i] = (base * k) * (base * k);
    }
    freq_sq_.assign(spec_.total_points(), 0.0);
    for (std::size_t flat = 0; flat < freq_sq_.size(); ++flat) {
        auto idx = spec_.unflatten(flat);
        double s = 0.0;
        for (int a = 0; a < spec_.dim; ++a) s += axis_k2[idx[a]];
        freq_sq_[flat] = s;
    }
}

GridField HeatPropagator::apply(const GridField& f, double t) const {
    if (!(f.spec == spec_)) throw std::invalid_argument("HeatPropagator::apply: grid spec mismatch");
    if (t < 0) throw std::invalid_argument("HeatPropagator::apply: t must be non-negative");
    if (t == 0) return f;

    std::vector<std::complex<double>> hat(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) hat[i] = f.values[i];
    fft_nd(hat, spec_, false);
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= std::exp(-freq_sq_[i] * t);
    fft_nd(hat, spec_, true);

    GridField out(spec_);
    double max_imag = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        out.values[i] = hat[i].real();
        max_imag = std::max(max_imag, std::fabs(hat[i].imag()));
    }
    if (max_imag > 1e-12 * std::max(1.0, norm_linf(f)))
        throw std::runtime_error("HeatPropagator::apply: imaginary residue above tolerance");
    return out;
}

double HeatPropagator::smoothing_ratio(const GridField& phi, double q, double r, double t) const {
    if (!(q >= 1.0 && r >= q)) throw std::invalid_argument("smoothing_ratio: need 1 <= q <= r");
    if (!(t > 0)) throw std::invalid_argument("smoothing_ratio: t must be positive");
    const double nq = norm(phi, q);
    if (nq == 0.0) throw std::invalid_argument("smoothing_ratio: zero input field");
    const double alpha = 0.5 * spec_.dim * (1.0 / q - (std::isinf(r) ? 0.0 : 1.0 / r));
    return norm(apply(phi, t), r) * std::pow(t, alpha) / nq;
}

std::vector<std::pair<double, double>> HeatPropagator::smoothing_decay_profile(
    const GridField& phi, double q, double r, const std::vector<double>& times) const {
    if (times.empty()) throw std::invalid_argument("smoothing_decay_profile: empty time list");
    if (!(q < r)) throw std::invalid_argument("smoothing_decay_profile: need q < r");
    const double alpha = 0.5 * spec_.dim * (1.0 / q - (std::isinf(r) ? 0.0 : 1.0 / r));
    std::vector<std::pair<double, double>> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!(t > 0)) throw std::invalid_argument("smoothing_decay_profile: times must be positive");
        out.emplace_back(t, std::pow(t, alpha) * norm(apply(phi, t), r));
    }
    return out;
}

}  // namespace heatlab
