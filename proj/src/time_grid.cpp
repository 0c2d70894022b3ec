#include <cmath>
#include <fstream>
#include <stdexcept>

#include "heatlab/solver.hpp"

namespace heatlab {

TimeGrid TimeGrid::graded(double t_end, int steps) {
    if (!(t_end > 0)) throw std::invalid_argument("TimeGrid: t_end must be positive");
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
    TimeGrid g;
    g.t_end = t_end;
    g.steps = steps;
    g.nodes.resize(steps + 1);
    for (int j = 0; j <= steps; ++j) {
        const double r = static_cast<double>(j) / steps;
        g.nodes[j] = t_end * r * r;
    }
    g.nodes[steps] = t_end;
    return g;
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::HorizonReached: return "horizon_reached";
        case SolveStatus::BlowUpDetected: return "blow_up_detected";
        case SolveStatus::MaxIterations: return "max_iterations";
    }
    return "?";
}

void SolutionTrajectory::write_norm_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_norm_csv: cannot open " + path);
    os << "t,l1,linf,t_half_n_linf,status\n";
    const std::string st = to_string(status);
    char buf[256];
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        const double l1 = norm_l1(fields[j]);
        const double li = norm_linf(fields[j]);
        const double half_n = 0.5 * fields[j].spec.dim;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s\n", t, l1, li,
                      std::pow(t, half_n) * li, st.c_str());
        os << buf;
    }
}

}  // namespace heatlab
