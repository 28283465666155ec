#pragma once

#include <cmath>
#include <vector>

#include "nematic/errors.hpp"
#include "nematic/flow_solver.hpp"
#include "nematic/radial_grid.hpp"

// Manufactured solutions for the forced flow phi_t + r phi_r = tau(phi) + F.

namespace nematic::mms {

/// phi_m(r,t) = t r^2 (1 - r).
inline double solution(double r, double t) { return t * r * r * (1.0 - r); }

/// F = phi_t + r phi_r - tau(phi) for phi_m.
inline double forcing(double r, double t) {
    if (r == 0.0) return 0.0;
    const double phi = solution(r, t);
    const double phi_t = r * r * (1.0 - r);
    const double phi_r = t * (2.0 * r - 3.0 * r * r);
    const double phi_rr = t * (2.0 - 6.0 * r);
    const double tau = phi_rr + phi_r / r - std::sin(2.0 * phi) / (2.0 * r * r);
    return phi_t + r * phi_r - tau;
}

/// Steady profile r^2 (1 - r) and the forcing that makes it stationary.
inline double steady_solution(double r) { return r * r * (1.0 - r); }

inline double steady_forcing(double r, double /*t*/) {
    if (r == 0.0) return 0.0;
    const double phi = steady_solution(r);
    const double phi_r = 2.0 * r - 3.0 * r * r;
    const double phi_rr = 2.0 - 6.0 * r;
    return r * phi_r - (phi_rr + phi_r / r - std::sin(2.0 * phi) / (2.0 * r * r));
}

struct ConvergenceResult {
    std::vector<std::size_t> cells;
    std::vector<double> errors;
    /// log2(e_k / e_{k+1}) for consecutive resolutions.
    std::vector<double> orders;

    double min_order() const {
        double m = INFINITY;
        for (double o : orders) m = std::min(m, o);
        return m;
    }
};

/// Max-norm error at t_end of fixed-step integrations from phi_m(., 0) = 0.
inline double error_at(std::size_t n, double grading, double t_end, double dt, double theta = 0.5) {
    if (!(dt > 0.0 && t_end > 0.0)) throw InvalidArgument("mms::error_at: dt and t_end must be positive");
    SolverConfig cfg;
    cfg.dt_init = dt;
    cfg.dt_min = dt;
    cfg.dt_max = dt;
    cfg.theta_scheme = theta;
    FlowSolver solver(make_grid(n, grading), cfg, forcing);
    const auto& g = solver.grid();
    FlowState s{0.0, Field(g.size(), 0.0)};
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t k = 0; k < steps; ++k) {
        s = solver.step(s, dt);
        s.t = static_cast<double>(k + 1) * dt; // avoid accumulated rounding in t
    }
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(s.phi[i] - solution(g[i], s.t)));
    return err;
}

inline ConvergenceResult convergence_study(const std::vector<std::size_t>& cells, double grading, double t_end,
                                           double dt, double theta = 0.5) {
    ConvergenceResult out;
    out.cells = cells;
    for (std::size_t n : cells) out.errors.push_back(error_at(n, grading, t_end, dt, theta));
    for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
        const double ratio = static_cast<double>(cells[k + 1]) / static_cast<double>(cells[k]);
        out.orders.push_back(std::log(out.errors[k] / out.errors[k + 1]) / std::log(ratio));
    }
    return out;
}

} // namespace nematic::mms
