#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nematic/csv.hpp"
#include "nematic/errors.hpp"
#include "nematic/radial_grid.hpp"
#include "nematic/tridiagonal.hpp"

namespace nematic {

/// Director angle phi(r, t) sampled on a grid. phi[0] = 0 and phi[n] is the
/// fixed boundary value.
struct FlowState {
    double t = 0.0;
    Field phi;
};

struct SolverConfig {
    double dt_init = 1e-6;
    double dt_min = 1e-10;
    double dt_max = 1e-2;
    /// Implicit weight of the linearized operator (1 = linearly implicit Euler,
    /// 0.5 = linearly implicit trapezoid).
    double theta_scheme = 1.0;
    /// Step-doubling error target, relative to max(1, sup|phi|).
    double step_tolerance = 1e-6;
    /// Run stops as blown up once phi_r(0,t) exceeds this.
    double monitor_threshold = 1e3;
    /// Minimum time between stored profile snapshots; 0 stores every accepted step.
    double snapshot_interval = 0.0;

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be > 0");
        };
        positive(dt_init, "dt_init");
        positive(dt_min, "dt_min");
        positive(dt_max, "dt_max");
        positive(step_tolerance, "step_tolerance");
        positive(monitor_threshold, "monitor_threshold");
        if (!(dt_min <= dt_init && dt_init <= dt_max)) {
            throw InvalidArgument("solver config requires dt_min <= dt_init <= dt_max");
        }
        if (!(theta_scheme >= 0.0 && theta_scheme <= 1.0)) {
            throw InvalidArgument("theta_scheme must lie in [0,1]");
        }
        if (!(snapshot_interval >= 0.0)) throw InvalidArgument("snapshot_interval must be >= 0");
    }
};

/// Optional source term F(r, t) added to the right-hand side.
using Forcing = std::function<double(double r, double t)>;

struct MonitorSample {
    double t = 0.0;
    double phi_r_at_0 = 0.0;
    double sup_abs_phi = 0.0;
    double energy = 0.0;
};

enum class Termination { reached_t_end, blowup_detected, dt_underflow };

inline const char* to_string(Termination t) {
    switch (t) {
    case Termination::reached_t_end: return "reached_t_end";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::dt_underflow: return "dt_underflow";
    }
    return "unknown";
}

struct Trajectory {
    std::vector<FlowState> snapshots;
    std::vector<MonitorSample> monitors;
    Termination termination = Termination::reached_t_end;
    double dt_at_end = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;

    const FlowState& final_state() const { return snapshots.back(); }
};

// ---------------------------------------------------------------------------
// Pointwise operators

/// Tension field tau(phi) = phi_rr + phi_r/r - sin(2 phi)/(2 r^2). The outer
/// node uses the one-sided stencils; at r = 0 the value is the limit 0 for odd
/// profiles.
inline Field tension(std::span<const double> phi, const RadialGrid& grid) {
    grid.check_length(phi, "tension");
    Field out(phi.size(), 0.0);
    for (std::size_t i = 1; i < phi.size(); ++i) {
        const double r = grid[i];
        out[i] = grid.d2_at(phi, i) + grid.d1_at(phi, i) / r - std::sin(2.0 * phi[i]) / (2.0 * r * r);
    }
    return out;
}

/// |grad d|^2 = phi_r^2 + sin^2(phi)/r^2 for the axisymmetric director; at
/// r = 0 the continuous extension 2 phi_r(0)^2.
inline Field grad_d_squared(std::span<const double> phi, const RadialGrid& grid) {
    grid.check_length(phi, "grad_d_squared");
    Field out(phi.size());
    const double g0 = grid.d1_at(phi, 0);
    out[0] = 2.0 * g0 * g0;
    for (std::size_t i = 1; i < phi.size(); ++i) {
        const double r = grid[i];
        const double g = grid.d1_at(phi, i);
        const double s = std::sin(phi[i]) / r;
        out[i] = g * g + s * s;
    }
    return out;
}

/// Radial Dirichlet energy integral_0^1 (phi_r^2 + sin^2 phi / r^2) r dr.
inline double radial_energy(std::span<const double> phi, const RadialGrid& grid) {
    Field e = grad_d_squared(phi, grid);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] *= grid[i];
    return grid.integrate(e);
}

inline double sup_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// phi_r(0, t) by the grid's one-sided endpoint stencil.
inline double axis_gradient(std::span<const double> phi, const RadialGrid& grid) {
    return grid.d1_at(phi, 0);
}

inline MonitorSample make_monitor(const FlowState& s, const RadialGrid& grid) {
    return {s.t, axis_gradient(s.phi, grid), sup_abs(s.phi), radial_energy(s.phi, grid)};
}

// ---------------------------------------------------------------------------

/**
 * Integrator for the drifted harmonic-map heat flow
 *
 *     phi_t + r phi_r = phi_rr + phi_r / r - sin(2 phi) / (2 r^2),
 *     phi(0,t) = 0,  phi(1,t) = phi_0(1).
 *
 * One step solves the linearly implicit theta system
 *
 *     (I - theta dt (L + J)) D = dt (L phi + N(phi) + F(t + theta dt)),
 *
 * where L is the linear part (diffusion, 1/r and drift terms), N the sine
 * term and J = -cos(2 phi)/r^2 its derivative at the old level. Only a
 * tridiagonal solve is needed per step.
 */
class FlowSolver {
public:
    FlowSolver(RadialGrid grid, SolverConfig config, Forcing forcing = {})
        : grid_(std::move(grid)), config_(config), forcing_(std::move(forcing))
    {
        config_.validate();
        const std::size_t m = grid_.size();
        lo_.assign(m, 0.0);
        di_.assign(m, 0.0);
        up_.assign(m, 0.0);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double r = grid_[i];
            const auto& s1 = grid_.d1_stencil(i);
            const auto& s2 = grid_.d2_stencil(i);
            const double k = 1.0 / r - r;
            lo_[i] = s2.w[0] + k * s1.w[0];
            di_[i] = s2.w[1] + k * s1.w[1];
            up_[i] = s2.w[2] + k * s1.w[2];
        }
    }

    const RadialGrid& grid() const noexcept { return grid_; }
    const SolverConfig& config() const noexcept { return config_; }

    /// phi_t as given by the PDE: interior tau(phi) - r phi_r, zero at endpoints.
    Field rhs(const FlowState& state) const {
        grid_.check_length(state.phi, "rhs");
        const auto& p = state.phi;
        Field out(p.size(), 0.0);
        for (std::size_t i = 1; i + 1 < p.size(); ++i) {
            const double r = grid_[i];
            out[i] = lo_[i] * p[i - 1] + di_[i] * p[i] + up_[i] * p[i + 1] - std::sin(2.0 * p[i]) / (2.0 * r * r);
        }
        return out;
    }

    /// One step of size dt; dt must lie in [dt_min, dt_max].
    FlowState step(const FlowState& state, double dt) {
        grid_.check_length(state.phi, "step");
        if (!(dt >= config_.dt_min && dt <= config_.dt_max)) {
            throw InvalidArgument("step: dt=" + csv::num(dt) + " outside [dt_min, dt_max]");
        }
        FlowState out;
        advance(state, dt, out);
        return out;
    }

    /// Adaptive integration with step doubling until t_end, blow-up, or dt underflow.
    Trajectory run(Field phi0, double t_end) {
        grid_.check_length(phi0, "run");
        if (phi0.front() != 0.0) throw InvalidArgument("run: initial data must satisfy phi0(0) = 0");
        if (!(t_end >= 0.0)) throw InvalidArgument("run: t_end must be >= 0");

        Trajectory traj;
        FlowState cur{0.0, std::move(phi0)};
        traj.monitors.push_back(make_monitor(cur, grid_));
        traj.snapshots.push_back(cur);
        double last_snapshot = 0.0;

        FlowState coarse, half, fine;
        double dt = config_.dt_init;
        const double t_tol = 1e-14 * std::max(1.0, t_end);

        auto record = [&](bool force) {
            if (force || config_.snapshot_interval == 0.0 || cur.t - last_snapshot >= config_.snapshot_interval) {
                if (traj.snapshots.back().t < cur.t) {
                    traj.snapshots.push_back(cur);
                    last_snapshot = cur.t;
                }
            }
        };

        if (traj.monitors.back().phi_r_at_0 > config_.monitor_threshold) {
            traj.termination = Termination::blowup_detected;
            traj.dt_at_end = dt;
            return traj;
        }

        while (cur.t < t_end - t_tol) {
            const double h = std::min(dt, t_end - cur.t);
            advance(cur, h, coarse);
            advance(cur, 0.5 * h, half);
            advance(half, 0.5 * h, fine);

            double diff = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < fine.phi.size(); ++i) {
                if (!std::isfinite(fine.phi[i]) || !std::isfinite(coarse.phi[i])) {
                    finite = false;
                    break;
                }
                diff = std::max(diff, std::abs(fine.phi[i] - coarse.phi[i]));
            }
            const double err = finite ? diff / std::max(1.0, sup_abs(fine.phi)) : INFINITY;

            if (err <= config_.step_tolerance) {
                std::swap(cur, fine);
                ++traj.accepted_steps;
                traj.monitors.push_back(make_monitor(cur, grid_));
                const bool blown = traj.monitors.back().phi_r_at_0 > config_.monitor_threshold;
                const bool done = cur.t >= t_end - t_tol;
                record(blown || done);
                if (blown) {
                    traj.termination = Termination::blowup_detected;
                    traj.dt_at_end = h;
                    return traj;
                }
                const double grow = err > 0.0 ? 0.9 * std::sqrt(config_.step_tolerance / err) : 1.5;
                // Keep the nominal dt when the last step was shortened to hit t_end.
                dt = std::min(config_.dt_max, std::max(dt, h) * std::clamp(grow, 1.0, 1.5));
            } else {
                ++traj.rejected_steps;
                dt = 0.5 * h;
                if (dt < config_.dt_min) {
                    traj.termination = Termination::dt_underflow;
                    traj.dt_at_end = dt;
                    record(true);
                    return traj;
                }
            }
        }
        traj.termination = Termination::reached_t_end;
        traj.dt_at_end = dt;
        record(true);
        return traj;
    }

private:
    void advance(const FlowState& in, double dt, FlowState& out) {
        const auto& p = in.phi;
        const std::size_t m = p.size();
        const std::size_t k = m - 2;
        const double th = config_.theta_scheme;
        const double tf = in.t + th * dt;

        system_.lower.resize(k);
        system_.diag.resize(k);
        system_.upper.resize(k);
        delta_.resize(k);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double r = grid_[i];
            const double inv_r2 = 1.0 / (r * r);
            const double lin = lo_[i] * p[i - 1] + di_[i] * p[i] + up_[i] * p[i + 1];
            const double nonlin = -0.5 * std::sin(2.0 * p[i]) * inv_r2;
            const double jac = -std::cos(2.0 * p[i]) * inv_r2;
            double src = lin + nonlin;
            if (forcing_) src += forcing_(r, tf);
            const std::size_t j = i - 1;
            delta_[j] = dt * src;
            system_.lower[j] = -th * dt * lo_[i];
            system_.diag[j] = 1.0 - th * dt * (di_[i] + jac);
            system_.upper[j] = -th * dt * up_[i];
        }
        if (!solve_tridiagonal(system_, delta_, scratch_)) {
            throw NumericFailure("tridiagonal solve failed", in.t, dt);
        }
        out.t = in.t + dt;
        out.phi.resize(m);
        out.phi[0] = 0.0;
        for (std::size_t i = 1; i + 1 < m; ++i) out.phi[i] = p[i] + delta_[i - 1];
        out.phi[m - 1] = p[m - 1];
    }

    RadialGrid grid_;
    SolverConfig config_;
    Forcing forcing_;
    std::vector<double> lo_, di_, up_;
    Tridiagonal system_;
    std::vector<double> delta_, scratch_;
};

/// Right-hand side of the flow at `state`.
inline Field rhs(const FlowState& state, const RadialGrid& grid) {
    return FlowSolver(grid, SolverConfig{}).rhs(state);
}

inline FlowState step(const FlowState& state, double dt, const RadialGrid& grid, const SolverConfig& config,
                      Forcing forcing = {}) {
    return FlowSolver(grid, config, std::move(forcing)).step(state, dt);
}

inline Trajectory run(Field phi0, double t_end, const RadialGrid& grid, const SolverConfig& config,
                      Forcing forcing = {}) {
    return FlowSolver(grid, config, std::move(forcing)).run(std::move(phi0), t_end);
}

// ---------------------------------------------------------------------------
// CSV export

inline void write_monitors_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,phi_r_at_0,sup_abs_phi,energy\n";
    for (const auto& m : traj.monitors) csv::row(os, m.t, m.phi_r_at_0, m.sup_abs_phi, m.energy);
}

inline void write_profile_csv(std::ostream& os, const FlowState& state, const RadialGrid& grid) {
    os << "r,phi\n";
    for (std::size_t i = 0; i < grid.size(); ++i) csv::row(os, grid[i], state.phi[i]);
}

} // namespace nematic
