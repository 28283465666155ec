#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nematic/csv.hpp"
#include "nematic/errors.hpp"
#include "nematic/flow_solver.hpp"

namespace nematic {

/// Worst sampled violation of an ordering relation. max_violation is already
/// net of the tolerance and clamped at zero.
struct OrderingReport {
    double max_violation = 0.0;
    double r = 0.0;
    double t = 0.0;
    double tol = 0.0;
};

using BarrierFn = std::function<double(double r, double t)>;

/**
 * Checks lower(r,t) <= phi(r,t) <= upper(r,t) on every stored snapshot with
 * t <= t_max. Barriers are evaluated at the snapshot times on the solver grid.
 * `upper` may be empty.
 */
inline OrderingReport comparison_check(const Trajectory& traj, const RadialGrid& grid, const BarrierFn& lower,
                                       const BarrierFn& upper, double tol,
                                       double t_max = std::numeric_limits<double>::infinity()) {
    OrderingReport rep;
    rep.tol = tol;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& s : traj.snapshots) {
        if (s.t > t_max) continue;
        grid.check_length(s.phi, "comparison_check");
        for (std::size_t i = 0; i < s.phi.size(); ++i) {
            const double r = grid[i];
            double v = -std::numeric_limits<double>::infinity();
            if (lower) v = std::max(v, lower(r, s.t) - s.phi[i]);
            if (upper) v = std::max(v, s.phi[i] - upper(r, s.t));
            if (v > worst) {
                worst = v;
                rep.r = r;
                rep.t = s.t;
            }
        }
    }
    rep.max_violation = std::max(0.0, worst - tol);
    return rep;
}

/// max over interior nodes and snapshots with t > 0 of |phi| - bound, clamped at 0.
inline OrderingReport max_principle_check(const Trajectory& traj, const RadialGrid& grid,
                                          double bound = std::numbers::pi, double tol = 0.0) {
    OrderingReport rep;
    rep.tol = tol;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& s : traj.snapshots) {
        if (!(s.t > 0.0)) continue;
        for (std::size_t i = 1; i + 1 < s.phi.size(); ++i) {
            const double v = std::abs(s.phi[i]) - bound;
            if (v > worst) {
                worst = v;
                rep.r = grid[i];
                rep.t = s.t;
            }
        }
    }
    rep.max_violation = std::max(0.0, worst - tol);
    return rep;
}

using Vec3 = std::array<double, 3>;

/**
 * Discrete Hoelder seminorm max |d(x)-d(y)| / |x-y|^exponent over all sample
 * pairs, with chordal (ambient) distance between values. Coincident points
 * are skipped.
 */
inline double holder_seminorm(std::span<const Vec3> points, std::span<const Vec3> values, double exponent) {
    if (points.size() != values.size()) throw InvalidArgument("holder_seminorm: points/values size mismatch");
    if (points.size() < 2) throw InvalidArgument("holder_seminorm: need at least 2 points");
    if (!(exponent > 0.0 && exponent <= 1.0)) throw InvalidArgument("holder_seminorm: exponent must lie in (0,1]");
    for (const auto& v : values) {
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (std::abs(n - 1.0) > 1e-8) throw InvalidArgument("holder_seminorm: values must be unit vectors");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double dx = 0.0, dv = 0.0;
            for (int k = 0; k < 3; ++k) {
                dx += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
                dv += (values[i][k] - values[j][k]) * (values[i][k] - values[j][k]);
            }
            if (dx == 0.0) continue;
            best = std::max(best, std::sqrt(dv) / std::pow(dx, 0.5 * exponent));
        }
    }
    return best;
}

inline void write_report_header(std::ostream& os) { os << "check,max_violation,r,t,tol\n"; }

inline void write_report_row(std::ostream& os, const std::string& check, const OrderingReport& rep) {
    csv::row(os, check, rep.max_violation, rep.r, rep.t, rep.tol);
}

} // namespace nematic
