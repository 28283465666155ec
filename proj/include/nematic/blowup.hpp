#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "nematic/barriers.hpp"
#include "nematic/csv.hpp"
#include "nematic/errors.hpp"
#include "nematic/flow_solver.hpp"

namespace nematic {

struct BlowupReport {
    bool detected = false;
    double t_detect = std::numeric_limits<double>::quiet_NaN();
    double g_final = 0.0;
    /// Heuristic: zero crossing of the fitted rate model, NaN when the fit fails.
    double t_star_estimate = std::numeric_limits<double>::quiet_NaN();
    double t0_analytic = std::numeric_limits<double>::quiet_NaN();
    double dt_at_end = 0.0;
};

/**
 * Fit g^{-(1-eps_fit)} = A + B t by least squares over the last `window`
 * samples and return the zero crossing -A/B. With eps_fit equal to the
 * barrier exponent this is exact for beta^{1-eps} vanishing linearly.
 */
inline double extrapolate_singular_time(std::span<const double> t, std::span<const double> g, std::size_t window,
                                        double eps_fit = 0.5) {
    if (t.size() != g.size()) throw InvalidArgument("extrapolate_singular_time: size mismatch");
    if (window < 3) throw InvalidArgument("extrapolate_singular_time: window must be >= 3");
    if (t.size() < window) throw EstimationFailure("extrapolate_singular_time: fewer samples than window");
    const std::size_t first = t.size() - window;
    for (std::size_t i = first + 1; i < t.size(); ++i) {
        if (!(g[i] > g[i - 1])) throw EstimationFailure("extrapolate_singular_time: monitor not increasing over window");
    }
    if (!(g[first] > 0.0)) throw EstimationFailure("extrapolate_singular_time: monitor must be positive");

    const double p = -(1.0 - eps_fit);
    // Center times for conditioning.
    double tm = 0.0;
    for (std::size_t i = first; i < t.size(); ++i) tm += t[i];
    tm /= static_cast<double>(window);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < t.size(); ++i) {
        const double x = t[i] - tm;
        const double y = std::pow(g[i], p);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(window);
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw EstimationFailure("extrapolate_singular_time: degenerate time samples");
    const double slope = (n * sxy - sx * sy) / den;
    const double icpt = (sy - slope * sx) / n;
    if (!(slope < 0.0)) throw EstimationFailure("extrapolate_singular_time: fitted rate does not decrease");
    return tm - icpt / slope;
}

/**
 * Scan the monitor series. Detected iff the axis gradient exceeded `threshold`
 * or the run ended by dt underflow; t_detect is the first crossing (or the
 * final time for an underflow).
 */
inline BlowupReport detect(const Trajectory& traj, double threshold, std::optional<BarrierParams> params = {},
                           std::size_t window = 20, double eps_fit = 0.5) {
    if (traj.monitors.size() < 10) throw InvalidArgument("detect: need at least 10 monitor samples");
    BlowupReport rep;
    rep.g_final = traj.monitors.back().phi_r_at_0;
    rep.dt_at_end = traj.dt_at_end;
    for (const auto& m : traj.monitors) {
        if (m.phi_r_at_0 > threshold) {
            rep.detected = true;
            rep.t_detect = m.t;
            break;
        }
    }
    if (!rep.detected && traj.termination == Termination::dt_underflow) {
        rep.detected = true;
        rep.t_detect = traj.monitors.back().t;
    }
    if (rep.detected) {
        std::vector<double> t, g;
        t.reserve(traj.monitors.size());
        g.reserve(traj.monitors.size());
        for (const auto& m : traj.monitors) {
            t.push_back(m.t);
            g.push_back(m.phi_r_at_0);
        }
        try {
            rep.t_star_estimate = extrapolate_singular_time(t, g, std::min(window, t.size()), eps_fit);
        } catch (const EstimationFailure&) {
            rep.t_star_estimate = std::numeric_limits<double>::quiet_NaN();
        }
    }
    if (params) rep.t0_analytic = blowup_time(*params);
    return rep;
}

inline void write_blowup_csv(std::ostream& os, const BlowupReport& rep) {
    os << "detected,t_detect,g_final,t_star_estimate,t0_analytic,dt_at_end\n";
    csv::row(os, rep.detected, rep.t_detect, rep.g_final, rep.t_star_estimate, rep.t0_analytic, rep.dt_at_end);
}

} // namespace nematic
