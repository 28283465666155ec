#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "nematic/csv.hpp"
#include "nematic/errors.hpp"
#include "nematic/flow_solver.hpp"
#include "nematic/quadrature.hpp"
#include "nematic/radial_grid.hpp"

// Reconstruction of the full solution (u, d, P) on the cylinder
// B_1^2 x [0,1] from a radial angle profile phi(r).

namespace nematic {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Stationary velocity u = (x, y, -2z), the gradient of (x^2 + y^2)/2 - z^2.
inline Vec3 velocity(double x, double y, double z) { return {x, y, -2.0 * z}; }

/// Jacobian du_i/dx_j of the stationary velocity.
inline Mat3 velocity_gradient(double /*x*/, double /*y*/, double /*z*/) {
    return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, -2.0}}};
}

// ---------------------------------------------------------------------------
// Director

struct SampledDirector {
    /// Sample coordinates (r, theta, z).
    std::vector<Vec3> points;
    std::vector<Vec3> d;
};

inline Vec3 director(double phi, double theta) {
    const double s = std::sin(phi);
    return {std::cos(theta) * s, std::sin(theta) * s, std::cos(phi)};
}

/// d = sin(phi) e_r + cos(phi) e_3 on the product of grid nodes, `thetas` and `zs`.
inline SampledDirector director_from_phi(std::span<const double> phi, const RadialGrid& grid,
                                         std::span<const double> thetas, std::span<const double> zs) {
    grid.check_length(phi, "director_from_phi");
    SampledDirector out;
    const std::size_t total = phi.size() * thetas.size() * zs.size();
    out.points.reserve(total);
    out.d.reserve(total);
    for (double z : zs) {
        for (double th : thetas) {
            for (std::size_t i = 0; i < phi.size(); ++i) {
                out.points.push_back({grid[i], th, z});
                out.d.push_back(director(phi[i], th));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stress

struct StressEval {
    /// grad d (.) grad d; third row and column vanish for z-independent d.
    Mat3 dd{};
    /// dd - |grad d|^2 / 2 * I_3. Its upper-left 2x2 block coincides with the
    /// I_2 convention dd - |grad d|^2 / 2 * I_2 restricted to the plane.
    Mat3 S{};
    double grad_sq = 0.0;
};

/**
 * Stress from pointwise values f(r), f_r(r) at angle theta. With s = sin f / r
 * (s = f_r at r = 0) the planar block of S is
 *
 *     (f_r^2 - s^2)/2 * [[cos 2th, sin 2th], [sin 2th, -cos 2th]],
 *
 * and S_33 = -(f_r^2 + s^2)/2.
 */
inline StressEval stress_from_values(double f, double f_r, double r, double theta) {
    const double s = r == 0.0 ? f_r : std::sin(f) / r;
    const double a = f_r * f_r;
    const double b = s * s;
    const double c2 = std::cos(2.0 * theta);
    const double s2 = std::sin(2.0 * theta);
    StressEval e;
    e.grad_sq = a + b;
    const double half_diff = 0.5 * (a - b);
    e.S[0][0] = half_diff * c2;
    e.S[1][1] = -half_diff * c2;
    e.S[0][1] = e.S[1][0] = half_diff * s2;
    e.S[2][2] = -0.5 * e.grad_sq;
    e.dd = e.S;
    for (int k = 0; k < 3; ++k) e.dd[k][k] += 0.5 * e.grad_sq;
    e.dd[2][2] = 0.0;
    return e;
}

/// Quadratic interpolation of a profile and its derivative at r from the three
/// nearest grid nodes.
inline std::pair<double, double> interpolate_profile(std::span<const double> phi, const RadialGrid& grid, double r) {
    grid.check_length(phi, "interpolate_profile");
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("interpolate_profile: r must lie in [0,1]");
    const auto nodes = grid.nodes();
    std::size_t i = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), r) - nodes.begin());
    i = std::clamp<std::size_t>(i, 1, nodes.size() - 2);
    const std::size_t k = i - 1;
    const double x0 = nodes[k], x1 = nodes[k + 1], x2 = nodes[k + 2];
    const double l0 = (r - x1) * (r - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (r - x0) * (r - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (r - x0) * (r - x1) / ((x2 - x0) * (x2 - x1));
    const double d0 = ((r - x1) + (r - x2)) / ((x0 - x1) * (x0 - x2));
    const double d1 = ((r - x0) + (r - x2)) / ((x1 - x0) * (x1 - x2));
    const double d2 = ((r - x0) + (r - x1)) / ((x2 - x0) * (x2 - x1));
    return {l0 * phi[k] + l1 * phi[k + 1] + l2 * phi[k + 2], d0 * phi[k] + d1 * phi[k + 1] + d2 * phi[k + 2]};
}

inline StressEval stress_tensor(std::span<const double> phi, const RadialGrid& grid, double r, double theta) {
    const auto [f, fr] = interpolate_profile(phi, grid, r);
    return stress_from_values(r == 0.0 ? 0.0 : f, fr, r, theta);
}

// ---------------------------------------------------------------------------
// Pressure

struct PressureProfile {
    std::vector<double> radii;
    /// Radial part Q(r_i), including the gauge constant c2.
    Field Q;
    double c1 = 0.0;
    double c2 = 0.0;

    /// Axial part R(z) = -2 z^2 + c1.
    double R(double z) const noexcept { return -2.0 * z * z + c1; }
    double P(std::size_t i, double z) const { return Q[i] + R(z); }
};

/**
 * Q(r) = -int_0^r tau(phi) phi_r dr - r^2/2 + c2 by cumulative trapezoid.
 * Without `phi_t` the tension is taken from the spatial stencils; with it the
 * integrand uses tau = phi_t + r phi_r, which holds along solutions.
 */
inline PressureProfile pressure_profiles(std::span<const double> phi, const RadialGrid& grid, double c1, double c2,
                                         std::optional<std::span<const double>> phi_t = std::nullopt) {
    grid.check_length(phi, "pressure_profiles");
    const Field pr = grid.d1(phi);
    Field tau;
    if (phi_t) {
        grid.check_length(*phi_t, "pressure_profiles");
        tau.resize(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) tau[i] = (*phi_t)[i] + grid[i] * pr[i];
        tau[0] = 0.0;
    } else {
        tau = tension(phi, grid);
    }
    Field integrand(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) integrand[i] = tau[i] * pr[i];
    const Field cum = grid.cumulative_integral(integrand);

    PressureProfile out;
    out.radii.assign(grid.nodes().begin(), grid.nodes().end());
    out.c1 = c1;
    out.c2 = c2;
    out.Q.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) out.Q[i] = -cum[i] - 0.5 * grid[i] * grid[i] + c2;
    return out;
}

// ---------------------------------------------------------------------------
// Energy ledger

struct QuadratureSpec {
    /// Nodes (or intervals) per dimension for the velocity integrals.
    std::size_t n = 64;
    QuadratureRule rule = QuadratureRule::simpson;
};

struct EnergyLedger {
    double grad_u_sq = 0.0;
    double convective = 0.0;
    double grad_d_sq = 0.0;
    double tension_sq = 0.0;
    /// Gauge-invariant total of P u.nu over the boundary.
    double boundary_flux = 0.0;
    /// Per-face contributions; each depends on the gauge constants.
    double flux_lateral = 0.0;
    double flux_top = 0.0;
    double flux_bottom = 0.0;
};

/// Integral over the cylinder of F(x,y,z) by a tensor rule in (r, theta, z).
template <typename F>
double integrate_cylinder(F&& f, const QuadratureSpec& q) {
    const Rule1D rr = composite_rule(q.rule, 0.0, 1.0, q.n);
    const Rule1D zz = composite_rule(q.rule, 0.0, 1.0, q.n);
    const Rule1D tt = periodic_rule(2.0 * std::numbers::pi, q.n);
    std::vector<double> cs(tt.size()), sn(tt.size());
    for (std::size_t j = 0; j < tt.size(); ++j) {
        cs[j] = std::cos(tt.x[j]);
        sn[j] = std::sin(tt.x[j]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < zz.size(); ++k) {
        double slab = 0.0;
        for (std::size_t i = 0; i < rr.size(); ++i) {
            const double r = rr.x[i];
            double ring = 0.0;
            for (std::size_t j = 0; j < tt.size(); ++j) ring += tt.w[j] * f(r * cs[j], r * sn[j], zz.x[k]);
            slab += rr.w[i] * r * ring;
        }
        total += zz.w[k] * slab;
    }
    return total;
}

inline EnergyLedger energy_ledger(std::span<const double> phi, const RadialGrid& grid, const PressureProfile& pressure,
                                  const QuadratureSpec& q = {}) {
    if (q.n < 16) throw InvalidArgument("energy_ledger: quadrature resolution must be >= 16");
    grid.check_length(phi, "energy_ledger");
    if (pressure.Q.size() != phi.size()) throw InvalidArgument("energy_ledger: pressure profile size mismatch");

    EnergyLedger e;
    e.grad_u_sq = integrate_cylinder(
        [](double x, double y, double z) {
            const Mat3 J = velocity_gradient(x, y, z);
            double s = 0.0;
            for (const auto& row : J)
                for (double v : row) s += v * v;
            return s;
        },
        q);
    e.convective = integrate_cylinder(
        [](double x, double y, double z) {
            const Vec3 u = velocity(x, y, z);
            const Mat3 J = velocity_gradient(x, y, z);
            double s = 0.0;
            for (int j = 0; j < 3; ++j) {
                double g = 0.0; // d/dx_j (|u|^2 / 2)
                for (int i = 0; i < 3; ++i) g += u[i] * J[i][j];
                s += u[j] * g;
            }
            return s;
        },
        q);

    // Profile integrals: radial trapezoid on the solver grid, theta and z exact.
    const Rule1D zz = composite_rule(q.rule, 0.0, 1.0, q.n);
    double z_len = 0.0;
    for (double w : zz.w) z_len += w;
    const double two_pi = 2.0 * std::numbers::pi;

    Field gd = grad_d_squared(phi, grid);
    Field tn = tension(phi, grid);
    Field qr(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        gd[i] *= grid[i];
        tn[i] = tn[i] * tn[i] * grid[i];
        qr[i] = pressure.Q[i] * grid[i];
    }
    e.grad_d_sq = two_pi * z_len * grid.integrate(gd);
    e.tension_sq = two_pi * z_len * grid.integrate(tn);

    // Lateral face r = 1: u.nu = 1. Top z = 1: u.nu = -2. Bottom z = 0: u.nu = 0.
    double lateral = 0.0;
    for (std::size_t k = 0; k < zz.size(); ++k) lateral += zz.w[k] * (pressure.Q.back() + pressure.R(zz.x[k]));
    e.flux_lateral = two_pi * lateral;
    e.flux_top = -2.0 * two_pi * (grid.integrate(qr) + 0.5 * pressure.R(1.0));
    e.flux_bottom = 0.0;
    e.boundary_flux = e.flux_lateral + e.flux_top + e.flux_bottom;
    return e;
}

/// 6 pi + 13 pi / 6 - flux in its general form: grad_u_sq - convective - boundary_flux.
/// The energy dissipation inequality holds iff this is <= 0.
inline double dissipation_balance(const EnergyLedger& e) {
    return e.grad_u_sq - e.convective - e.boundary_flux;
}

inline void write_ledger_header(std::ostream& os) { os << "t,grad_u_sq,convective,grad_d_sq,tension_sq,boundary_flux\n"; }

inline void write_ledger_row(std::ostream& os, double t, const EnergyLedger& e) {
    csv::row(os, t, e.grad_u_sq, e.convective, e.grad_d_sq, e.tension_sq, e.boundary_flux);
}

} // namespace nematic
