#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <vector>

#include "nematic/csv.hpp"
#include "nematic/errors.hpp"
#include "nematic/quadrature.hpp"

namespace nematic {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

namespace hopf_detail {

inline double dot4(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

// Pole on S^3 with H(pole) = e_3, and the unit vector defining the
// reflection that swaps it with the north pole (0,0,0,1).
inline constexpr Vec4 pole{0.5, 0.5, 0.5, 0.5};
inline Vec4 reflector() {
    Vec4 v{-0.5, -0.5, -0.5, 0.5};
    return v; // N - pole, already of unit length
}

inline Vec4 reflect(const Vec4& p) {
    const Vec4 v = reflector();
    const double s = 2.0 * dot4(v, p);
    return {p[0] - s * v[0], p[1] - s * v[1], p[2] - s * v[2], p[3] - s * v[3]};
}

// Jacobian (4x3) of the inverse chart at y.
inline std::array<std::array<double, 3>, 4> chart_inverse_jacobian(const Vec3& y) {
    const double q = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    const double den = 1.0 + q;
    // Unreflected map X(y) = (2y, q-1)/(1+q).
    std::array<std::array<double, 3>, 4> J{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) J[i][j] = 2.0 * ((i == j ? 1.0 : 0.0) * den - 2.0 * y[i] * y[j]) / (den * den);
    for (int j = 0; j < 3; ++j) J[3][j] = 4.0 * y[j] / (den * den);
    // Apply the reflection column-wise.
    const Vec4 v = reflector();
    for (int j = 0; j < 3; ++j) {
        const double s = 2.0 * (v[0] * J[0][j] + v[1] * J[1][j] + v[2] * J[2][j] + v[3] * J[3][j]);
        for (int i = 0; i < 4; ++i) J[i][j] -= s * v[i];
    }
    return J;
}

// Rows are the Euclidean gradients of the three components of H on R^4.
inline std::array<Vec4, 3> hopf_gradient(const Vec4& x) {
    return {{{2 * x[0], 2 * x[1], -2 * x[2], -2 * x[3]},
             {2 * x[2], -2 * x[3], 2 * x[0], -2 * x[1]},
             {2 * x[3], 2 * x[2], 2 * x[1], 2 * x[0]}}};
}

} // namespace hopf_detail

/// Base point e = (0,0,1) of the target sphere.
inline constexpr Vec3 hopf_base_point{0.0, 0.0, 1.0};

/// H(z,w) = (|z|^2 - |w|^2, Re 2zw, Im 2zw) on the unit sphere of C^2.
inline Vec3 hopf_map(std::complex<double> z, std::complex<double> w) {
    const double n = std::norm(z) + std::norm(w);
    if (!(std::abs(n - 1.0) <= 1e-10)) throw InvalidArgument("hopf_map: (z,w) is not on the unit sphere");
    const std::complex<double> zw = 2.0 * z * w;
    return {std::norm(z) - std::norm(w), zw.real(), zw.imag()};
}

/// Same map with z = x0 + i x1, w = x2 + i x3.
inline Vec3 hopf_map(const Vec4& x) { return hopf_map({x[0], x[1]}, {x[2], x[3]}); }

/// Stereographic chart S^3 \ {pole} -> R^3 sending the pole to infinity.
inline Vec3 chart(const Vec4& p) {
    const Vec4 q = hopf_detail::reflect(p);
    const double den = 1.0 - q[3];
    if (!(den > 0.0)) throw InvalidArgument("chart: point is the projection pole");
    return {q[0] / den, q[1] / den, q[2] / den};
}

inline Vec4 chart_inverse(const Vec3& y) {
    const double q = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    if (std::isinf(q)) return hopf_detail::pole;
    const double den = 1.0 + q;
    return hopf_detail::reflect({2 * y[0] / den, 2 * y[1] / den, 2 * y[2] / den, (q - 1.0) / den});
}

/// Conformal dilation Psi_lambda = chart^-1 o (lambda .) o chart; the pole is fixed.
inline Vec4 psi_lambda(const Vec4& p, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("psi_lambda: lambda must be positive");
    const Vec4 q = hopf_detail::reflect(p);
    if (1.0 - q[3] <= 1e-300) return hopf_detail::pole;
    const Vec3 y = chart(p);
    return chart_inverse({lambda * y[0], lambda * y[1], lambda * y[2]});
}

/// Conformal factor of the round metric in the chart: g = rho^2 |dy|^2.
inline double chart_conformal_factor(const Vec3& y) { return 2.0 / (1.0 + y[0] * y[0] + y[1] * y[1] + y[2] * y[2]); }

/// Differential of G = H o chart^-1 at y (3x3, row = component).
inline std::array<Vec3, 3> chart_hopf_differential(const Vec3& y) {
    const auto J = hopf_detail::chart_inverse_jacobian(y);
    const auto gH = hopf_detail::hopf_gradient(chart_inverse(y));
    std::array<Vec3, 3> D{};
    for (int a = 0; a < 3; ++a)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 4; ++i) D[a][j] += gH[a][i] * J[i][j];
    return D;
}

/// |D(G(lambda .))|^2 at y, Euclidean in the chart, from the analytic differential.
inline double chart_energy_density(const Vec3& y, double lambda) {
    const auto D = chart_hopf_differential({lambda * y[0], lambda * y[1], lambda * y[2]});
    double s = 0.0;
    for (const auto& row : D)
        for (double v : row) s += v * v;
    return lambda * lambda * s;
}

/// Central-difference counterpart of chart_energy_density.
inline double chart_energy_density_fd(const Vec3& y, double lambda, double h = 1e-5) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
        Vec3 yp = y, ym = y;
        yp[j] += h;
        ym[j] -= h;
        const Vec3 fp = hopf_map(chart_inverse({lambda * yp[0], lambda * yp[1], lambda * yp[2]}));
        const Vec3 fm = hopf_map(chart_inverse({lambda * ym[0], lambda * ym[1], lambda * ym[2]}));
        for (int a = 0; a < 3; ++a) {
            const double d = (fp[a] - fm[a]) / (2.0 * h);
            s += d * d;
        }
    }
    return s;
}

/// |grad (H o Psi_lambda)|^2 at p for the round metric of S^3.
inline double energy_density_s3(const Vec4& p, double lambda) {
    const Vec3 y = chart(p);
    const double rho = chart_conformal_factor(y);
    return chart_energy_density(y, lambda) / (rho * rho);
}

/**
 * Dirichlet energy of H o Psi_lambda over S^3.
 *
 * Written in the chart the integral is int rho(y) |D G_lambda(y)|^2 dy; after
 * u = lambda y and the compactifying substitution |u| = tan(psi/2) it is
 * integrated with Gauss-Legendre in psi (4n nodes) and cos(theta) (n nodes)
 * and the periodic trapezoid in the azimuth (2n nodes).
 */
inline double dirichlet_energy_s3(double lambda, std::size_t n = 64) {
    if (!(lambda > 0.0)) throw InvalidArgument("dirichlet_energy_s3: lambda must be positive");
    if (n < 16) throw InvalidArgument("dirichlet_energy_s3: quadrature n must be >= 16");
    const Rule1D ps = gauss_legendre(0.0, std::numbers::pi, 4 * n);
    const Rule1D ct = gauss_legendre(-1.0, 1.0, n);
    const Rule1D az = periodic_rule(2.0 * std::numbers::pi, 2 * n);
    double total = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double half = 0.5 * ps.x[i];
        const double u = std::tan(half);
        const double jac = u * u * 0.5 / (std::cos(half) * std::cos(half));
        const double ul = u / lambda;
        const double weight = chart_conformal_factor({ul, 0.0, 0.0}) / lambda;
        double shell = 0.0;
        for (std::size_t j = 0; j < ct.size(); ++j) {
            const double c = ct.x[j];
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (std::size_t k = 0; k < az.size(); ++k) {
                const Vec3 y{u * s * std::cos(az.x[k]), u * s * std::sin(az.x[k]), u * c};
                shell += ct.w[j] * az.w[k] * chart_energy_density(y, 1.0);
            }
        }
        total += ps.w[i] * jac * weight * shell;
    }
    return total;
}

/// Closed form of the same energy reduced to one radial integral (oracle).
inline double dirichlet_energy_s3_radial(double lambda, std::size_t n = 4096) {
    const Rule1D ps = gauss_legendre(0.0, std::numbers::pi, n);
    double total = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double half = 0.5 * ps.x[i];
        const double u = std::tan(half);
        const double du = 0.5 / (std::cos(half) * std::cos(half));
        const double ul = u / lambda;
        total += ps.w[i] * du * u * u / ((1.0 + ul * ul) * (1.0 + u * u) * (1.0 + u * u));
    }
    return 256.0 * std::numbers::pi / lambda * total;
}

// ---------------------------------------------------------------------------
// Ball data

/// Radial diffeomorphism of the open unit ball onto R^3.
inline Vec3 ball_to_space(const Vec3& x) {
    const double q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (!(q < 1.0)) throw InvalidArgument("ball_to_space: point is not in the open unit ball");
    const double s = 1.0 / (1.0 - q);
    return {s * x[0], s * x[1], s * x[2]};
}

/// d0(x) = H(Psi_lambda(chart^-1(ball_to_space(x)))); equals e on and outside the unit sphere.
inline Vec3 hopf_ball_director(const Vec3& x, double lambda) {
    const double q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (q >= 1.0) return hopf_base_point;
    const Vec3 s = ball_to_space(x);
    return hopf_map(chart_inverse({lambda * s[0], lambda * s[1], lambda * s[2]}));
}

struct HopfData {
    double lambda = 1.0;
    std::vector<Vec3> points;
    std::vector<Vec3> d;
    std::vector<bool> boundary;
    /// (1/2) int_B |grad d0|^2.
    double energy_ball = 0.0;
    /// (1/2) lambda^-2 int_B |u|^2 for the companion velocity u = (-y, x, 0)(1 - |x|^2).
    double kinetic = 0.0;

    double total_energy() const noexcept { return energy_ball + kinetic; }
};

/// int_B |(-y, x, 0)(1 - |x|^2)|^2 dx.
inline double hopf_velocity_l2_sq() { return 64.0 * std::numbers::pi / 945.0; }

/**
 * (1/2) int_B |grad d0|^2. With x = r w the radial map is u = S(r) w,
 * S = lambda r/(1 - r^2), so |grad d0|^2 = S'^2 |DG w|^2 + (S/r)^2 (|DG|^2 - |DG w|^2).
 * The radius is parametrised through S = tan(psi/2) to resolve the
 * concentration at r ~ 1/lambda.
 */
inline double hopf_ball_energy(double lambda, std::size_t n = 48) {
    if (!(lambda >= 1.0)) throw InvalidArgument("hopf_ball_energy: lambda must be >= 1");
    if (n < 16) throw InvalidArgument("hopf_ball_energy: quadrature n must be >= 16");
    const Rule1D ps = gauss_legendre(0.0, std::numbers::pi, 4 * n);
    const Rule1D ct = gauss_legendre(-1.0, 1.0, n);
    const Rule1D az = periodic_rule(2.0 * std::numbers::pi, 2 * n);
    double total = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double half = 0.5 * ps.x[i];
        const double S = std::tan(half);
        const double dS = 0.5 / (std::cos(half) * std::cos(half));
        const double r = 2.0 * S / (lambda + std::sqrt(lambda * lambda + 4.0 * S * S));
        const double r2 = r * r;
        const double dr_dS = (1.0 - r2) * (1.0 - r2) / (lambda * (1.0 + r2));
        const double Sp = lambda * (1.0 + r2) / ((1.0 - r2) * (1.0 - r2));
        const double Sr = lambda / (1.0 - r2);
        double shell = 0.0;
        for (std::size_t j = 0; j < ct.size(); ++j) {
            const double c = ct.x[j];
            const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (std::size_t k = 0; k < az.size(); ++k) {
                const Vec3 w{sn * std::cos(az.x[k]), sn * std::sin(az.x[k]), c};
                const auto D = chart_hopf_differential({S * w[0], S * w[1], S * w[2]});
                double full = 0.0, radial = 0.0;
                for (const auto& row : D) {
                    const double dw = row[0] * w[0] + row[1] * w[1] + row[2] * w[2];
                    radial += dw * dw;
                    full += row[0] * row[0] + row[1] * row[1] + row[2] * row[2];
                }
                shell += ct.w[j] * az.w[k] * (Sp * Sp * radial + Sr * Sr * (full - radial));
            }
        }
        total += ps.w[i] * dS * dr_dS * r2 * shell;
    }
    return 0.5 * total;
}

/// Samples d0 on the points of a Cartesian grid of spacing 2/resolution inside
/// the ball plus a latitude-longitude net on the boundary sphere.
inline HopfData ball_data(double lambda, std::size_t resolution = 32, std::size_t energy_n = 48) {
    if (!(lambda >= 1.0)) throw InvalidArgument("ball_data: lambda must be >= 1");
    if (resolution < 4) throw InvalidArgument("ball_data: resolution must be >= 4");
    HopfData h;
    h.lambda = lambda;
    const double step = 2.0 / static_cast<double>(resolution);
    for (std::size_t i = 0; i <= resolution; ++i)
        for (std::size_t j = 0; j <= resolution; ++j)
            for (std::size_t k = 0; k <= resolution; ++k) {
                const Vec3 x{-1.0 + step * i, -1.0 + step * j, -1.0 + step * k};
                if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] >= 1.0) continue;
                h.points.push_back(x);
                h.d.push_back(hopf_ball_director(x, lambda));
                h.boundary.push_back(false);
            }
    const std::size_t nb = resolution;
    for (std::size_t i = 0; i <= nb; ++i) {
        const double th = std::numbers::pi * static_cast<double>(i) / static_cast<double>(nb);
        const std::size_t na = (i == 0 || i == nb) ? 1 : 2 * nb;
        for (std::size_t k = 0; k < na; ++k) {
            const double ph = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(na);
            h.points.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
            h.d.push_back(hopf_ball_director(h.points.back(), lambda));
            h.boundary.push_back(true);
        }
    }
    h.energy_ball = hopf_ball_energy(lambda, energy_n);
    h.kinetic = 0.5 / (lambda * lambda) * hopf_velocity_l2_sq();
    return h;
}

// ---------------------------------------------------------------------------
// Cap test

struct CapResult {
    double max_distance = 0.0;
    /// Image lies in the open hemisphere about the centre.
    bool nullhomotopic = false;
};

inline CapResult cap_test(const std::vector<Vec3>& d, const Vec3& centre = hopf_base_point) {
    CapResult out;
    for (const auto& v : d) {
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (std::abs(n - 1.0) > 1e-8) throw InvalidArgument("cap_test: samples must be unit vectors");
        const double c = std::clamp(v[0] * centre[0] + v[1] * centre[1] + v[2] * centre[2], -1.0, 1.0);
        out.max_distance = std::max(out.max_distance, std::acos(c));
    }
    out.nullhomotopic = out.max_distance < 0.5 * std::numbers::pi;
    return out;
}

inline CapResult cap_test(const HopfData& data, const Vec3& centre = hopf_base_point) { return cap_test(data.d, centre); }

inline void write_hopf_energy_header(std::ostream& os) { os << "lambda,energy_s3,energy_ball\n"; }

inline void write_hopf_energy_row(std::ostream& os, double lambda, double energy_s3, double energy_ball) {
    csv::row(os, lambda, energy_s3, energy_ball);
}

} // namespace nematic
