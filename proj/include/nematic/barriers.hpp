#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nematic/csv.hpp"
#include "nematic/errors.hpp"
#include "nematic/radial_grid.hpp"

namespace nematic {

/**
 * Parameters of the blow-up subsolution
 *
 *     f(r,t) = 2 atan(r / (e^t beta(t))) + 2 atan(r^a / (e^{a t} mu)),   a = 1 + eps,
 *     beta'(t) = -delta e^{-2t} beta^eps,  beta(0) = beta0,
 *
 * and the target boundary value phi1 = phi_0(1) > pi of the initial data.
 * `mu` is the barrier constant, unrelated to the fluid viscosity.
 */
struct BarrierParams {
    double eps = 0.5;
    double mu = 20.0;
    double delta = 1.0;
    double beta0 = 1.0 / 64.0;
    double phi1 = std::numbers::pi + 0.5;

    double a() const noexcept { return 1.0 + eps; }

    /// Throws ConstraintViolation naming the first inequality that fails.
    void validate() const;
};

/// max_{s>0} s^{2-eps} / (1 + s^2), attained at s* = sqrt((2-eps)/eps).
inline double m_eps(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("m_eps: eps must lie in (0,1]");
    const double s = std::sqrt((2.0 - eps) / eps);
    return std::pow(s, 2.0 - eps) / (1.0 + s * s);
}

/// Largest delta for which the subsolution inequality holds (unit relaxation constant).
inline double delta_bound(double eps, double mu) {
    return mu * eps / (m_eps(eps) * (mu * mu + 1.0));
}

inline void BarrierParams::validate() const {
    if (!(eps > 0.0 && eps < 1.0)) throw ConstraintViolation("barrier params: eps must lie in (0,1)");
    if (!(mu > 0.0) || !(delta > 0.0) || !(beta0 > 0.0)) {
        throw ConstraintViolation("barrier params: mu, delta and beta0 must be positive");
    }
    if (!(phi1 > std::numbers::pi)) throw ConstraintViolation("barrier params: phi1 must exceed pi");
    const double lhs = 2.0 * std::pow(beta0, 1.0 - eps);
    if (!(lhs < delta * (1.0 - eps))) {
        throw ConstraintViolation("finite vanishing time condition violated: need 2*beta0^(1-eps) = " + csv::num(lhs) +
                                  " < delta*(1-eps) = " + csv::num(delta * (1.0 - eps)));
    }
    const double bound = delta_bound(eps, mu);
    if (!(delta <= bound)) {
        throw ConstraintViolation("subsolution delta bound violated: need delta = " + csv::num(delta) +
                                  " <= mu*eps/(M(eps)(mu^2+1)) = " + csv::num(bound));
    }
    const double cap = 2.0 * std::atan(1.0 / mu);
    if (!(cap <= phi1 - std::numbers::pi)) {
        throw ConstraintViolation("boundary dominance condition violated: need 2*atan(1/mu) = " + csv::num(cap) +
                                  " <= phi1 - pi = " + csv::num(phi1 - std::numbers::pi));
    }
    if (!(cap <= std::acos(1.0 / (1.0 + eps)))) {
        throw ConstraintViolation("theta cone condition cos(theta) >= 1/(1+eps) violated: need 2*atan(1/mu) = " + csv::num(cap) +
                                  " <= acos(1/(1+eps)) = " + csv::num(std::acos(1.0 / (1.0 + eps))));
    }
}

/**
 * Default parameter set used by the acceptance runs: eps = 1/2, mu = 20,
 * delta at the subsolution bound (capped at 1), beta0 the largest power of
 * two with 2 beta0^(1-eps) <= 0.5 delta (1-eps), phi1 = pi + 1/2.
 */
inline BarrierParams validated_params() {
    BarrierParams p;
    p.eps = 0.5;
    p.mu = 20.0;
    p.delta = std::min(1.0, delta_bound(p.eps, p.mu));
    p.phi1 = std::numbers::pi + 0.5;
    const double limit = 0.5 * p.delta * (1.0 - p.eps);
    double b = 1.0;
    while (2.0 * std::pow(b, 1.0 - p.eps) > limit) b *= 0.5;
    p.beta0 = b;
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// Static barriers

/// sign * 2 atan(r/c): harmonic profiles used as global upper/lower barriers.
inline double supersolution(double r, double c, int sign = +1) {
    if (!(c > 0.0)) throw InvalidArgument("supersolution: c must be > 0");
    if (sign != 1 && sign != -1) throw InvalidArgument("supersolution: sign must be +1 or -1");
    return sign * 2.0 * std::atan(r / c);
}

/// phi_t + r phi_r - phi_rr - phi_r/r + sin(2 phi)/(2 r^2) for phi = sign * 2 atan(r/c),
/// evaluated from closed-form derivatives.
inline double supersolution_residual(double r, double c, int sign = +1) {
    const double phi = supersolution(r, c, sign);
    const double den = c * c + r * r;
    const double pr = sign * 2.0 * c / den;
    const double prr = -sign * 4.0 * c * r / (den * den);
    if (r == 0.0) return 0.0;
    return r * pr - prr - pr / r + std::sin(2.0 * phi) / (2.0 * r * r);
}

// ---------------------------------------------------------------------------
// beta(t) and the vanishing time

inline double beta_ode_rhs(double t, double beta, const BarrierParams& p) {
    if (beta <= 0.0) return 0.0;
    return -p.delta * std::exp(-2.0 * t) * std::pow(beta, p.eps);
}

/// Vanishing time T0 of beta(t).
inline double blowup_time(const BarrierParams& p) {
    const double k = p.delta * (1.0 - p.eps);
    const double b = 2.0 * std::pow(p.beta0, 1.0 - p.eps);
    if (!(p.eps > 0.0 && p.eps < 1.0) || !(p.delta > 0.0) || !(p.beta0 > 0.0)) {
        throw ConstraintViolation("blowup_time: need eps in (0,1), delta > 0, beta0 > 0");
    }
    if (!(b < k)) {
        throw ConstraintViolation("finite vanishing time condition violated: need 2*beta0^(1-eps) = " + csv::num(b) +
                                  " < delta*(1-eps) = " + csv::num(k));
    }
    return 0.5 * std::log(k / (k - b));
}

/// beta(t) from beta^{1-eps} = delta(1-eps)/2 (e^{-2t} - 1) + beta0^{1-eps}.
inline double beta_closed_form(double t, const BarrierParams& p) {
    if (!(t >= 0.0)) throw DomainError("beta_closed_form: t must be >= 0");
    const double t0 = blowup_time(p);
    if (t > t0) throw DomainError("beta_closed_form: t = " + csv::num(t) + " exceeds T0 = " + csv::num(t0));
    const double q = 0.5 * p.delta * (1.0 - p.eps) * std::expm1(-2.0 * t) + std::pow(p.beta0, 1.0 - p.eps);
    if (q <= 0.0) return 0.0;
    return std::pow(q, 1.0 / (1.0 - p.eps));
}

/// Classical RK4 for beta' = -delta e^{-2t} beta^eps from t = 0 with `steps`
/// uniform steps up to t_end; returns beta at every step (steps + 1 values).
inline std::vector<double> beta_rk4(double t_end, std::size_t steps, const BarrierParams& p) {
    if (steps == 0 || !(t_end >= 0.0)) throw InvalidArgument("beta_rk4: need steps > 0 and t_end >= 0");
    const double h = t_end / static_cast<double>(steps);
    std::vector<double> out(steps + 1);
    double b = p.beta0;
    out[0] = b;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        const double k1 = beta_ode_rhs(t, b, p);
        const double k2 = beta_ode_rhs(t + 0.5 * h, b + 0.5 * h * k1, p);
        const double k3 = beta_ode_rhs(t + 0.5 * h, b + 0.5 * h * k2, p);
        const double k4 = beta_ode_rhs(t + h, b + h * k3, p);
        b = std::max(0.0, b + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        out[k + 1] = b;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Subsolution

/// theta(r,t) = 2 atan(r^a / (e^{a t} mu)).
inline double theta_profile(double r, double t, const BarrierParams& p) {
    const double a = p.a();
    return 2.0 * std::atan(std::pow(r, a) * std::exp(-a * t) / p.mu);
}

/// d theta / dr.
inline double theta_profile_r(double r, double t, const BarrierParams& p) {
    if (r == 0.0) return 0.0;
    const double a = p.a();
    const double ra = std::pow(r, a);
    const double eat = std::exp(a * t);
    return 2.0 * a * p.mu * (ra / r) * eat / (p.mu * p.mu * eat * eat + ra * ra);
}

struct SubsolutionEval {
    double value = 0.0;
    double f_r = 0.0;
    /// f_t + r f_r - f_rr - f_r/r + sin(2f)/(2r^2); nonpositive for admissible parameters.
    double residual = 0.0;
};

/**
 * Closed-form evaluation of the subsolution. The residual uses
 *
 *     f_t + r f_r = 2 delta r e^{-t} beta^eps / (e^{2t} beta^2 + r^2),
 *     tau(f)      = (a^2 sin th cos th - cos(2 phi + th) sin th) / r^2,
 *
 * where phi is the rescaled harmonic profile and th = theta(r,t). At r = 0 the
 * residual is its continuous extension 0.
 */
inline SubsolutionEval subsolution_eval(double r, double t, const BarrierParams& p) {
    const double t0 = blowup_time(p);
    if (!(t >= 0.0 && t < t0)) {
        throw DomainError("subsolution_eval: t = " + csv::num(t) + " outside [0, T0 = " + csv::num(t0) + ")");
    }
    const double beta = beta_closed_form(t, p);
    const double scale = std::exp(t) * beta;
    const double phi = 2.0 * std::atan(r / scale);
    const double th = theta_profile(r, t, p);

    SubsolutionEval out;
    out.value = phi + th;
    out.f_r = 2.0 * scale / (scale * scale + r * r) + theta_profile_r(r, t, p);
    if (r > 0.0) {
        const double a = p.a();
        const double transport = 2.0 * p.delta * r * std::exp(-t) * std::pow(beta, p.eps) / (scale * scale + r * r);
        const double s = std::sin(th);
        const double tau = (a * a * s * std::cos(th) - std::cos(2.0 * phi + th) * s) / (r * r);
        out.residual = transport - tau;
    }
    return out;
}

/// Subsolution value f(r,t).
inline double subsolution(double r, double t, const BarrierParams& p) {
    return subsolution_eval(r, t, p).value;
}

/// f_r(0,t) = 2 / (e^t beta(t)).
inline double subsolution_axis_gradient(double t, const BarrierParams& p) {
    return 2.0 / (std::exp(t) * beta_closed_form(t, p));
}

/**
 * Admissible blow-up initial data phi_0(r) = 2 atan(r/beta0) + c r with
 * c = phi1 - 2 atan(1/beta0), so that phi_0(0) = 0, phi_0(1) = phi1, and
 * phi_0 >= f(., 0) on the grid (checked).
 */
inline Field make_blowup_initial_data(const BarrierParams& p, const RadialGrid& grid) {
    p.validate();
    const double c = p.phi1 - 2.0 * std::atan(1.0 / p.beta0);
    Field phi0 = grid.sample([&](double r) { return 2.0 * std::atan(r / p.beta0) + c * r; });
    phi0.front() = 0.0;
    phi0.back() = p.phi1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f0 = subsolution(grid[i], 0.0, p);
        if (phi0[i] < f0) {
            throw ConstraintViolation("blow-up initial data does not dominate f(.,0) at r = " + csv::num(grid[i]) +
                                      " (margin " + csv::num(phi0[i] - f0) + ")");
        }
    }
    return phi0;
}

/// CSV `r,t,f,f_r,residual` over the product of `radii` and `times`.
inline void write_barrier_csv(std::ostream& os, std::span<const double> radii, std::span<const double> times,
                              const BarrierParams& p) {
    os << "r,t,f,f_r,residual\n";
    for (double t : times) {
        for (double r : radii) {
            const auto e = subsolution_eval(r, t, p);
            csv::row(os, r, t, e.value, e.f_r, e.residual);
        }
    }
}

} // namespace nematic
