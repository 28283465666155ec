#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "nematic/errors.hpp"

namespace nematic {

/// Nodes and weights of a 1D rule.
struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const noexcept { return x.size(); }
};

enum class QuadratureRule { midpoint, simpson };

inline const char* to_string(QuadratureRule r) {
    return r == QuadratureRule::midpoint ? "midpoint" : "simpson";
}

/// Composite midpoint rule with n cells on [a,b].
inline Rule1D midpoint_rule(double a, double b, std::size_t n) {
    if (n == 0) throw InvalidArgument("midpoint_rule: need n >= 1");
    Rule1D q;
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.x.push_back(a + (static_cast<double>(i) + 0.5) * h);
        q.w.push_back(h);
    }
    return q;
}

/// Composite Simpson rule with n (even) intervals on [a,b].
inline Rule1D simpson_rule(double a, double b, std::size_t n) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("simpson_rule: need an even number of intervals");
    Rule1D q;
    const double h = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) {
        q.x.push_back(a + static_cast<double>(i) * h);
        const double c = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        q.w.push_back(c * h / 3.0);
    }
    return q;
}

inline Rule1D composite_rule(QuadratureRule rule, double a, double b, std::size_t n) {
    return rule == QuadratureRule::midpoint ? midpoint_rule(a, b, n) : simpson_rule(a, b, n);
}

/// n equispaced points on a period of length `period`; exact for trigonometric
/// polynomials of degree < n.
inline Rule1D periodic_rule(double period, std::size_t n) {
    if (n == 0) throw InvalidArgument("periodic_rule: need n >= 1");
    Rule1D q;
    const double h = period / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.x.push_back(static_cast<double>(i) * h);
        q.w.push_back(h);
    }
    return q;
}

/// Gauss-Legendre rule with n points on [a,b] (Newton iteration on P_n).
inline Rule1D gauss_legendre(double a, double b, std::size_t n) {
    if (n == 0) throw InvalidArgument("gauss_legendre: need n >= 1");
    Rule1D q;
    q.x.resize(n);
    q.w.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = nn * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
        q.x[i] = mid - half * z;
        q.x[n - 1 - i] = mid + half * z;
        q.w[i] = half * wt;
        q.w[n - 1 - i] = half * wt;
    }
    return q;
}

} // namespace nematic
