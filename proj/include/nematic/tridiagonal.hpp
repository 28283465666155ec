#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nematic {

/// Tridiagonal system with sub-, main- and super-diagonals of equal length;
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const noexcept { return diag.size(); }
};

/**
 * Thomas algorithm. Solves in place into `rhs`; returns false (leaving rhs
 * unspecified) when a pivot vanishes or the result is not finite.
 * `scratch` is resized as needed so repeated solves do not allocate.
 */
inline bool solve_tridiagonal(const Tridiagonal& a, std::span<double> rhs, std::vector<double>& scratch) {
    const std::size_t n = a.size();
    if (n == 0) return true;
    scratch.resize(n);
    double pivot = a.diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) return false;
    scratch[0] = a.upper[0] / pivot;
    rhs[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = a.diag[i] - a.lower[i] * scratch[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) return false;
        scratch[i] = a.upper[i] / pivot;
        rhs[i] = (rhs[i] - a.lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(rhs[i])) return false;
    }
    return true;
}

} // namespace nematic
