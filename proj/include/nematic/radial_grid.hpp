#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nematic/errors.hpp"

namespace nematic {

/// Samples of a scalar field, one entry per grid node.
using Field = std::vector<double>;

/**
 * Static mesh on [0,1] with nodes r_i = (i/n)^p, clustered toward r = 0 for
 * p > 1, together with 3-point finite-difference weights.
 *
 * Interior nodes use the centered nonuniform stencil (i-1, i, i+1); the two
 * endpoints use one-sided stencils on the three nearest nodes. Every stencil
 * differentiates quadratics exactly.
 */
class RadialGrid {
public:
    /// Three weights applied to the samples at `first`, `first+1`, `first+2`.
    struct Stencil {
        std::size_t first = 0;
        std::array<double, 3> w{};
    };

    RadialGrid(std::size_t cells, double grading_exponent)
        : grading_(grading_exponent)
    {
        if (cells < 2) {
            throw InvalidArgument("make_grid: need at least 2 cells, got " + std::to_string(cells));
        }
        if (!(grading_exponent >= 1.0)) {
            throw InvalidArgument("make_grid: grading exponent must be >= 1, got " +
                                  std::to_string(grading_exponent));
        }
        nodes_.resize(cells + 1);
        const double n = static_cast<double>(cells);
        for (std::size_t i = 0; i <= cells; ++i) {
            const double s = static_cast<double>(i) / n;
            nodes_[i] = grading_exponent == 1.0 ? s : std::pow(s, grading_exponent);
        }
        nodes_.front() = 0.0;
        nodes_.back() = 1.0;
        build_stencils();
    }

    std::size_t cells() const noexcept { return nodes_.size() - 1; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double grading_exponent() const noexcept { return grading_; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    double operator[](std::size_t i) const noexcept { return nodes_[i]; }

    const Stencil& d1_stencil(std::size_t i) const noexcept { return d1_[i]; }
    const Stencil& d2_stencil(std::size_t i) const noexcept { return d2_[i]; }

    /// First derivative at a single node.
    double d1_at(std::span<const double> values, std::size_t i) const noexcept {
        return apply(d1_[i], values);
    }
    double d2_at(std::span<const double> values, std::size_t i) const noexcept {
        return apply(d2_[i], values);
    }

    Field d1(std::span<const double> values) const { return apply_all(d1_, values, "d1"); }
    Field d2(std::span<const double> values) const { return apply_all(d2_, values, "d2"); }

    /// Trapezoidal rule over the grid nodes.
    double integrate(std::span<const double> values) const {
        check_length(values, "integrate");
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            sum += 0.5 * (nodes_[i + 1] - nodes_[i]) * (values[i] + values[i + 1]);
        }
        return sum;
    }

    /// Running trapezoidal integral from r = 0; entry i is the integral up to r_i.
    Field cumulative_integral(std::span<const double> values) const {
        check_length(values, "cumulative_integral");
        Field out(nodes_.size(), 0.0);
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            out[i] = out[i - 1] + 0.5 * (nodes_[i] - nodes_[i - 1]) * (values[i - 1] + values[i]);
        }
        return out;
    }

    /// Evaluate a function of r at every node.
    template <typename F>
    Field sample(F&& f) const {
        Field out(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = f(nodes_[i]);
        return out;
    }

    void check_length(std::span<const double> values, const char* op) const {
        if (values.size() != nodes_.size()) {
            throw InvalidArgument(std::string(op) + ": expected " + std::to_string(nodes_.size()) +
                                  " samples, got " + std::to_string(values.size()));
        }
    }

private:
    // Derivative weights sum to zero, so apply them to differences from the
    // middle sample; avoids cancellation when the weights are ~1/h^2.
    static double apply(const Stencil& s, std::span<const double> v) noexcept {
        const double m = v[s.first + 1];
        return s.w[0] * (v[s.first] - m) + s.w[2] * (v[s.first + 2] - m);
    }

    Field apply_all(const std::vector<Stencil>& st, std::span<const double> values, const char* op) const {
        check_length(values, op);
        Field out(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) out[i] = apply(st[i], values);
        return out;
    }

    // Derivatives at x of the quadratic interpolant through (x0, x1, x2).
    static Stencil lagrange_d1(std::size_t first, double x, double x0, double x1, double x2) {
        Stencil s;
        s.first = first;
        s.w[0] = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
        s.w[1] = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
        s.w[2] = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
        return s;
    }

    static Stencil lagrange_d2(std::size_t first, double x0, double x1, double x2) {
        Stencil s;
        s.first = first;
        s.w[0] = 2.0 / ((x0 - x1) * (x0 - x2));
        s.w[1] = 2.0 / ((x1 - x0) * (x1 - x2));
        s.w[2] = 2.0 / ((x2 - x0) * (x2 - x1));
        return s;
    }

    void build_stencils() {
        const std::size_t m = nodes_.size();
        d1_.resize(m);
        d2_.resize(m);
        const auto& r = nodes_;
        d1_[0] = lagrange_d1(0, r[0], r[0], r[1], r[2]);
        d2_[0] = lagrange_d2(0, r[0], r[1], r[2]);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            // Centered form written in spacings to avoid cancellation.
            const double hm = r[i] - r[i - 1];
            const double hp = r[i + 1] - r[i];
            Stencil a;
            a.first = i - 1;
            a.w = {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
            d1_[i] = a;
            Stencil b;
            b.first = i - 1;
            b.w = {2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
            d2_[i] = b;
        }
        d1_[m - 1] = lagrange_d1(m - 3, r[m - 1], r[m - 3], r[m - 2], r[m - 1]);
        d2_[m - 1] = lagrange_d2(m - 3, r[m - 3], r[m - 2], r[m - 1]);
    }

    double grading_;
    std::vector<double> nodes_;
    std::vector<Stencil> d1_;
    std::vector<Stencil> d2_;
};

/// Build a grid with `n` cells and node law r_i = (i/n)^grading_exponent.
inline RadialGrid make_grid(std::size_t n, double grading_exponent = 2.0) {
    return RadialGrid(n, grading_exponent);
}

} // namespace nematic
