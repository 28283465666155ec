#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "nematic/barriers.hpp"
#include "nematic/verify.hpp"

using namespace nematic;

namespace {

Trajectory global_run(double amplitude, std::size_t n = 400, double t_end = 1.0) {
    const auto g = make_grid(n, 2.0);
    auto phi0 = g.sample([&](double r) { return amplitude * std::sin(0.5 * std::numbers::pi * r); });
    phi0.front() = 0.0;
    phi0.back() = amplitude;
    return run(phi0, t_end, g, SolverConfig{});
}

/// Smallest c with 2 atan(r/c) >= phi(r) at every node (bisection).
double dominating_c(const Field& phi, const RadialGrid& g) {
    double lo = 1e-6, hi = 1.0;
    auto ok = [&](double c) {
        for (std::size_t i = 0; i < g.size(); ++i)
            if (supersolution(g[i], c) < phi[i]) return false;
        return true;
    };
    for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

TEST(Comparison, GlobalRunLiesBetweenStaticBarriers) {
    // 2 atan(r/c) < pi, so the data must stay strictly below pi at r = 1.
    const double amp = std::numbers::pi - 0.1;
    const auto g = make_grid(400, 2.0);
    const auto traj = global_run(amp);
    const double c = dominating_c(traj.snapshots.front().phi, g);
    const BarrierFn upper = [c](double r, double) { return supersolution(r, c); };
    const BarrierFn lower = [](double r, double) { return supersolution(r, 1e6, -1); };
    const auto rep = comparison_check(traj, g, lower, upper, 1e-6);
    EXPECT_EQ(rep.max_violation, 0.0);
}

TEST(Comparison, ViolationDetectedAndLocated) {
    const auto g = make_grid(100, 1.0);
    const auto traj = global_run(1.0, 100, 0.1);
    const BarrierFn upper = [](double r, double) { return 0.5 * r; };
    const auto rep = comparison_check(traj, g, {}, upper, 0.0);
    EXPECT_GT(rep.max_violation, 0.0);
    EXPECT_GT(rep.r, 0.0);
}

TEST(Comparison, MonotoneInTolerance) {
    const auto g = make_grid(100, 1.0);
    const auto traj = global_run(1.0, 100, 0.1);
    const BarrierFn upper = [](double r, double) { return 0.8 * r; };
    double prev = INFINITY;
    for (double tol : {0.0, 1e-3, 1e-2, 0.1, 1.0}) {
        const double v = comparison_check(traj, g, {}, upper, tol).max_violation;
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_EQ(prev, 0.0);
}

TEST(Comparison, RespectsTimeWindow) {
    const auto g = make_grid(100, 1.0);
    const auto traj = global_run(1.0, 100, 0.2);
    const BarrierFn upper = [](double r, double t) { return t > 0.1 ? -1.0 : 10.0 + r; };
    EXPECT_EQ(comparison_check(traj, g, {}, upper, 0.0, 0.1).max_violation, 0.0);
    EXPECT_GT(comparison_check(traj, g, {}, upper, 0.0).max_violation, 0.0);
}

TEST(MaxPrinciple, GlobalExistenceRun) {
    const auto g = make_grid(800, 2.0);
    const auto traj = global_run(std::numbers::pi, 800, 2.0);
    const auto rep = max_principle_check(traj, g);
    EXPECT_LE(rep.max_violation, 1e-6);
}

TEST(MaxPrinciple, FlagsOvershoot) {
    const auto g = make_grid(50, 1.0);
    Trajectory traj;
    Field phi(g.size(), 0.0);
    phi[10] = 4.0;
    traj.snapshots.push_back({0.5, phi});
    const auto rep = max_principle_check(traj, g);
    EXPECT_NEAR(rep.max_violation, 4.0 - std::numbers::pi, 1e-15);
    EXPECT_EQ(rep.r, g[10]);
}

TEST(Holder, ConstantAndKnownPair) {
    std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {0, 0.25, 0}};
    std::vector<Vec3> same(3, Vec3{0, 0, 1});
    EXPECT_EQ(holder_seminorm(pts, same, 0.5), 0.0);
    std::vector<Vec3> vals{{0, 0, 1}, {0, 0, 1}, {1, 0, 0}};
    // |(1,0,0)-(0,0,1)| = sqrt 2 over distance 1/4 (vs 1/4 and sqrt(1+1/16)).
    const double want = std::sqrt(2.0) / std::sqrt(0.25);
    EXPECT_NEAR(holder_seminorm(pts, vals, 0.5), want, 1e-12);
}

TEST(Holder, RejectsBadInput) {
    std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}};
    std::vector<Vec3> vals{{0, 0, 1}, {0, 0, 2}};
    EXPECT_THROW(holder_seminorm(pts, vals, 0.5), InvalidArgument);
    std::vector<Vec3> ok{{0, 0, 1}, {0, 0, 1}};
    EXPECT_THROW(holder_seminorm(pts, ok, 0.0), InvalidArgument);
    EXPECT_THROW(holder_seminorm(std::vector<Vec3>{{0, 0, 0}}, std::vector<Vec3>{{0, 0, 1}}, 0.5), InvalidArgument);
}

TEST(Report, Header) {
    std::ostringstream os;
    write_report_header(os);
    EXPECT_EQ(os.str(), "check,max_violation,r,t,tol\n");
}
