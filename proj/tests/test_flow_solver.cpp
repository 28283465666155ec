#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "nematic/flow_solver.hpp"
#include "nematic/mms.hpp"

using namespace nematic;

namespace {

SolverConfig fixed_step(double dt) {
    SolverConfig c;
    c.dt_init = c.dt_min = c.dt_max = dt;
    return c;
}

// Independent reference: classical RK4 on the semi-discrete system.
Field rk4_step(const Field& phi, double dt, const RadialGrid& g) {
    auto f = [&](const Field& p) { return rhs(FlowState{0.0, p}, g); };
    auto axpy = [](const Field& x, double a, const Field& y) {
        Field z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + a * y[i];
        return z;
    };
    const Field k1 = f(phi);
    const Field k2 = f(axpy(phi, 0.5 * dt, k1));
    const Field k3 = f(axpy(phi, 0.5 * dt, k2));
    const Field k4 = f(axpy(phi, dt, k3));
    Field out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) out[i] = phi[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return out;
}

} // namespace

TEST(Rhs, ZeroField) {
    const auto g = make_grid(64, 2.0);
    for (double v : rhs(FlowState{0.0, Field(g.size(), 0.0)}, g)) EXPECT_EQ(v, 0.0);
}

TEST(Rhs, HarmonicProfileHasZeroTension) {
    // Static residual of 2 atan(r/beta) at interior nodes, n = 2000 graded grid.
    const auto g = make_grid(2000, 2.0);
    const auto phi = g.sample([](double r) { return 2.0 * std::atan(r / 10.0); });
    const auto tau = tension(phi, g);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) EXPECT_LT(std::abs(tau[i]), 1e-8) << g[i];
}

TEST(Rhs, HarmonicResidualConvergesSecondOrder) {
    auto worst = [](std::size_t n) {
        const auto g = make_grid(n, 2.0);
        const auto tau = tension(g.sample([](double r) { return 2.0 * std::atan(r); }), g);
        double w = 0.0;
        for (std::size_t i = 1; i + 1 < g.size(); ++i) w = std::max(w, std::abs(tau[i]));
        return w;
    };
    EXPECT_GE(std::log2(worst(500) / worst(1000)), 1.9);
    EXPECT_GE(std::log2(worst(1000) / worst(2000)), 1.9);
}

TEST(Rhs, LinearProfileMatchesClosedForm) {
    const auto g = make_grid(100, 1.0);
    const auto phi = g.sample([](double r) { return std::numbers::pi * r; });
    const auto out = rhs(FlowState{0.0, phi}, g);
    const double r = 0.5, p = std::numbers::pi;
    // phi_rr = 0, phi_r = pi: tau - r phi_r = pi/r - sin(2 pi r)/(2 r^2) - r pi.
    const double want = p / r - std::sin(2 * p * r) / (2 * r * r) - r * p;
    EXPECT_NEAR(out[50], want, 1e-10);
    EXPECT_EQ(out.front(), 0.0);
    EXPECT_EQ(out.back(), 0.0);
}

TEST(Step, ZeroIsPreserved) {
    const auto g = make_grid(128, 2.0);
    FlowSolver s(g, fixed_step(1e-3));
    FlowState st{0.0, Field(g.size(), 0.0)};
    for (int k = 0; k < 1000; ++k) st = s.step(st, 1e-3);
    EXPECT_LE(sup_abs(st.phi), 1e-12);
}

TEST(Step, RejectsOutOfRangeDt) {
    const auto g = make_grid(16, 1.0);
    SolverConfig c;
    FlowSolver s(g, c);
    FlowState st{0.0, Field(g.size(), 0.0)};
    EXPECT_THROW(s.step(st, 1.0), InvalidArgument);
    EXPECT_THROW(s.step(st, 1e-12), InvalidArgument);
}

TEST(Step, BoundaryValuesBitExact) {
    const auto g = make_grid(100, 2.0);
    FlowSolver s(g, fixed_step(1e-3));
    FlowState st{0.0, g.sample([](double r) { return 2.5 * r * (2.0 - r); })};
    st.phi.back() = 2.5;
    for (int k = 0; k < 50; ++k) {
        st = s.step(st, 1e-3);
        ASSERT_EQ(st.phi.front(), 0.0);
        ASSERT_EQ(st.phi.back(), 2.5);
    }
}

TEST(Step, SteadyManufacturedSolutionDiscreteForcing) {
    // Forcing equal to minus the discrete operator at the nodes: phi_m is an exact steady state.
    const auto g = make_grid(100, 1.0);
    const auto phi_m = g.sample(mms::steady_solution);
    const auto res = rhs(FlowState{0.0, phi_m}, g);
    Forcing f = [&](double r, double) {
        const auto it = std::lower_bound(g.nodes().begin(), g.nodes().end(), r);
        return -res[static_cast<std::size_t>(it - g.nodes().begin())];
    };
    FlowSolver s(g, fixed_step(1e-3), f);
    FlowState st{0.0, phi_m};
    for (int k = 0; k < 100; ++k) st = s.step(st, 1e-3);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(st.phi[i], phi_m[i], 1e-12);
}

TEST(Step, SteadyManufacturedSolutionSymbolicForcing) {
    // Closed-form forcing: the drift is steps * dt * truncation error.
    const auto g = make_grid(200, 1.0);
    const auto phi_m = g.sample(mms::steady_solution);
    FlowSolver s(g, fixed_step(1e-8), mms::steady_forcing);
    FlowState st{0.0, phi_m};
    for (int k = 0; k < 100; ++k) st = s.step(st, 1e-8);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(st.phi[i], phi_m[i], 1e-8);
}

TEST(Step, MatchesRk4Reference) {
    const auto g = make_grid(60, 1.0);
    const auto phi0 = g.sample([](double r) { return 0.1 * std::sin(std::numbers::pi * r); });
    double prev = 0.0;
    for (double dt : {4e-5, 2e-5, 1e-5}) {
        SolverConfig c = fixed_step(dt);
        c.theta_scheme = 0.5;
        const auto a = FlowSolver(g, c).step(FlowState{0.0, phi0}, dt);
        const auto b = rk4_step(phi0, dt, g);
        double d = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) d = std::max(d, std::abs(a.phi[i] - b[i]));
        EXPECT_LT(d, 1e-3 * dt);
        if (prev > 0.0) EXPECT_GT(std::log2(prev / d), 1.8); // local error O(dt^2) or better
        prev = d;
    }
}

TEST(Run, ZeroData) {
    const auto g = make_grid(64, 2.0);
    const auto traj = run(Field(g.size(), 0.0), 1.0, g, SolverConfig{});
    EXPECT_EQ(traj.termination, Termination::reached_t_end);
    EXPECT_LE(sup_abs(traj.final_state().phi), 1e-12);
    EXPECT_DOUBLE_EQ(traj.final_state().t, 1.0);
}

TEST(Run, RequiresPinnedOrigin) {
    const auto g = make_grid(16, 1.0);
    EXPECT_THROW(run(Field(g.size(), 1.0), 1.0, g, SolverConfig{}), InvalidArgument);
}

TEST(Run, GlobalExistenceData) {
    const auto g = make_grid(800, 2.0);
    auto phi0 = g.sample([](double r) { return std::numbers::pi * std::sin(0.5 * std::numbers::pi * r); });
    phi0.front() = 0.0;
    phi0.back() = std::numbers::pi;
    const auto traj = run(phi0, 2.0, g, SolverConfig{});
    EXPECT_EQ(traj.termination, Termination::reached_t_end);
    for (const auto& m : traj.monitors) {
        EXPECT_LE(m.sup_abs_phi, std::numbers::pi + 1e-6);
        EXPECT_LE(m.phi_r_at_0, 50.0);
    }
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k) EXPECT_LT(traj.snapshots[k - 1].t, traj.snapshots[k].t);
}

TEST(Run, MonitorConsistency) {
    const auto g = make_grid(200, 2.0);
    auto phi0 = g.sample([](double r) { return 2.0 * r * r * (1.5 - r) + r; });
    phi0.front() = 0.0;
    const auto traj = run(phi0, 0.2, g, SolverConfig{});
    // Snapshot every accepted step: monitors and snapshots align one to one.
    ASSERT_EQ(traj.monitors.size(), traj.snapshots.size());
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        EXPECT_EQ(traj.monitors[k].t, traj.snapshots[k].t);
        EXPECT_EQ(traj.monitors[k].phi_r_at_0, g.d1_at(traj.snapshots[k].phi, 0));
    }
}

TEST(Run, ManufacturedConvergenceGraded) {
    const auto r = mms::convergence_study({100, 200, 400}, 2.0, 0.1, 1e-4);
    EXPECT_GE(r.min_order(), 1.9);
}

TEST(Run, ManufacturedForcingMatchesFiniteDifferences) {
    // F = phi_t + r phi_r - tau(phi) cross-checked with central differences of phi_m.
    const double h = 1e-4;
    for (double r : {0.1, 0.37, 0.8}) {
        for (double t : {0.2, 1.0}) {
            auto f = [](double rr, double tt) { return mms::solution(rr, tt); };
            const double pt = (f(r, t + h) - f(r, t - h)) / (2 * h);
            const double pr = (f(r + h, t) - f(r - h, t)) / (2 * h);
            const double prr = (f(r + h, t) - 2 * f(r, t) + f(r - h, t)) / (h * h);
            const double want = pt + r * pr - (prr + pr / r - std::sin(2 * f(r, t)) / (2 * r * r));
            EXPECT_NEAR(mms::forcing(r, t), want, 1e-6);
        }
    }
}

TEST(Energy, GradDSquared) {
    const auto g = make_grid(4000, 1.0);
    const auto phi = g.sample([](double r) { return 2.0 * std::atan(r); });
    const auto gd = grad_d_squared(phi, g);
    for (std::size_t i = 1; i < g.size(); i += 97) {
        const double r = g[i];
        EXPECT_NEAR(gd[i], 8.0 / ((1 + r * r) * (1 + r * r)), 1e-5);
    }
    EXPECT_EQ(gd[0], 2.0 * std::pow(g.d1_at(phi, 0), 2));
    for (double v : grad_d_squared(Field(g.size(), 0.0), g)) EXPECT_EQ(v, 0.0);
}

TEST(Export, CsvHeaders) {
    const auto g = make_grid(8, 1.0);
    const auto traj = run(Field(g.size(), 0.0), 0.01, g, SolverConfig{});
    std::ostringstream a, b;
    write_monitors_csv(a, traj);
    write_profile_csv(b, traj.final_state(), g);
    EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "t,phi_r_at_0,sup_abs_phi,energy");
    EXPECT_EQ(b.str().substr(0, b.str().find('\n')), "r,phi");
}
