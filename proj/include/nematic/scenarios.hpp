#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "nematic/barriers.hpp"
#include "nematic/blowup.hpp"
#include "nematic/config.hpp"
#include "nematic/csv.hpp"
#include "nematic/fields3d.hpp"
#include "nematic/flow_solver.hpp"
#include "nematic/hopf.hpp"
#include "nematic/mms.hpp"
#include "nematic/verify.hpp"

namespace nematic {

struct Assertion {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
};

class Summary {
public:
    /// Records `value <= bound` (or `>=` when `at_least`).
    void check_le(const std::string& name, double value, double bound) {
        items_.push_back({name, value <= bound, value, bound});
    }
    void check_ge(const std::string& name, double value, double bound) {
        items_.push_back({name, value >= bound, value, bound});
    }
    void check_true(const std::string& name, bool ok) { items_.push_back({name, ok, ok ? 1.0 : 0.0, 1.0}); }
    void check_false(const std::string& name, bool v) { items_.push_back({name, !v, v ? 1.0 : 0.0, 0.0}); }

    const std::vector<Assertion>& items() const noexcept { return items_; }
    bool all_pass() const {
        return std::all_of(items_.begin(), items_.end(), [](const Assertion& a) { return a.pass; });
    }

    void write(std::ostream& os) const {
        for (const auto& a : items_) os << a.name << ',' << (a.pass ? "pass" : "fail") << ',' << csv::num(a.value) << ',' << csv::num(a.tolerance) << '\n';
    }

private:
    std::vector<Assertion> items_;
};

/// Runs f(i) for i in [0, n) on up to `jobs` threads; results keep index order.
template <typename F>
auto parallel_map(std::size_t n, std::size_t jobs, F f) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(n);
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    for (std::size_t base = 0; base < n; base += jobs) {
        std::vector<std::future<R>> batch;
        for (std::size_t i = base; i < std::min(n, base + jobs); ++i) {
            batch.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, f, i));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) out[base + k] = batch[k].get();
    }
    return out;
}

namespace scenario_detail {

inline Field global_initial_data(const RadialGrid& g, double amplitude) {
    Field phi = g.sample([&](double r) { return amplitude * std::sin(0.5 * std::numbers::pi * r); });
    phi.front() = 0.0;
    phi.back() = amplitude;
    return phi;
}

/// Writes about `count` evenly spaced snapshots as profile_NNN.csv.
inline void write_profiles(const std::filesystem::path& dir, const Trajectory& traj, const RadialGrid& g,
                           std::size_t count) {
    if (count == 0 || traj.snapshots.empty()) return;
    const std::size_t m = traj.snapshots.size();
    std::vector<std::size_t> picks;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t idx = count == 1 ? m - 1 : k * (m - 1) / (count - 1);
        if (picks.empty() || picks.back() != idx) picks.push_back(idx);
    }
    std::ofstream idx_file = csv::open(dir / "profiles.csv");
    idx_file << "index,t,file\n";
    for (std::size_t k = 0; k < picks.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "profile_%03zu.csv", k);
        auto os = csv::open(dir / name);
        write_profile_csv(os, traj.snapshots[picks[k]], g);
        csv::row(idx_file, k, traj.snapshots[picks[k]].t, std::string(name));
    }
}

inline void run_global(const ExperimentConfig& c, Summary& s) {
    const auto g = make_grid(c.grid.cells, c.grid.grading);
    const auto traj = run(global_initial_data(g, c.amplitude), c.t_end, g, c.solver);
    auto mon = csv::open(c.out_dir / "monitors.csv");
    write_monitors_csv(mon, traj);
    write_profiles(c.out_dir, traj, g, c.profile_count);

    double sup = 0.0, grad = 0.0;
    for (const auto& m : traj.monitors) {
        sup = std::max(sup, m.sup_abs_phi);
        grad = std::max(grad, m.phi_r_at_0);
    }
    const auto mp = max_principle_check(traj, g, std::numbers::pi, 0.0);
    auto rep = csv::open(c.out_dir / "report.csv");
    write_report_header(rep);
    write_report_row(rep, "max_principle", mp);

    s.check_true("termination_reached_t_end", traj.termination == Termination::reached_t_end);
    s.check_le("sup_abs_phi", sup, std::numbers::pi + 1e-6);
    s.check_le("max_principle_violation", mp.max_violation, 1e-6);
    s.check_le("max_axis_gradient", grad, 50.0);
}

inline void run_blowup(const ExperimentConfig& c, Summary& s) {
    const auto& p = c.barrier;
    const auto g = make_grid(c.grid.cells, c.grid.grading);
    const double t0 = blowup_time(p);
    const auto traj = run(make_blowup_initial_data(p, g), c.t_end, g, c.solver);
    const auto rep = detect(traj, c.solver.monitor_threshold, p);

    auto mon = csv::open(c.out_dir / "monitors.csv");
    write_monitors_csv(mon, traj);
    auto bl = csv::open(c.out_dir / "blowup.csv");
    write_blowup_csv(bl, rep);
    write_profiles(c.out_dir, traj, g, c.profile_count);

    const double t_check = rep.detected ? std::min(rep.t_detect, t0) : t0;
    const BarrierFn lower = [&](double r, double t) { return t < t0 ? subsolution(r, t, p) : -INFINITY; };
    const auto cmp = comparison_check(traj, g, lower, {}, 0.0, t_check);
    auto rp = csv::open(c.out_dir / "report.csv");
    write_report_header(rp);
    write_report_row(rp, "comparison_subsolution", cmp);

    // Barrier overlay at the stored profile times.
    std::vector<double> times;
    for (const auto& sn : traj.snapshots)
        if (sn.t < t0) times.push_back(sn.t);
    if (times.size() > c.profile_count && c.profile_count > 1) {
        std::vector<double> thin;
        for (std::size_t k = 0; k < c.profile_count; ++k) thin.push_back(times[k * (times.size() - 1) / (c.profile_count - 1)]);
        thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
        times = thin;
    }
    auto br = csv::open(c.out_dir / "barrier.csv");
    write_barrier_csv(br, g.nodes(), times, p);

    const double g0 = traj.monitors.front().phi_r_at_0;
    s.check_true("detected", rep.detected);
    s.check_le("t_detect", rep.detected ? rep.t_detect : INFINITY, t0 + c.detect_margin);
    s.check_le("comparison_max_violation", cmp.max_violation, c.comparison_tol);
    s.check_ge("axis_gradient_growth", rep.g_final / g0, 10.0);
}

inline void run_barrier_audit(const ExperimentConfig& c, Summary& s) {
    const auto& p = c.barrier;
    const double t0 = blowup_time(p);

    // Reference vanishing time for delta = 1, eps = 1/2, beta0 = 1/64.
    BarrierParams ref;
    ref.delta = 1.0;
    ref.eps = 0.5;
    ref.beta0 = 1.0 / 64.0;
    const double t_ref = blowup_time(ref);
    s.check_le("t0_reference_error", std::abs(t_ref - 0.5 * std::log(2.0)), 1e-12);
    const auto b_ref = beta_rk4(t_ref - 1e-4, 20000, ref);
    s.check_le("rk4_beta_near_t0", b_ref.back(), 1e-6);

    auto ode = csv::open(c.out_dir / "beta.csv");
    ode << "t,beta_closed,beta_rk4\n";
    double rel = 0.0;
    for (const BarrierParams* q : {static_cast<const BarrierParams*>(&ref), &p}) {
        const double tq = 0.9 * blowup_time(*q);
        const std::size_t n = 20000;
        const auto b = beta_rk4(tq, n, *q);
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = tq * static_cast<double>(k) / static_cast<double>(n);
            const double exact = beta_closed_form(t, *q);
            rel = std::max(rel, std::abs(b[k] - exact) / exact);
            if (q == &p && k % 100 == 0) csv::row(ode, t, exact, b[k]);
        }
    }
    s.check_le("beta_rk4_relative_error", rel, 1e-8);

    double sup_err = 0.0;
    for (double cc : {0.1, 1.0, 10.0}) {
        for (std::size_t i = 1; i <= 1000; ++i) {
            const double r = static_cast<double>(i) / 1000.0;
            const double want = 2.0 * r * cc / (cc * cc + r * r);
            sup_err = std::max(sup_err, std::abs(supersolution_residual(r, cc) - want));
        }
    }
    s.check_le("supersolution_residual_identity", sup_err, 1e-10);

    const std::size_t nr = c.grid.cells, nt = 256;
    double worst = -INFINITY;
    std::vector<double> radii, times;
    for (std::size_t i = 0; i <= nr; ++i) radii.push_back(static_cast<double>(i) / static_cast<double>(nr));
    for (std::size_t k = 0; k < nt; ++k) times.push_back(t0 * static_cast<double>(k) / static_cast<double>(nt));
    for (double t : times)
        for (double r : radii) worst = std::max(worst, subsolution_eval(r, t, p).residual);
    s.check_le("subsolution_residual_max", worst, 1e-8);

    std::vector<double> r_out, t_out;
    for (std::size_t i = 0; i <= 64; ++i) r_out.push_back(std::pow(static_cast<double>(i) / 64.0, 2.0));
    for (std::size_t k = 0; k < 8; ++k) t_out.push_back(0.9 * t0 * static_cast<double>(k) / 7.0);
    auto br = csv::open(c.out_dir / "barrier.csv");
    write_barrier_csv(br, r_out, t_out, p);
}

inline void run_energy(const ExperimentConfig& c, Summary& s) {
    const auto g = make_grid(c.grid.cells, c.grid.grading);
    SolverConfig cfg = c.solver;
    FlowSolver solver(g, cfg);
    const auto traj = solver.run(global_initial_data(g, c.amplitude), c.t_end);
    const QuadratureSpec q{c.energy.quadrature, QuadratureRule::simpson};

    auto led = csv::open(c.out_dir / "ledger.csv");
    write_ledger_header(led);
    double u_err = 0.0, c_err = 0.0, gauge = 0.0, q_routes = 0.0;
    for (const auto& sn : traj.snapshots) {
        const auto pt = solver.rhs(sn);
        const auto P = pressure_profiles(sn.phi, g, c.energy.c1, c.energy.c2, std::span<const double>(pt));
        const auto e = energy_ledger(sn.phi, g, P, q);
        write_ledger_row(led, sn.t, e);
        u_err = std::max(u_err, std::abs(e.grad_u_sq - 6.0 * std::numbers::pi) / (6.0 * std::numbers::pi));
        c_err = std::max(c_err, std::abs(e.convective + 13.0 * std::numbers::pi / 6.0) / (13.0 * std::numbers::pi / 6.0));
        const auto P2 = pressure_profiles(sn.phi, g, c.energy.c1 + c.energy.gauge_shift, c.energy.c2 - c.energy.gauge_shift,
                                          std::span<const double>(pt));
        gauge = std::max(gauge, std::abs(energy_ledger(sn.phi, g, P2, q).boundary_flux - e.boundary_flux));
        if (sn.t > 0.0) {
            const auto Ps = pressure_profiles(sn.phi, g, c.energy.c1, c.energy.c2);
            for (std::size_t i = 0; i < P.Q.size(); ++i) q_routes = std::max(q_routes, std::abs(P.Q[i] - Ps.Q[i]));
        }
    }
    s.check_le("grad_u_sq_relative_error", u_err, 1e-6);
    s.check_le("convective_relative_error", c_err, 1e-6);
    s.check_le("boundary_flux_gauge_drift", gauge, 1e-10);
    // Reported, not asserted: difference of the two pressure routes (a discretization error).
    auto diag = csv::open(c.out_dir / "diagnostics.csv");
    diag << "quantity,value\n";
    csv::row(diag, std::string("pressure_route_difference"), q_routes);

    // Axis stress of the subsolution.
    const auto& p = c.barrier;
    const double t0 = blowup_time(p);
    double block = 0.0;
    auto st = csv::open(c.out_dir / "axis_stress.csv");
    st << "t,block_norm,S33,grad_d_sq\n";
    for (double t : {0.0, 0.5 * t0, 0.9 * t0}) {
        const auto sub = subsolution_eval(0.0, t, p);
        double b = 0.0;
        double s33 = 0.0, gd = 0.0;
        for (double th : {0.0, 0.7, 2.1, 4.0}) {
            const auto e = stress_from_values(sub.value, sub.f_r, 0.0, th);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) b = std::max(b, std::abs(e.S[i][j]));
            s33 = e.S[2][2];
            gd = e.grad_sq;
        }
        block = std::max(block, b);
        csv::row(st, t, b, s33, gd);
    }
    s.check_le("axis_stress_block", block, 1e-10);
}

inline void run_hopf(const ExperimentConfig& c, Summary& s, std::size_t jobs) {
    const auto& h = c.hopf;
    struct Cell {
        double e_s3 = 0.0;
        double e_ball = 0.0;
    };
    const auto cells = parallel_map(h.lambdas.size(), jobs, [&](std::size_t i) {
        return Cell{dirichlet_energy_s3(h.lambdas[i], h.quadrature), hopf_ball_energy(h.lambdas[i], h.ball_quadrature)};
    });
    auto out = csv::open(c.out_dir / "hopf_energy.csv");
    write_hopf_energy_header(out);
    for (std::size_t i = 0; i < cells.size(); ++i) write_hopf_energy_row(out, h.lambdas[i], cells[i].e_s3, cells[i].e_ball);

    auto energy_at = [&](double lam, bool ball) -> std::optional<double> {
        for (std::size_t i = 0; i < h.lambdas.size(); ++i)
            if (h.lambdas[i] == lam) return ball ? cells[i].e_ball : cells[i].e_s3;
        return std::nullopt;
    };

    const double e_ref = 16.0 * std::numbers::pi * std::numbers::pi;
    const double e1 = energy_at(1.0, false).value_or(dirichlet_energy_s3(1.0, h.quadrature));
    s.check_le("energy_s3_lambda1_relative_error", std::abs(e1 - e_ref) / e_ref, 0.01);
    double min_drop = INFINITY;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) min_drop = std::min(min_drop, cells[i].e_s3 - cells[i + 1].e_s3);
    if (cells.size() > 1) s.check_ge("energy_s3_min_decrease", min_drop, std::nextafter(0.0, 1.0));
    const double e4 = energy_at(4.0, true).value_or(hopf_ball_energy(4.0, h.ball_quadrature));
    const double e64 = energy_at(64.0, true).value_or(hopf_ball_energy(64.0, h.ball_quadrature));
    s.check_le("ball_energy_ratio_64_over_4", e64 / e4, 0.05);

    const auto d1 = ball_data(1.0, h.sample_resolution, h.ball_quadrature);
    double bdry = 0.0;
    for (std::size_t i = 0; i < d1.d.size(); ++i) {
        if (!d1.boundary[i]) continue;
        for (int k = 0; k < 3; ++k) bdry = std::max(bdry, std::abs(d1.d[i][k] - hopf_base_point[k]));
    }
    s.check_le("boundary_samples_equal_e", bdry, 1e-8);
    s.check_false("cap_test_lambda1_nullhomotopic", cap_test(d1).nullhomotopic);

    // Constant map e perturbed by a fixed tilt of geodesic size 0.1.
    std::vector<Vec3> pert;
    for (std::size_t k = 0; k < 64; ++k) {
        const double ang = 0.1 * static_cast<double>(k) / 63.0;
        const double az = 0.37 * static_cast<double>(k);
        pert.push_back({std::sin(ang) * std::cos(az), std::sin(ang) * std::sin(az), std::cos(ang)});
    }
    const auto cap = cap_test(pert);
    s.check_true("cap_test_perturbed_constant", cap.nullhomotopic && cap.max_distance <= 0.1 + 1e-12);

    const double lam_max = *std::max_element(h.lambdas.begin(), h.lambdas.end());
    const double e_max = energy_at(lam_max, true).value();
    const double kinetic = 0.5 / (lam_max * lam_max) * hopf_velocity_l2_sq();
    s.check_le("small_energy_at_max_lambda", e_max + kinetic, h.eps0 * h.eps0);
}

inline void run_mms(const ExperimentConfig& c, Summary& s, std::size_t jobs) {
    const auto& m = c.mms;
    const auto errs = parallel_map(m.cells.size(), jobs, [&](std::size_t i) {
        return mms::error_at(m.cells[i], c.grid.grading, m.t_end, m.dt, 0.5);
    });
    auto out = csv::open(c.out_dir / "mms.csv");
    out << "cells,error,order\n";
    double worst = INFINITY;
    for (std::size_t i = 0; i < errs.size(); ++i) {
        double order = std::numeric_limits<double>::quiet_NaN();
        if (i > 0) {
            order = std::log(errs[i - 1] / errs[i]) /
                    std::log(static_cast<double>(m.cells[i]) / static_cast<double>(m.cells[i - 1]));
            worst = std::min(worst, order);
        }
        csv::row(out, m.cells[i], errs[i], order);
    }
    s.check_ge("mms_min_order", worst, m.min_order);
}

} // namespace scenario_detail

/// Runs the configured scenario, writes CSVs and `summary` into c.out_dir.
inline Summary run_scenario(const ExperimentConfig& c, std::size_t jobs = 1) {
    c.validate();
    std::filesystem::create_directories(c.out_dir);
    Summary s;
    switch (c.scenario) {
    case Scenario::global_existence: scenario_detail::run_global(c, s); break;
    case Scenario::blowup: scenario_detail::run_blowup(c, s); break;
    case Scenario::barrier_audit: scenario_detail::run_barrier_audit(c, s); break;
    case Scenario::energy_ledger: scenario_detail::run_energy(c, s); break;
    case Scenario::hopf_sweep: scenario_detail::run_hopf(c, s, jobs); break;
    case Scenario::mms_convergence: scenario_detail::run_mms(c, s, jobs); break;
    }
    auto os = csv::open(c.out_dir / "summary");
    s.write(os);
    return s;
}

} // namespace nematic
