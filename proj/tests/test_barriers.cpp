#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "nematic/barriers.hpp"
#include "support/hyperdual.hpp"

using namespace nematic;

namespace {

BarrierParams reference_params() {
    BarrierParams p;
    p.delta = 1.0;
    p.eps = 0.5;
    p.beta0 = 1.0 / 64.0;
    return p;
}

// Residual f_t + r f_r - f_rr - f_r/r + sin(2f)/(2r^2) from automatic
// derivatives of the closed-form subsolution.
template <typename F>
double ad_residual(F f, double r, double t) {
    const hd::H fr = f(hd::var(r), t);
    const double ht = 1e-6 * std::max(1.0, t);
    const double ft = (f(hd::cst(r), t + ht).v - f(hd::cst(r), t - ht).v) / (2 * ht);
    return ft + r * fr.a - fr.c - fr.a / r + std::sin(2 * fr.v) / (2 * r * r);
}

hd::H subsolution_ad(hd::H r, double t, const BarrierParams& p) {
    const double beta = beta_closed_form(t, p);
    const double a = p.a();
    return 2.0 * hd::atan(r / (std::exp(t) * beta)) + 2.0 * hd::atan(hd::pow(r, a) * std::exp(-a * t) / p.mu);
}

} // namespace

TEST(Barriers, ClosedFormT0) {
    EXPECT_NEAR(blowup_time(reference_params()), 0.5 * std::log(2.0), 1e-12);
}

TEST(Barriers, T0RejectsInfiniteVanishingTime) {
    BarrierParams p = reference_params();
    p.beta0 = 0.1; // 2 sqrt(0.1) > 1/2
    EXPECT_THROW(blowup_time(p), ConstraintViolation);
    try {
        p.validate();
        FAIL();
    } catch (const ConstraintViolation& e) {
        EXPECT_NE(std::string(e.what()).find("finite vanishing time"), std::string::npos);
    }
}

TEST(Barriers, Rk4ReachesZeroAtT0) {
    const auto p = reference_params();
    const double t0 = blowup_time(p);
    const auto b = beta_rk4(t0 - 1e-4, 20000, p);
    EXPECT_LT(b.back(), 1e-6);
    EXPECT_GT(b.back(), 0.0);
}

TEST(Barriers, BetaClosedFormMatchesRk4) {
    for (const auto& p : {reference_params(), validated_params()}) {
        const double t_end = 0.9 * blowup_time(p);
        const std::size_t n = 20000;
        const auto b = beta_rk4(t_end, n, p);
        double rel = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = t_end * static_cast<double>(k) / n;
            rel = std::max(rel, std::abs(b[k] - beta_closed_form(t, p)) / beta_closed_form(t, p));
        }
        EXPECT_LT(rel, 1e-8);
    }
}

TEST(Barriers, BetaClosedFormDomain) {
    const auto p = reference_params();
    const double t0 = blowup_time(p);
    EXPECT_DOUBLE_EQ(beta_closed_form(0.0, p), p.beta0);
    EXPECT_NEAR(beta_closed_form(t0, p), 0.0, 1e-15);
    EXPECT_THROW(beta_closed_form(t0 + 1e-3, p), DomainError);
    EXPECT_THROW(beta_closed_form(-1.0, p), DomainError);
}

TEST(Barriers, SupersolutionResidualIdentity) {
    for (double c : {0.1, 1.0, 10.0}) {
        for (std::size_t i = 1; i <= 1000; ++i) {
            const double r = i / 1000.0;
            EXPECT_NEAR(supersolution_residual(r, c), 2 * r * c / (c * c + r * r), 1e-10);
            // Automatic-derivative oracle of the same quantity (static in time).
            const auto f = hd::atan(hd::var(r) / hd::cst(c));
            const hd::H phi = 2.0 * f;
            const double ad = r * phi.a - phi.c - phi.a / r + std::sin(2 * phi.v) / (2 * r * r);
            EXPECT_NEAR(supersolution_residual(r, c), ad, 1e-9);
        }
    }
    EXPECT_GE(supersolution_residual(0.5, 1.0), 0.0);
    EXPECT_THROW(supersolution(0.5, 0.0), InvalidArgument);
}

TEST(Barriers, ValidatedParameterSet) {
    const auto p = validated_params();
    EXPECT_NO_THROW(p.validate());
    EXPECT_DOUBLE_EQ(p.eps, 0.5);
    EXPECT_DOUBLE_EQ(p.mu, 20.0);
    EXPECT_NEAR(p.delta, delta_bound(0.5, 20.0), 1e-15);
    EXPECT_LT(2 * std::pow(p.beta0, 1 - p.eps), p.delta * (1 - p.eps));
    EXPECT_GT(blowup_time(p), 0.0);
}

TEST(Barriers, MEpsMaximum) {
    for (double eps : {0.2, 0.5, 0.9}) {
        double m = 0;
        for (int k = 1; k < 200000; ++k) {
            const double s = k * 1e-4;
            m = std::max(m, std::pow(s, 2 - eps) / (1 + s * s));
        }
        EXPECT_NEAR(m_eps(eps), m, 1e-8);
    }
}

TEST(Barriers, ConstraintMessages) {
    auto message = [](BarrierParams p) -> std::string {
        try {
            p.validate();
        } catch (const ConstraintViolation& e) {
            return e.what();
        }
        return {};
    };
    BarrierParams p = validated_params();
    p.delta = 1.0;
    EXPECT_NE(message(p).find("subsolution delta bound"), std::string::npos);
    p = validated_params();
    p.phi1 = std::numbers::pi + 0.01;
    EXPECT_NE(message(p).find("boundary dominance"), std::string::npos);
    p = validated_params();
    p.mu = 1.0;
    p.delta = delta_bound(p.eps, p.mu);
    EXPECT_FALSE(message(p).empty());
}

TEST(Barriers, SubsolutionResidualNonPositive) {
    const auto p = validated_params();
    const double t0 = blowup_time(p);
    double worst = -INFINITY;
    for (std::size_t k = 0; k < 256; ++k) {
        const double t = t0 * k / 256.0;
        for (std::size_t i = 0; i <= 2048; ++i) worst = std::max(worst, subsolution_eval(i / 2048.0, t, p).residual);
    }
    EXPECT_LE(worst, 1e-8);
}

TEST(Barriers, SubsolutionResidualMatchesAutomaticDerivatives) {
    const auto p = validated_params();
    const double t0 = blowup_time(p);
    auto f = [&](hd::H r, double t) { return subsolution_ad(r, t, p); };
    for (double t : {0.0 + 1e-3, 0.3 * t0, 0.7 * t0}) {
        for (double r : {1e-3, 0.01, 0.1, 0.5, 0.9, 1.0}) {
            const auto e = subsolution_eval(r, t, p);
            const double ad = ad_residual(f, r, t);
            EXPECT_NEAR(e.residual, ad, 1e-6 * std::max(1.0, std::abs(ad))) << "r=" << r << " t=" << t;
            EXPECT_NEAR(e.value, f(hd::cst(r), t).v, 1e-14);
            EXPECT_NEAR(e.f_r, f(hd::var(r), t).a, 1e-9 * std::max(1.0, e.f_r));
        }
    }
}

TEST(Barriers, SubsolutionAxisGradient) {
    const auto p = validated_params();
    EXPECT_NEAR(subsolution_axis_gradient(0.0, p), 2.0 / p.beta0, 1e-9);
    EXPECT_NEAR(subsolution_eval(0.0, 0.0, p).f_r, 2.0 / p.beta0, 1e-9);
    EXPECT_THROW(subsolution_eval(0.5, blowup_time(p), p), DomainError);
}

TEST(Barriers, BlowupInitialDataDominates) {
    const auto p = validated_params();
    const auto g = make_grid(1600, 4.0);
    const auto phi0 = make_blowup_initial_data(p, g);
    EXPECT_EQ(phi0.front(), 0.0);
    EXPECT_EQ(phi0.back(), p.phi1);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(phi0[i], subsolution(g[i], 0.0, p));
}

TEST(Barriers, CsvHeader) {
    std::ostringstream os;
    const double r[] = {0.0, 0.5}, t[] = {0.0};
    write_barrier_csv(os, r, t, validated_params());
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "r,t,f,f_r,residual");
}
