#include "threecircle/comparison/profile.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace threecircle;

namespace {

std::vector<DecayProfile> integrable_catalog() {
    return {profiles::zero(), profiles::bump(1.0, 1.0, false), profiles::bump(2.0, 0.7, true),
            profiles::inverse_cube(2.0), profiles::log_weak(1.0, 1.0)};
}

// five-point central derivative
template <class F>
double d1(F f, double t, double h) {
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
}

}  // namespace

TEST(Tn, Branches) {
    EXPECT_EQ(tn(0.0, 0.7), 0.7);
    EXPECT_NEAR(tn(-1.0, 0.7), std::tanh(0.7), 1e-15);
    EXPECT_NEAR(tn(1.0, M_PI / 4), 1.0, 1e-15);
    EXPECT_NEAR(tn(-4.0, 1.0), std::tanh(2.0) / 2.0, 1e-15);
    EXPECT_THROW(tn(1.0, 2.0), DomainError);
    // continuity across K = 0
    EXPECT_NEAR(tn(1e-12, 1.3), 1.3, 1e-11);
    EXPECT_NEAR(tn(-1e-12, 1.3), 1.3, 1e-11);
    EXPECT_NEAR(tn(1e-7, 1.3), std::tan(std::sqrt(1e-7) * 1.3) / std::sqrt(1e-7), 1e-14);
}

TEST(Catalog, NamesParamsAndErrors) {
    std::vector<std::string> names;
    for (const auto& e : profile_catalog()) names.push_back(e.name);
    EXPECT_EQ(names, (std::vector<std::string>{"zero", "constant", "bump", "inverse-cube", "log-weak"}));
    EXPECT_THROW(make_profile("gaussian"), ConfigError);
    EXPECT_THROW(make_profile("bump", {{"depth", 1.0}}), ConfigError);
    EXPECT_THROW(make_profile("constant", {{"c", -1.0}}), ConfigError);
    EXPECT_EQ(make_profile("inverse-cube", {{"C", 3.0}}).q(1.0), 3.0 / 8.0);
}

TEST(Iq, ExactValues) {
    EXPECT_EQ(compute_Iq(profiles::zero()), 1.0);
    EXPECT_NEAR(compute_Iq(profiles::bump(1.0, 1.0, false)), std::exp(0.5), 1e-14);
    EXPECT_NEAR(compute_Iq(profiles::inverse_cube(2.0)), std::exp(1.0), 1e-8);
    EXPECT_THROW(compute_Iq(profiles::constant(1.0)), DomainError);
    EXPECT_EQ(compute_Iq(profiles::constant(0.0)), 1.0);
}

TEST(Iq, QuadraturePathMatchesExactMoment) {
    // catalog bumps through the generic callback route
    const auto ind = custom_profile("ind", [](double t) { return t <= 1.0 ? 1.0 : 0.0; }, 1.0, 0.0, {1.0});
    EXPECT_NEAR(compute_Iq(ind), std::exp(0.5), 1e-12);
    const auto smooth = profiles::bump(2.0, 0.7, true);
    const auto cb = custom_profile("cb", smooth.q, 0.7, 0.0);
    EXPECT_NEAR(compute_Iq(cb), compute_Iq(smooth), 1e-12);
    // an inverse-cube truncated at 1e9 with its certified tail below tolerance
    const auto ic = custom_profile("ic", [](double t) { return 2.0 / std::pow(1 + t, 3); }, 1e9, 2e-9);
    EXPECT_THROW(compute_Iq(ic, 1e-11), NumericalError);
    EXPECT_NEAR(compute_Iq(ic, 1e-8), std::exp(1.0), 1e-7);
}

TEST(Iq, LogWeakAgainstDirectQuadrature) {
    const double C = 1.0;
    // direct t-integral over [0, e^20 - 2]; beyond it the moment is 1/S up to e^{-40}
    const double S = 20.0;
    const double T = std::exp(S) - 2.0;
    const auto body = quadrature(
        [C](double t) { return t * C / ((1 + t) * (1 + t) * std::pow(std::log(2 + t), 2.0)); }, 0.0, T, 1e-12);
    const double oracle = std::exp(body.value + C / S);
    EXPECT_NEAR(compute_Iq(profiles::log_weak(C, 1.0)), oracle, 1e-9);
    // other eps: tail power S^{-eps}/eps
    const double eps = 0.5;
    const auto body2 = quadrature(
        [eps](double t) { return t / ((1 + t) * (1 + t) * std::pow(std::log(2 + t), 1.0 + eps)); }, 0.0, T, 1e-12);
    EXPECT_NEAR(profile_moment(profiles::log_weak(1.0, eps)), body2.value + std::pow(S, -eps) / eps, 1e-9);
}

TEST(Iq, LogWeakSelfConvergence) {
    const auto p = profiles::log_weak(1.0, 1.0);
    EXPECT_NEAR(compute_Iq(p, 1e-11), compute_Iq(p, 5e-12), 1e-7);
    EXPECT_GT(compute_Iq(p), 1.0);
}

TEST(SolveProfile, ZeroProfile) {
    const auto p = solve_profile(profiles::zero(), 20.0);
    EXPECT_EQ(p.Iq, 1.0);
    EXPECT_GE(p.grid.size(), 400u);
    EXPECT_DOUBLE_EQ(p.grid.front(), 1e-4);
    for (std::size_t k = 0; k < p.grid.size(); ++k) {
        const double t = p.grid[k];
        EXPECT_NEAR(p.u[k], t, 1e-15 * t);
        EXPECT_NEAR(p.h[k], 1.0 / t, 1e-12 / t);
        EXPECT_NEAR(p.v[k], std::log(t), 1e-15);
    }
}

TEST(SolveProfile, ConstantOneClosedForm) {
    const auto p = solve_profile(profiles::constant(1.0), 10.0);
    EXPECT_FALSE(p.integrable);
    EXPECT_TRUE(std::isinf(p.Iq));
    double worst = 0.0;
    for (double t = 0.1; t <= 5.0; t += 0.01) {
        worst = std::max(worst, std::abs(p.v_at(t) - std::log(std::tanh(t / 2)) - std::log(2.0)));
        EXPECT_NEAR(p.u_at(t), std::sinh(t), 1e-10 * std::sinh(t));
        EXPECT_NEAR(p.h_at(t), 1.0 / std::tanh(t), 1e-9);
    }
    EXPECT_LT(worst, 1e-9);
    EXPECT_NEAR(p.du_at(10.0), std::cosh(10.0), 1e-9 * std::cosh(10.0));
    EXPECT_GT(p.du_at(10.0), 1e3);
}

TEST(SolveProfile, ConstantRelatesToTnKHalfAngle) {
    // q = -K gives v = log tn_K(t/2) + log 2 for every K < 0
    for (double K : {-0.25, -1.0, -4.0}) {
        const auto p = solve_profile(profiles::constant(-K), 5.0);
        for (double t : {0.1, 0.5, 1.0, 2.5, 5.0}) {
            EXPECT_NEAR(p.v_at(t), std::log(tn(K, t / 2)) + std::log(2.0), 1e-9) << K << " " << t;
        }
    }
}

TEST(SolveProfile, StepProfilePiecewiseOracle) {
    const auto p = solve_profile(profiles::bump(1.0, 1.0, false), 5.0);
    EXPECT_NEAR(p.u_at(0.5), std::sinh(0.5), 1e-12);
    for (double t : {1.5, 3.0, 5.0}) {
        EXPECT_NEAR(p.u_at(t), std::sinh(1.0) + std::cosh(1.0) * (t - 1.0), 1e-11);
        EXPECT_NEAR(p.du_at(t), std::cosh(1.0), 1e-11);
    }
    // u'(inf) = cosh 1 <= e^{1/2}
    EXPECT_LT(std::cosh(1.0), std::exp(0.5));
}

TEST(SolveProfile, InverseCubeSelfConvergence) {
    ToleranceBundle tol;
    ToleranceBundle half = tol;
    half.ode_rel *= 0.5;
    half.ode_abs *= 0.5;
    const auto a = solve_profile(profiles::inverse_cube(2.0), 10.0, tol);
    const auto b = solve_profile(profiles::inverse_cube(2.0), 10.0, half);
    EXPECT_NEAR(a.v_at(10.0), b.v_at(10.0), 10 * tol.ode_rel * std::abs(b.v_at(10.0)));
    EXPECT_NEAR(a.Iq, std::exp(1.0), 1e-8);
}

TEST(SolveProfile, SmallTimeAsymptotics) {
    for (const auto& q : integrable_catalog()) {
        const auto p = solve_profile(q, 10.0);
        const double t = 1e-4;
        EXPECT_NEAR(p.h_at(t) * t, 1.0, 1e-6) << q.name;
        EXPECT_NEAR(p.du_at(0.0), 1.0, 1e-15) << q.name;
        EXPECT_NEAR(p.v_at(t) - std::log(t), 0.0, 1e-7) << q.name;
    }
}

TEST(SolveProfile, RiccatiAndConvexityResiduals) {
    for (const auto& q : integrable_catalog()) {
        const auto p = solve_profile(q, 10.0);
        double riccati = 0.0, vres = 0.0;
        for (double t = 0.3; t < 9.5; t += 0.173) {
            bool near_break = false;
            for (double b : q.breakpoints) near_break |= std::abs(t - b) < 0.05;
            if (near_break) continue;
            const double h = p.h_at(t);
            const double dh = d1([&](double s) { return p.h_at(s); }, t, 3e-3 * t);
            riccati = std::max(riccati, std::abs(dh + h * h - q.q(t)) / std::max(1.0, h * h));
            const double ddv = d1([&](double s) { return p.dv_at(s); }, t, 3e-3 * t);
            vres = std::max(vres, std::abs(ddv + h * p.dv_at(t)) / std::max(1.0, std::abs(ddv)));
        }
        EXPECT_LT(riccati, 1e-7) << q.name;
        EXPECT_LT(vres, 1e-7) << q.name;
    }
}

TEST(SolveProfile, RejectsNegativeProfile) {
    const auto bad = custom_profile("neg", [](double t) { return t > 2.0 ? -0.1 : 0.0; }, 3.0, 0.0);
    EXPECT_THROW(solve_profile(bad, 5.0), ConfigError);
    EXPECT_THROW(solve_profile(profiles::zero(), 1e-5), ConfigError);
}

TEST(Bounds, UprimeMonotoneAndBoundedByIq) {
    for (const auto& q : integrable_catalog()) {
        const auto p = solve_profile(q, 50.0);
        const auto r = verify_bounds(p);
        EXPECT_LE(r.monotonicity_violation, 1e-10) << q.name;
        EXPECT_LE(r.du_end, p.Iq + 1e-6) << q.name;
        EXPECT_GE(r.du_end, 1.0) << q.name;
        EXPECT_FALSE(r.skipped);
        EXPECT_TRUE(r.passed()) << q.name;
        EXPECT_LE(r.upper_violation, 1e-8) << q.name;
        EXPECT_LE(r.lower_violation, 1e-8) << q.name;
        EXPECT_TRUE(r.limit_in_range) << q.name << " " << r.limit_ratio;
    }
}

TEST(Bounds, ZeroProfileIsTight) {
    const auto r = verify_bounds(solve_profile(profiles::zero(), 20.0));
    EXPECT_NEAR(r.upper_violation, 0.0, 1e-13);
    EXPECT_NEAR(r.lower_violation, 0.0, 1e-13);
    EXPECT_NEAR(r.limit_ratio, 1.0, 1e-13);
}

TEST(Bounds, NonIntegrableIsSkippedExplicitly) {
    const auto p = solve_profile(profiles::constant(1.0), 20.0);
    const auto r = verify_bounds(p);
    EXPECT_TRUE(r.skipped);
    EXPECT_FALSE(r.skip_reason.empty());
    EXPECT_LE(r.monotonicity_violation, 1e-10);
    EXPECT_GT(r.du_end, 1e8);
    EXPECT_TRUE(r.passed());
}

TEST(Bounds, StrongerDecayGivesSmallerInflation) {
    const auto a = solve_profile(profiles::inverse_cube(1.0), 50.0);
    const auto b = solve_profile(profiles::inverse_cube(2.0), 50.0);
    EXPECT_LT(a.Iq, b.Iq);
    EXPECT_LT(a.du.back(), b.du.back());
    // v decreases pointwise as q grows
    for (std::size_t k = 0; k < a.grid.size(); k += 37) EXPECT_GE(a.v[k], b.v[k] - 1e-12);
}
