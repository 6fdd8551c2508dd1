#pragma once

// Converse-direction scenario: at a point where R_{1111} + sum |tau^1_{i1}|^2
// is negative, the function f(w) = w^1 (1 - tau^1_{1i}(o) w^i / 2) in normal
// coordinates grows strictly slower than a flat coordinate, so log M fails to
// be convex in log r.

#include "threecircle/geodesic/normal_coordinates.hpp"
#include "threecircle/growth/growth.hpp"
#include "threecircle/growth/polynomial.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace threecircle {

struct CounterexampleOptions {
    MetricSpec metric{"radial-conformal", 1, {{"a", 1.0}, {"b", 0.0}}};
    std::optional<CVector> o;  // default: origin
    // curvature constant of the abscissa log tn_K(r/2); 0 gives log r
    double K = 0.0;
    std::vector<double> radii;  // default: 12 geometric radii in [0.05, 0.5]
    SphereSampler sampler{64, 1, true, 2};
    std::vector<double> bound_times{0.01, 0.02, 0.04};
    // higher-order slack C t^5 in the direct bound
    double bound_slack_coefficient = 1.0;
    double delta_threshold = 1e-4;
    ToleranceBundle tol;
};

struct CounterexampleReport {
    std::string metric_label;
    int n = 1;
    CVector o;
    double K = 0.0;
    double functional = 0.0;
    CVector direction;  // e_1 of the normal frame
    Polynomial f{1};    // in normal coordinates at o
    GrowthCurve curve;
    std::vector<double> ratios;  // M / (2 tn_K(r/2)), equal to M / r when K = 0
    double delta0 = 0.0;
    double r_star = 0.0;
    Verdict convexity;
    Verdict bound;

    [[nodiscard]] bool functional_negative() const { return functional < 0.0; }
    [[nodiscard]] bool ratio_drop(double threshold) const { return delta0 >= threshold; }
    [[nodiscard]] bool convexity_violation() const { return !convexity.passed; }
    /// Growth defect and the convexity failure both present.
    [[nodiscard]] bool violation_detected(double threshold) const {
        return ratio_drop(threshold) && convexity_violation();
    }
    /// All four sub-checks as expected for a counterexample point.
    [[nodiscard]] bool reproduces(double threshold) const {
        return functional_negative() && violation_detected(threshold) && bound.passed;
    }
};

inline CounterexampleReport counterexample_scenario(const CounterexampleOptions& opt = {}) {
    opt.sampler.validate();
    const auto chart = make_metric(opt.metric);
    const int n = chart.n();
    CounterexampleReport rep;
    rep.metric_label = chart.label();
    rep.n = n;
    rep.o = opt.o ? *opt.o : CVector::Zero(n);
    rep.K = opt.K;

    // direction minimizing the functional among the sampled ones
    const auto md = chart.derivatives(rep.o, 2);
    const auto dirs = unit_directions(chart, rep.o, opt.sampler.directions, opt.sampler.seed);
    rep.functional = std::numeric_limits<double>::infinity();
    for (const auto& X : dirs) {
        const double F = converse_functional(md, X);
        if (F < rep.functional) {
            rep.functional = F;
            rep.direction = X;
        }
    }
    const CMatrix E = unitary_frame(md.g, &rep.direction);
    const auto map = normal_holomorphic_coordinates(chart, rep.o, &E);
    const auto w = pullback_chart(chart, map);
    const CVector zero = CVector::Zero(n);

    const Tensor3 tau = torsion(w, zero);
    Polynomial f = Polynomial::coordinate(n, 0);
    for (int i = 0; i < n; ++i) {
        Exponent a(static_cast<std::size_t>(n), 0);
        a[0] += 1;
        a[static_cast<std::size_t>(i)] += 1;
        f.add_term(a, -0.5 * tau(0, 0, i));
    }
    rep.f = f.chopped(1e-15);
    const auto fn = from_polynomial("counterexample", rep.f);

    std::vector<double> radii = opt.radii;
    if (radii.empty()) {
        for (int k = 0; k < 12; ++k) radii.push_back(0.05 * std::pow(10.0, k / 11.0));
    }
    for (double r : radii) {
        if (r > 0.5 + 1e-12) throw ConfigError("counterexample radii must lie in (0, 0.5]");
    }
    rep.curve = growth_curve(w, zero, modulus_field(fn), radii, Abscissa::log_tn(opt.K), opt.sampler,
                             ValueScale::Log, opt.tol);
    rep.delta0 = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < radii.size(); ++j) {
        const double ratio = rep.curve.M[j] / (2.0 * tn(opt.K, 0.5 * radii[j]));
        rep.ratios.push_back(ratio);
        const double d = 1.0 / std::sqrt(2.0) - ratio;
        if (d > rep.delta0) {
            rep.delta0 = d;
            rep.r_star = radii[j];
        }
    }
    rep.convexity = convexity_check(rep.curve, opt.tol);

    // |f(gamma_X(t))|^2 <= t^2/2 + (F/3) t^4/4 + C t^5
    rep.bound.check = "direct growth bound";
    rep.bound.slack_used = 0.0;
    double worst = std::numeric_limits<double>::infinity();
    const auto wdirs = unit_directions(w, zero, opt.sampler.directions, opt.sampler.seed);
    const double t_max = *std::max_element(opt.bound_times.begin(), opt.bound_times.end());
    GeodesicOptions gopts;
    gopts.tol = opt.tol;
    gopts.checkpoints = opt.bound_times;
    for (std::size_t d = 0; d < wdirs.size(); ++d) {
        const auto path = integrate_geodesic(w, zero, wdirs[d], t_max, gopts);
        for (std::size_t k = 0; k < opt.bound_times.size(); ++k) {
            const double t = opt.bound_times[k];
            if (!path.reached(t)) throw DomainError("bound-check geodesic left the chart");
            const double lhs = std::norm(rep.f(path.z(t)));
            const double slack = opt.bound_slack_coefficient * std::pow(t, 5);
            const double rhs = 0.5 * t * t + rep.functional / 3.0 * std::pow(t, 4) / 4.0;
            const double margin = rhs + slack - lhs;
            if (margin < worst) {
                worst = margin;
                rep.bound.worst_index = static_cast<long>(d * opt.bound_times.size() + k);
                rep.bound.worst_magnitude = std::max(0.0, lhs - rhs);
                rep.bound.slack_used = slack;
            }
        }
    }
    rep.bound.passed = worst >= 0;
    rep.bound.kind = rep.bound.passed ? VerdictKind::BoundHolds : VerdictKind::Violation;
    return rep;
}

}  // namespace threecircle
