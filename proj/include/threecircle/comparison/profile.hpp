#pragma once

// Curvature-decay profiles q, the function v associated to q, and I(q).

#include "threecircle/numerics/ode.hpp"
#include "threecircle/numerics/quadrature.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace threecircle {

/// Nonnegative function on [0, inf) together with what is known about its
/// first moment.
struct DecayProfile {
    std::string name;
    std::function<double(double)> q;
    double T_cut = std::numeric_limits<double>::infinity();
    double tail_bound = 0.0;  // bound on the moment beyond T_cut
    bool integrable = true;
    std::vector<double> breakpoints;  // where q is not smooth
    // Exact first moment over [0, inf), when available.
    std::function<double()> exact_moment;
};

namespace profiles {

inline DecayProfile zero() {
    DecayProfile p;
    p.name = "zero";
    p.q = [](double) { return 0.0; };
    p.exact_moment = [] { return 0.0; };
    return p;
}

inline DecayProfile constant(double c) {
    if (!(c >= 0) || !std::isfinite(c)) throw ConfigError("constant profile needs c >= 0");
    DecayProfile p;
    p.name = "constant";
    p.q = [c](double) { return c; };
    p.integrable = c == 0.0;
    if (p.integrable) p.exact_moment = [] { return 0.0; };
    return p;
}

/// Height c on [0, a] and 0 beyond; `smooth` uses c (1 - (t/a)^2)^2 instead.
inline DecayProfile bump(double c, double a, bool smooth) {
    if (!(c >= 0) || !(a > 0) || !std::isfinite(c) || !std::isfinite(a)) {
        throw ConfigError("bump profile needs height >= 0 and width > 0");
    }
    DecayProfile p;
    p.name = "bump";
    if (smooth) {
        p.q = [c, a](double t) {
            if (t >= a) return 0.0;
            const double s = 1.0 - (t / a) * (t / a);
            return c * s * s;
        };
        p.exact_moment = [c, a] { return c * a * a / 6.0; };
    } else {
        p.q = [c, a](double t) { return t <= a ? c : 0.0; };
        p.exact_moment = [c, a] { return 0.5 * c * a * a; };
    }
    p.breakpoints = {a};
    p.T_cut = a;
    return p;
}

/// C / (1 + t)^3
inline DecayProfile inverse_cube(double C) {
    if (!(C >= 0) || !std::isfinite(C)) throw ConfigError("inverse-cube profile needs C >= 0");
    DecayProfile p;
    p.name = "inverse-cube";
    p.q = [C](double t) { return C / ((1 + t) * (1 + t) * (1 + t)); };
    p.exact_moment = [C] { return 0.5 * C; };
    return p;
}

/// Moment of C / ((1+t)^2 log^{1+eps}(2+t)) over [T, inf).
///
/// With s = log(2+t) the integrand is C s^{-1-eps} (1 - 1/(e^s - 1)^2), so the
/// moment is a closed-form power plus an exponentially small correction.
inline double log_weak_tail(double C, double eps, double T) {
    const double S = std::log(2.0 + T);
    const double upper = std::max(S + 1.0, 40.0);
    const auto corr = quadrature(
        [eps](double s) {
            const double d = std::expm1(s);
            return std::pow(s, -1.0 - eps) / (d * d);
        },
        S, upper, 1e-15);
    return C * (std::pow(S, -eps) / eps - corr.value);
}

inline DecayProfile log_weak(double C, double eps) {
    if (!(C >= 0) || !(eps > 0) || !std::isfinite(C) || !std::isfinite(eps)) {
        throw ConfigError("log-weak profile needs C >= 0 and eps > 0");
    }
    DecayProfile p;
    p.name = "log-weak";
    p.q = [C, eps](double t) { return C / ((1 + t) * (1 + t) * std::pow(std::log(2 + t), 1 + eps)); };
    p.exact_moment = [C, eps] { return log_weak_tail(C, eps, 0.0); };
    return p;
}

}  // namespace profiles

struct ProfileCatalogEntry {
    std::string name;
    std::vector<std::pair<std::string, double>> parameters;  // name, default
    std::string description;
};

inline const std::vector<ProfileCatalogEntry>& profile_catalog() {
    static const std::vector<ProfileCatalogEntry> entries = {
        {"zero", {}, "q = 0"},
        {"constant", {{"c", 1.0}}, "q = c (not integrable for c > 0)"},
        {"bump", {{"height", 1.0}, {"width", 1.0}, {"smooth", 0.0}},
         "q = height on [0, width]; smooth=1 uses height (1 - (t/width)^2)^2"},
        {"inverse-cube", {{"C", 2.0}}, "q = C / (1+t)^3"},
        {"log-weak", {{"C", 1.0}, {"eps", 1.0}}, "q = C / ((1+t)^2 log^(1+eps)(2+t))"},
    };
    return entries;
}

inline DecayProfile make_profile(const std::string& name, const std::map<std::string, double>& params = {}) {
    const ProfileCatalogEntry* entry = nullptr;
    for (const auto& e : profile_catalog()) {
        if (e.name == name) entry = &e;
    }
    if (!entry) throw ConfigError("unknown decay profile '" + name + "'");
    std::map<std::string, double> v;
    for (const auto& [k, d] : entry->parameters) v[k] = d;
    for (const auto& [k, x] : params) {
        if (!v.count(k)) throw ConfigError("profile '" + name + "' has no parameter '" + k + "'");
        v[k] = x;
    }
    if (name == "zero") return profiles::zero();
    if (name == "constant") return profiles::constant(v["c"]);
    if (name == "bump") return profiles::bump(v["height"], v["width"], v["smooth"] != 0.0);
    if (name == "inverse-cube") return profiles::inverse_cube(v["C"]);
    return profiles::log_weak(v["C"], v["eps"]);
}

/// Profile from a user callback; the moment beyond T_cut must be bounded by tail_bound.
inline DecayProfile custom_profile(std::string name, std::function<double(double)> q, double T_cut, double tail_bound,
                                   std::vector<double> breakpoints = {}) {
    DecayProfile p;
    p.name = std::move(name);
    p.q = std::move(q);
    p.T_cut = T_cut;
    p.tail_bound = tail_bound;
    p.integrable = std::isfinite(T_cut) && std::isfinite(tail_bound);
    p.breakpoints = std::move(breakpoints);
    return p;
}

/// log I(q) = int_0^inf t q(t) dt.
inline double profile_moment(const DecayProfile& q, double tol = 1e-11) {
    if (!q.integrable) throw DomainError("profile '" + q.name + "' is flagged non-integrable");
    if (q.exact_moment) return q.exact_moment();
    if (!std::isfinite(q.T_cut)) throw DomainError("profile '" + q.name + "' has no finite truncation radius");
    std::vector<double> knots{0.0};
    for (double b : q.breakpoints) {
        if (b > 0 && b < q.T_cut) knots.push_back(b);
    }
    std::sort(knots.begin(), knots.end());
    knots.push_back(q.T_cut);
    const auto r = quadrature_piecewise([&](double t) { return t * q.q(t); }, knots, tol);
    if (q.tail_bound > tol) {
        throw NumericalError("profile '" + q.name + "': tail bound exceeds the moment tolerance");
    }
    return r.value;
}

inline double compute_Iq(const DecayProfile& q, double tol = 1e-11) { return std::exp(profile_moment(q, tol)); }

/// tn_K(t): tan, identity or tanh branch by the sign of K.
inline double tn(double K, double t) {
    if (!std::isfinite(K) || !std::isfinite(t)) throw DomainError("tn needs finite arguments");
    const double x2 = std::abs(K) * t * t;
    if (x2 < 1e-8) return t * (1.0 + K * t * t / 3.0);
    const double s = std::sqrt(std::abs(K));
    if (K > 0) {
        if (s * std::abs(t) >= M_PI / 2) throw DomainError("tn_K with K > 0 requires sqrt(K) t < pi/2");
        return std::tan(s * t) / s;
    }
    return std::tanh(s * t) / s;
}

/// Geometric grid from t_min to T with at least `nodes` points.
inline std::vector<double> geometric_grid(double t_min, double T, std::size_t nodes) {
    if (!(t_min > 0) || !(T > t_min) || nodes < 2) throw ConfigError("invalid geometric grid");
    std::vector<double> g(nodes);
    const double ratio = std::log(T / t_min) / static_cast<double>(nodes - 1);
    for (std::size_t k = 0; k < nodes; ++k) g[k] = t_min * std::exp(ratio * static_cast<double>(k));
    g.back() = T;
    return g;
}

/// Solution u'' = q u, u(0) = 0, u'(0) = 1, with h = u'/u and v' = 1/u,
/// v(t) - log t -> 0 as t -> 0+.
struct ComparisonProfile {
    DecayProfile source;
    double horizon = 0.0;
    std::vector<double> grid;
    std::vector<double> u, du, h, v, dv;
    double Iq = std::numeric_limits<double>::infinity();
    bool integrable = false;

    // state (e, e', w) with e = u - t, w = v - log t
    std::shared_ptr<const DenseSolution> solution;

    [[nodiscard]] double u_at(double t) const { return t + state(t)[0]; }
    [[nodiscard]] double du_at(double t) const { return 1.0 + state(t)[1]; }
    [[nodiscard]] double h_at(double t) const { return du_at(t) / u_at(t); }
    [[nodiscard]] double v_at(double t) const {
        if (!(t > 0)) throw DomainError("v is defined for t > 0");
        return std::log(t) + state(t)[2];
    }
    [[nodiscard]] double dv_at(double t) const { return 1.0 / u_at(t); }

private:
    [[nodiscard]] OdeState state(double t) const {
        if (t < 0 || t > horizon * (1 + 1e-12)) throw DomainError("profile evaluated outside [0, horizon]");
        return solution->eval(std::min(t, horizon));
    }
};

inline constexpr double kProfileGridStart = 1e-4;
inline constexpr std::size_t kProfileGridNodes = 400;

inline ComparisonProfile solve_profile(const DecayProfile& q, double T, const ToleranceBundle& tol = {},
                                       std::size_t nodes = kProfileGridNodes) {
    if (!(T > kProfileGridStart) || !std::isfinite(T)) throw ConfigError("profile horizon must exceed the grid start");
    ComparisonProfile p;
    p.source = q;
    p.horizon = T;
    p.grid = geometric_grid(kProfileGridStart, T, std::max(nodes, kProfileGridNodes));
    for (double t : p.grid) {
        const double qt = q.q(t);
        if (!(qt >= 0) || !std::isfinite(qt)) throw ConfigError("profile '" + q.name + "' is negative or non-finite");
    }
    if (!(q.q(0.0) >= 0)) throw ConfigError("profile '" + q.name + "' is negative at 0");

    OdeRhs rhs = [&q](double t, const OdeState& y, OdeState& dy) {
        const double qt = q.q(t);
        if (!(qt >= 0)) throw NumericalError("profile '" + q.name + "' negative during integration");
        const double u = t + y[0];
        dy[0] = y[1];
        dy[1] = qt * u;
        // 1/u - 1/t = -e / (u t) with e = q(0) t^3 / 6 + O(t^4); the series
        // is used near 0, where stages may carry e != 0 at t = 0
        dy[2] = t > 1e-6 ? -(y[0] / t) / u : -qt * t / 6.0;
    };
    OdeOptions opts;
    for (double b : q.breakpoints) {
        if (b > 0 && b < T) opts.checkpoints.push_back(b);
    }
    auto sol = std::make_shared<DenseSolution>(integrate_ode(rhs, {0.0, 0.0, 0.0}, 0.0, T, tol, opts));
    if (sol->truncated) throw NumericalError("profile integration failed: " + sol->truncation_reason);
    p.solution = sol;

    const std::size_t N = p.grid.size();
    p.u.resize(N);
    p.du.resize(N);
    p.h.resize(N);
    p.v.resize(N);
    p.dv.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double t = p.grid[k];
        const OdeState y = sol->eval(t);
        p.u[k] = t + y[0];
        p.du[k] = 1.0 + y[1];
        p.h[k] = p.du[k] / p.u[k];
        p.v[k] = std::log(t) + y[2];
        p.dv[k] = 1.0 / p.u[k];
        if (!(p.u[k] > 0)) throw NumericalError("u lost positivity");
    }
    p.integrable = q.integrable;
    if (q.integrable) p.Iq = compute_Iq(q);
    return p;
}

/// Diagnostics for the growth bounds on u' and v.
struct BoundsReport {
    double monotonicity_violation = 0.0;  // max decrease of u' between grid nodes
    double du_end = 0.0;                  // u'(T)
    double Iq = std::numeric_limits<double>::infinity();
    double du_excess = 0.0;         // u'(T) - I(q); skipped when not integrable
    double upper_violation = 0.0;   // max over t > 1 of v(t) - log t - v(1)
    double lower_violation = 0.0;   // max over t > 1 of log t / I(q) + v(1) - v(t)
    double limit_ratio = 0.0;       // (v(T) - v(1)) / log T
    bool limit_in_range = false;    // limit_ratio in [1/I(q), 1] up to slack
    bool skipped = false;           // I(q)-dependent bounds not checked
    std::string skip_reason;

    [[nodiscard]] bool passed(double slack = 1e-8) const {
        if (monotonicity_violation > 1e-10 || upper_violation > slack) return false;
        if (skipped) return true;
        return du_excess <= 1e-6 && lower_violation <= slack && limit_in_range;
    }
};

inline BoundsReport verify_bounds(const ComparisonProfile& p, double slack = 1e-8) {
    BoundsReport r;
    const std::size_t N = p.grid.size();
    for (std::size_t k = 0; k + 1 < N; ++k) {
        r.monotonicity_violation = std::max(r.monotonicity_violation, p.du[k] - p.du[k + 1]);
    }
    r.du_end = p.du.back();
    r.Iq = p.Iq;
    if (p.horizon <= 1.0) {
        r.skipped = true;
        r.skip_reason = "horizon does not exceed 1";
        return r;
    }
    const double v1 = p.v_at(1.0);
    const double inv_I = p.integrable ? 1.0 / p.Iq : 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const double t = p.grid[k];
        if (t <= 1.0) continue;
        const double lt = std::log(t);
        r.upper_violation = std::max(r.upper_violation, p.v[k] - lt - v1);
        r.lower_violation = std::max(r.lower_violation, lt * inv_I + v1 - p.v[k]);
    }
    r.limit_ratio = (p.v.back() - v1) / std::log(p.horizon);
    if (!p.integrable) {
        r.skipped = true;
        r.skip_reason = "profile not integrable: u' is unbounded and I(q) is infinite";
        r.du_excess = 0.0;
        r.limit_in_range = r.limit_ratio <= 1.0 + slack;
        return r;
    }
    r.du_excess = r.du_end - r.Iq;
    r.limit_in_range = r.limit_ratio >= inv_I - slack && r.limit_ratio <= 1.0 + slack;
    return r;
}

}  // namespace threecircle
