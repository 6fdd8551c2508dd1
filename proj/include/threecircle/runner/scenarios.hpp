#pragma once

// Execution of each scenario kind. Every kind declares its checks up front
// from the configuration; results come back in a Report together with the
// CSV artifacts.

#include "threecircle/comparison/profile.hpp"
#include "threecircle/geodesic/exp_sphere.hpp"
#include "threecircle/geodesic/geodesic.hpp"
#include "threecircle/geodesic/normal_coordinates.hpp"
#include "threecircle/geodesic/taylor.hpp"
#include "threecircle/geometry/curvature.hpp"
#include "threecircle/geometry/hessian.hpp"
#include "threecircle/growth/analysis.hpp"
#include "threecircle/growth/counterexample.hpp"
#include "threecircle/growth/growth.hpp"
#include "threecircle/runner/config.hpp"
#include "threecircle/runner/report.hpp"

#include <chrono>
#include <memory>
#include <random>

namespace threecircle::runner {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_scale;
    std::optional<std::size_t> directions;
};

inline void apply_overrides(ScenarioConfig& c, const Overrides& o) {
    if (o.seed) c.sampler.seed = *o.seed;
    if (o.directions) c.sampler.directions = *o.directions;
    if (o.tol_scale) {
        if (!(*o.tol_scale > 0)) throw ConfigError("--tol-scale must be positive");
        c.tol = c.tol.scaled(*o.tol_scale);
    }
    validate(c);
}

namespace detail {

struct Sampler {
    std::mt19937_64 eng;
    explicit Sampler(std::uint64_t seed) : eng(seed) {}
    double gauss() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng); }

    CVector gaussian(int n) {
        CVector v(n);
        for (int k = 0; k < n; ++k) v(k) = cplx(gauss(), gauss());
        return v;
    }

    CVector chart_point(const HermitianChart& c) {
        const double R = c.domain().bounded() ? 0.6 * c.domain().radius : 0.8;
        const CVector v = gaussian(c.n());
        return v * (R * std::pow(uniform(), 1.0 / (2.0 * c.n())) / v.norm());
    }

    RVector unit_real(const HermitianChart& c, const CVector& p) {
        RVector v(2 * c.n());
        for (int a = 0; a < 2 * c.n(); ++a) v(a) = gauss();
        const RMatrix G = real_metric(c.g(p));
        return v / std::sqrt(v.dot(G * v));
    }
};

inline std::vector<double> radii_or(const ScenarioConfig& c, RadiiSpec fallback) {
    return (c.has_radii ? c.radii : fallback).values();
}

inline CVector axis_point(int n, double shift) {
    CVector o = CVector::Zero(n);
    o(0) = shift;
    return o;
}

inline void add_curve(Report& rep, std::size_t index, const GrowthCurve& curve, const std::string& label) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "%02zu", index);
    rep.artifacts.push_back({rep.config.name + "." + idx + "-" + safe_file_component(label) + ".csv", curve_csv(curve)});
}

inline MetricSpec require_metric(const ScenarioConfig& c) {
    if (!c.has_metric) throw ConfigError("a " + c.kind + " scenario needs a metric");
    return c.metric;
}

struct NamedFunction {
    std::string label;
    HolomorphicTestFunction f;
};

inline std::vector<NamedFunction> functions_or_catalog(const ScenarioConfig& c, int n) {
    std::vector<NamedFunction> out;
    if (c.functions.empty()) {
        for (auto& f : polynomial_catalog(n)) out.push_back({f.name, f});
        return out;
    }
    for (const auto& s : c.functions) out.push_back({spec_label(s), make_function(s)});
    return out;
}

/// Abscissa for growth curves; returns I(q) alongside.
inline std::pair<Abscissa, double> abscissa_for(const ScenarioConfig& c, const Options& o, const HermitianChart& chart,
                                                const CVector& base, double r_max) {
    const std::string kind = o.get<std::string>("abscissa", c.profile ? "profile" : "log-r");
    if (kind == "log-r") return {Abscissa::log_r(), 1.0};
    if (kind == "log-tn") return {Abscissa::log_tn(o.get<double>("K", 0.0)), 1.0};
    if (kind != "profile") throw ConfigError("options.abscissa must be 'log-r', 'log-tn' or 'profile'");
    if (!c.profile) throw ConfigError("the profile abscissa needs a profile");
    DecayProfile q = c.profile->name == "dominating-bump"
                         ? dominating_bump(chart, base, r_max, o.get<std::size_t>("profile_directions", 64),
                                           c.sampler.seed, c.tol)
                         : make_profile(c.profile->name, c.profile->params);
    auto prof = std::make_shared<const ComparisonProfile>(solve_profile(q, 1.01 * r_max, c.tol));
    return {Abscissa::v_profile(prof), prof->Iq};
}

// --- kinds -----------------------------------------------------------------

inline void run_curvature_equivalence(Report& rep) {
    const auto& c = rep.config;
    const Options o(c.options, c.kind, {"samples", "l_samples", "rel_tol", "l_tol"});
    const int samples = o.get<int>("samples", 120), l_samples = o.get<int>("l_samples", 50);
    const double rel_tol = o.get<double>("rel_tol", 1e-5), l_tol = o.get<double>("l_tol", 1e-6);
    if (samples < 1 || l_samples < 1) throw ConfigError("sample counts must be positive");
    std::vector<HermitianChart> charts;
    for (const auto& m : c.metric_set()) charts.push_back(make_metric(m));

    Sampler rng(c.sampler.seed);
    double worst = 0.0;
    std::string worst_at;
    for (int t = 0; t < samples; ++t) {
        const auto& ch = charts[static_cast<std::size_t>(t) % charts.size()];
        const CVector p = rng.chart_point(ch);
        const RVector X = rng.unit_real(ch, p);
        const auto md = ch.derivatives(p);
        const double H = holomorphic_sectional_curvature(md, std::sqrt(2.0) * to_complex(X));
        const double rhs = riemannian_side(levi_civita(md), X);
        const double rel = std::abs(H - rhs) / std::max(1.0, std::abs(H));
        if (rel > worst) {
            worst = rel;
            worst_at = ch.label();
        }
    }
    auto c1 = bound_check("holomorphic-sectional-identity", worst, rel_tol, "worst chart " + worst_at);
    c1.data["samples"] = samples;
    rep.checks.push_back(c1);

    double worst_L = 0.0;
    for (int t = 0; t < l_samples; ++t) {
        const auto& ch = charts[static_cast<std::size_t>(t) % charts.size()];
        const CVector p = rng.chart_point(ch);
        const CVector coeffs = rng.gaussian(ch.n());
        const auto u = ScalarField::from_generic("mixed", [coeffs](const auto& z) {
            auto s = metrics::norm_squared(z);
            auto acc = 0.3 * s * s;
            for (std::size_t k = 0; k < z.size(); ++k) {
                const cplx a = coeffs(static_cast<Eigen::Index>(k));
                acc += a * z[k] + conj(a * z[k]);
            }
            return acc + z[0] * z[0] * conj(z[0]) + conj(z[0] * z[0]) * z[0];
        });
        const auto L = L_operator_values(hessians(ch, p, u));
        const double scale = std::max(1.0, std::abs(L.direct));
        worst_L = std::max({worst_L, L.spread() / scale, L.imag_residual / scale});
    }
    auto c2 = bound_check("L-operator-triple-identity", worst_L, l_tol);
    c2.data["samples"] = l_samples;
    rep.checks.push_back(c2);
}

inline void run_comparison_ode(Report& rep) {
    const auto& c = rep.config;
    const Options o(c.options, c.kind,
                    {"horizon", "closed_form_window", "closed_form_tol", "monotone_tol", "iq_slack", "bound_slack",
                     "unbounded_horizon", "unbounded_threshold"});
    const double T = o.get<double>("horizon", 50.0);
    const auto window = o.get<std::array<double, 2>>("closed_form_window", {0.1, 5.0});
    const double cf_tol = o.get<double>("closed_form_tol", 1e-6), mono_tol = o.get<double>("monotone_tol", 1e-10);
    const double iq_slack = o.get<double>("iq_slack", 1e-6), bound_slack = o.get<double>("bound_slack", 1e-8);
    const double T_unb = o.get<double>("unbounded_horizon", 10.0), unb = o.get<double>("unbounded_threshold", 1e3);
    if (!(window[0] > 0 && window[1] > window[0] && window[1] <= T)) throw ConfigError("bad closed_form_window");

    std::vector<ProfileSpec> specs = c.profiles;
    if (specs.empty() && c.profile) specs.push_back(*c.profile);
    if (specs.empty()) {
        for (const auto& e : profile_catalog()) specs.push_back({e.name, {}});
    }
    for (const auto& s : specs) {
        const std::string lab = spec_label(s);
        const auto q = make_profile(s.name, s.params);
        const auto p = solve_profile(q, T, c.tol);
        const auto b = verify_bounds(p, bound_slack);
        rep.artifacts.push_back({c.name + ".profile-" + safe_file_component(lab) + ".csv", profile_csv(p)});
        rep.checks.push_back(bound_check("u-prime-nondecreasing[" + lab + "]", b.monotonicity_violation, mono_tol));
        if (p.integrable) {
            auto ci = bound_check("u-prime-below-Iq[" + lab + "]", b.du_excess, iq_slack);
            ci.data = {{"u_prime_T", b.du_end}, {"Iq", b.Iq}, {"T", T}};
            rep.checks.push_back(ci);
            auto cv = bound_check("v-bounds[" + lab + "]", std::max(b.upper_violation, b.lower_violation), bound_slack);
            cv.passed = cv.passed && b.limit_in_range;
            cv.data = {{"upper_violation", b.upper_violation},
                       {"lower_violation", b.lower_violation},
                       {"limit_ratio", b.limit_ratio}};
            rep.checks.push_back(cv);
        } else {
            const auto pu = solve_profile(q, T_unb, c.tol);
            Check cu;
            cu.name = "u-prime-unbounded[" + lab + "]";
            cu.magnitude = pu.du.back();
            cu.slack = unb;
            cu.passed = pu.du.back() > unb;
            cu.kind = cu.passed ? "growth-confirmed" : "violation";
            cu.detail = b.skip_reason;
            rep.checks.push_back(cu);
        }
        if (s.name == "constant" && param_or(s.params, "c", 1.0) > 0) {
            const double K = -param_or(s.params, "c", 1.0);
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            const int N = 200;
            for (int k = 0; k <= N; ++k) {
                const double t = window[0] + (window[1] - window[0]) * k / N;
                const double d = p.v_at(t) - std::log(tn(K, 0.5 * t));
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            auto cc = bound_check("closed-form-tn[" + lab + "]", 0.5 * (hi - lo), cf_tol);
            cc.data = {{"best_fit_constant", 0.5 * (hi + lo)}, {"K", K}};
            rep.checks.push_back(cc);
        }
    }
}

inline void run_geodesic_taylor(Report& rep) {
    const auto& c = rep.config;
    const Options o(c.options, c.kind,
                    {"shifts", "directions", "times", "min_order", "normal_directions", "christoffel_tol",
                     "derivative_tol"});
    const auto shifts = o.get<std::vector<double>>("shifts", {0.0, 0.5});
    const auto D = o.get<std::size_t>("directions", 10);
    auto times = o.get<std::vector<double>>("times", {0.1, 0.05, 0.025});
    const double min_order = o.get<double>("min_order", 3.7);
    const int normal_dirs = o.get<int>("normal_directions", 20);
    const double chr_tol = o.get<double>("christoffel_tol", 1e-8), der_tol = o.get<double>("derivative_tol", 1e-6);
    if (times.size() < 2) throw ConfigError("options.times needs at least two values");
    std::sort(times.begin(), times.end(), std::greater<>());
    Sampler rng(c.sampler.seed);

    for (const auto& spec : c.metric_set()) {
        const auto ch = make_metric(spec);
        for (double shift : shifts) {
            const CVector base = axis_point(ch.n(), shift);
            if (!ch.domain().contains(base)) throw ConfigError("shift " + format_number(shift) + " leaves chart " + spec_label(spec));
            const std::string at = spec_label(spec) + "@" + format_number(shift);

            double order = std::numeric_limits<double>::infinity(), worst_err = 0.0;
            GeodesicOptions opts;
            opts.tol = c.tol;
            opts.checkpoints = times;
            for (const auto& X : unit_directions(ch, base, D, c.sampler.seed)) {
                const auto nt = geodesic_taylor_normal(ch, base, X, c.tol);
                const auto path = integrate_geodesic(ch, base, X, times.front(), opts);
                for (std::size_t k = 0; k + 1 < times.size(); ++k) {
                    const double a = (path.z(times[k]) - nt(times[k])).norm();
                    const double b = (path.z(times[k + 1]) - nt(times[k + 1])).norm();
                    worst_err = std::max(worst_err, a);
                    if (a < 1e-13) break;  // exact to rounding
                    order = std::min(order, std::log2(a / b));
                }
            }
            Check ct;
            ct.name = "taylor-order[" + at + "]";
            ct.passed = order >= min_order;
            ct.kind = ct.passed ? "order-confirmed" : "violation";
            ct.magnitude = order;
            ct.slack = min_order;
            ct.detail = std::isinf(order) ? "expansion exact to rounding in every direction" : "";
            ct.data = {{"directions", D}, {"max_error", worst_err}};
            rep.checks.push_back(ct);

            const auto map = normal_holomorphic_coordinates(ch, base);
            const auto w = pullback_chart(ch, map);
            std::vector<CVector> dirs;
            for (int k = 0; k < normal_dirs; ++k) dirs.push_back(rng.gaussian(ch.n()));
            const auto res = normalization_residuals(w, dirs);
            Check cn;
            cn.name = "normal-coordinates[" + at + "]";
            cn.passed = res.christoffel < chr_tol && res.derivative < der_tol;
            cn.kind = cn.passed ? "bound-holds" : "violation";
            cn.magnitude = std::max(res.christoffel / chr_tol, res.derivative / der_tol);
            cn.slack = 1.0;
            cn.detail = "magnitude is the larger residual as a fraction of its tolerance";
            cn.data = {{"metric", res.metric}, {"christoffel", res.christoffel}, {"derivative", res.derivative}};
            rep.checks.push_back(cn);
        }
    }
}

inline void run_three_circle(Report& rep) {
    const auto& c = rep.config;
    const Options o(c.options, c.kind, {"abscissa", "K", "base_point", "profile_directions"});
    const auto ch = make_metric(require_metric(c));
    if (c.functions.empty()) throw ConfigError("a three-circle scenario needs functions");
    const CVector base = o.point("base_point", ch.n()).value_or(CVector::Zero(ch.n()));
    const auto radii = radii_or(c, {0.1, 3.0, 16, "geometric"});
    const auto [abscissa, Iq] = abscissa_for(c, o, ch, base, radii.back());
    (void)Iq;
    const auto fns = functions_or_catalog(c, ch.n());
    std::vector<ScalarField> fields;
    for (const auto& f : fns) fields.push_back(modulus_field(f.f));
    const auto curves = growth_curves(ch, base, fields, radii, abscissa, c.sampler, ValueScale::Log, c.tol);
    for (std::size_t k = 0; k < fns.size(); ++k) {
        auto chk = check_from("convexity[" + fns[k].label + "]", convexity_check(curves[k], c.tol));
        chk.data["abscissa"] = abscissa.name();
        rep.checks.push_back(chk);
        add_curve(rep, k, curves[k], fns[k].label);
    }
}

inline void run_monotonicity(Report& rep) {
    const auto& c = rep.config;
    const Options o(c.options, c.kind, {"abscissa", "K", "base_point", "profile_directions"});
    const auto ch = make_metric(require_metric(c));
    const CVector base = o.point("base_point", ch.n()).value_or(CVector::Zero(ch.n()));
    const auto radii = radii_or(c, {0.1, 3.0, 12, "geometric"});
    const auto [abscissa, Iq] = abscissa_for(c, o, ch, base, radii.back());
    const auto fns = functions_or_catalog(c, ch.n());
    std::vector<ScalarField> fields;
    for (const auto& f : fns) fields.push_back(modulus_field(f.f));
    const auto curves = growth_curves(ch, base, fields, radii, abscissa, c.sampler, ValueScale::Log, c.tol);
    for (std::size_t k = 0; k < fns.size(); ++k) {
        const auto& lab = fns[k].label;
        const auto od = ord_and_degree(fns[k].f, base);
        Check cod;
        cod.name = "ord-le-deg[" + lab + "]";
        cod.passed = od.ord <= od.deg;
        cod.kind = cod.passed ? "bound-holds" : "violation";
        cod.magnitude = od.ord - od.deg;
        cod.data = {{"ord", od.ord}, {"deg", od.deg}, {"declared", od.declared}};
        rep.checks.push_back(cod);
        if (std::isfinite(od.deg)) {
            const auto m = monotonicity_checks(curves[k], od.ord, od.deg, Iq, c.tol);
            rep.checks.push_back(check_from("order-increasing[" + lab + "]", m.order_increasing));
            rep.checks.push_back(check_from("degree-decreasing[" + lab + "]", m.degree_decreasing));
        } else {
            const Verdict v = monotone_check("log M - ord v", curves[k].abscissae,
                                             [&] {
                                                 std::vector<double> a;
                                                 for (std::size_t j = 0; j < curves[k].size(); ++j) {
                                                     a.push_back(curves[k].y[j] - od.ord * curves[k].abscissae[j]);
                                                 }
                                                 return a;
                                             }(),
                                             curves[k].y, true, c.tol);
            rep.checks.push_back(check_from("order-increasing[" + lab + "]", v));
            Check cd;
            cd.name = "degree-decreasing[" + lab + "]";
            cd.passed = true;
            cd.kind = "vacuous";
            cd.detail = "infinite degree";
            rep.checks.push_back(cd);
        }
        add_curve(rep, k, curves[k], lab);
    }
}

inline void run_max_principle(Report& rep) {
    const auto& c = rep.config;
    const Options o(c.options, c.kind, {"center_shift", "radius", "slack"});
    const double shift = o.get<double>("center_shift", 0.2), radius = o.get<double>("radius", 0.5);
    const double slack = o.get<double>("slack", 1e-8);
    for (const auto& spec : c.metric_set()) {
        const auto ch = make_metric(spec);
        const CVector center = axis_point(ch.n(), shift);
        for (const auto& u : psh_catalog(ch.n())) {
            const auto r = max_principle_check(ch, center, radius, u, c.sampler, c.tol, slack);
            auto chk = check_from("max-principle[" + spec_label(spec) + ": " + u.label + "]", r.verdict);
            chk.passed = r.verdict.passed && r.hypothesis_ok;
            chk.data = {{"interior_max", r.interior_max},
                        {"boundary_max", r.boundary_max},
                        {"min_L", r.min_L},
                        {"interior_samples", r.interior_samples}};
            rep.checks.push_back(chk);
        }
    }
}

inline void run_counterexample(Report& rep) {
    const auto& c = rep.config;
    const Options o(c.options, c.kind,
                    {"K", "threshold", "bound_times", "bound_slack_coefficient", "base_point", "controls"});
    CounterexampleOptions base;
    if (c.has_metric) base.metric = c.metric;
    base.K = o.get<double>("K", 0.0);
    if (c.has_radii) base.radii = c.radii.values();
    base.sampler = c.sampler;
    base.bound_times = o.get<std::vector<double>>("bound_times", base.bound_times);
    base.bound_slack_coefficient = o.get<double>("bound_slack_coefficient", base.bound_slack_coefficient);
    base.delta_threshold = o.get<double>("threshold", base.delta_threshold);
    base.tol = c.tol;
    base.o = o.point("base_point", base.metric.n);

    auto summary = [](const CounterexampleReport& r) {
        return json{{"functional", r.functional}, {"delta0", r.delta0}, {"r_star", r.r_star},
                    {"convexity_worst", r.convexity.worst_magnitude}, {"K", r.K}};
    };
    std::size_t artifact = 0;
    const auto main = counterexample_scenario(base);
    const std::string lab = spec_label(base.metric);
    const double th = base.delta_threshold;
    Check cf = bound_check("functional-negative[" + lab + "]", main.functional, -std::numeric_limits<double>::min());
    rep.checks.push_back(cf);
    Check cv;
    cv.name = "violation detected as expected[" + lab + "]";
    cv.passed = main.violation_detected(th);
    cv.kind = cv.passed ? "violation-detected" : "no-violation";
    cv.magnitude = main.delta0;
    cv.slack = th;
    cv.detail = cv.passed ? "violation detected as expected" : "expected a growth defect and a convexity violation";
    cv.data = summary(main);
    rep.checks.push_back(cv);
    rep.checks.push_back(check_from("direct-bound[" + lab + "]", main.bound));
    add_curve(rep, artifact++, main.curve, "counterexample-" + lab);

    if (o.has("controls")) {
        const auto& arr = o.raw("controls");
        if (!arr.is_array()) throw ConfigError("options.controls must be an array");
        for (const auto& j : arr) {
            ::threecircle::runner::detail::require_keys(j, "options.controls", {"metric", "K"});
            CounterexampleOptions ctl = base;
            ctl.metric = parse_metric(j.at("metric"), "options.controls");
            ctl.K = get<double>(j, "K", "options.controls", 0.0);
            ctl.o.reset();
            const auto r = counterexample_scenario(ctl);
            const std::string cl = spec_label(ctl.metric);
            Check cc;
            cc.name = "no violation on control[" + cl + "]";
            cc.passed = !r.violation_detected(th);
            cc.kind = cc.passed ? "no-violation" : "violation-detected";
            cc.magnitude = r.delta0;
            cc.slack = th;
            cc.data = summary(r);
            rep.checks.push_back(cc);
            add_curve(rep, artifact++, r.curve, "control-" + cl);
        }
    }
}

inline void run_dimension_count(Report& rep) {
    const auto& c = rep.config;
    const Options o(c.options, c.kind, {"n_max", "d_max", "Iq"});
    const int n_max = o.get<int>("n_max", 3), d_max = o.get<int>("d_max", 5);
    const double Iq = o.get<double>("Iq", 1.0);
    if (n_max < 1 || d_max < 0) throw ConfigError("dimension-count needs n_max >= 1 and d_max >= 0");
    for (int n = 1; n <= n_max; ++n) {
        CVector base(n);
        for (int k = 0; k < n; ++k) base(k) = cplx(0.3 * (k + 1), -0.2);
        for (int d = 0; d <= d_max; ++d) {
            const auto dc = dimension_count(n, d, base, Iq);
            Check ch;
            ch.name = "dimension[n=" + std::to_string(n) + ",d=" + std::to_string(d) + "]";
            ch.passed = dc.consistent();
            ch.kind = ch.passed ? "rank-matches" : "violation";
            ch.magnitude = static_cast<double>(dc.rank);
            ch.slack = static_cast<double>(dc.expected);
            ch.data = {{"rank", dc.rank}, {"expected", dc.expected}, {"basis_size", dc.basis_size}};
            rep.checks.push_back(ch);
        }
    }
}

}  // namespace detail

/// Runs one scenario. ConfigError propagates; other library errors are
/// recorded in the report and make it fail.
inline Report run_scenario(const ScenarioConfig& config) {
    Report rep;
    rep.config = config;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto& k = config.kind;
        if (k == "curvature-equivalence") detail::run_curvature_equivalence(rep);
        else if (k == "comparison-ode") detail::run_comparison_ode(rep);
        else if (k == "geodesic-taylor") detail::run_geodesic_taylor(rep);
        else if (k == "three-circle") detail::run_three_circle(rep);
        else if (k == "monotonicity") detail::run_monotonicity(rep);
        else if (k == "max-principle") detail::run_max_principle(rep);
        else if (k == "counterexample") detail::run_counterexample(rep);
        else if (k == "dimension-count") detail::run_dimension_count(rep);
        else throw ConfigError("unknown scenario kind '" + k + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        rep.error = e.what();
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

/// Text listing of the catalogs, in catalog order.
inline std::string list_catalogs() {
    std::ostringstream os;
    os << "metrics:\n";
    for (const auto& e : metric_catalog()) os << "  " << e.name << "  [" << e.parameters << "]  " << e.description << "\n";
    os << "functions:\n";
    for (const auto& e : function_catalog()) os << "  " << e.name << "  [" << e.parameters << "]  " << e.description << "\n";
    os << "profiles:\n";
    for (const auto& e : profile_catalog()) {
        std::string p;
        for (const auto& [k, v] : e.parameters) p += (p.empty() ? "" : ", ") + k + "=" + format_number(v);
        os << "  " << e.name << "  [" << (p.empty() ? "(none)" : p) << "]  " << e.description << "\n";
    }
    os << "  dominating-bump  [(none)]  step profile fitted to the sampled lower envelope of H (growth scenarios)\n";
    os << "scenario kinds:\n";
    for (const auto& k : scenario_kinds()) os << "  " << k << "\n";
    return os.str();
}

}  // namespace threecircle::runner
