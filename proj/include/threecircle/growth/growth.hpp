#pragma once

// Growth curves M_o(u, r) over exponential spheres, convexity and
// monotonicity verdicts.

#include "threecircle/comparison/h_profile.hpp"
#include "threecircle/comparison/profile.hpp"
#include "threecircle/geodesic/exp_sphere.hpp"
#include "threecircle/geometry/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace threecircle {

struct SphereSampler {
    std::size_t directions = 256;
    std::uint64_t seed = 1;
    bool refine = true;
    // best sampled directions used as ascent starts
    std::size_t refine_starts = 2;

    void validate() const {
        if (directions < 8) throw ConfigError("sampler needs at least 8 directions");
        if (refine && refine_starts == 0) throw ConfigError("refinement needs at least one start");
    }
};

struct SphereMax {
    double r = 0.0;
    double M = -std::numeric_limits<double>::infinity();
    double sampled_M = -std::numeric_limits<double>::infinity();
    std::size_t argmax = 0;  // sampled direction index (lowest index wins ties)
    CVector direction;       // maximizing unit direction after refinement
    CVector point;
    double sampling_slack = 0.0;
    bool refined = false;
    std::size_t evaluations = 0;
};

namespace detail {

inline double sphere_area(int dim) {  // |S^{dim}| for odd dim = 2n - 1
    const double n = 0.5 * (dim + 1);
    return 2.0 * std::pow(M_PI, n) / std::tgamma(n);
}

/// Covering scale (|S^{2n-1}| / N)^{1/(2n-1)} of N directions.
inline double covering_scale(int n, std::size_t count) {
    const int dim = 2 * n - 1;
    return std::pow(sphere_area(dim) / static_cast<double>(count), 1.0 / dim);
}

/// Orthonormal basis of the tangent space of S^{m-1} at s.
inline std::vector<RVector> tangent_basis(const RVector& s) {
    const auto m = s.size();
    std::vector<RVector> out;
    for (Eigen::Index k = 0; k < m && static_cast<Eigen::Index>(out.size()) < m - 1; ++k) {
        RVector v = RVector::Unit(m, k);
        v -= s.dot(v) * s;
        for (const auto& b : out) v -= b.dot(v) * b;
        if (v.norm() < 1e-6) continue;
        out.push_back(v.normalized());
    }
    return out;
}

struct Ascent {
    RVector s;
    double value = -std::numeric_limits<double>::infinity();
    double predicted_gain = 0.0;  // quadratic-model gain left at the final point
    std::size_t evals = 0;
};

/// Damped Newton ascent on the unit sphere from s. Gradient and Hessian in
/// the tangent space come from central differences with step h; only
/// improving steps are accepted and steps are capped at `trust`.
template <class Eval>
Ascent sphere_ascent(RVector s, double value, double trust, const Eval& eval, double h = 1e-3,
                     int max_iter = 40) {
    Ascent a{std::move(s), value, 0.0, 0};
    for (int it = 0; it < max_iter; ++it) {
        const auto B = tangent_basis(a.s);
        const int k = static_cast<int>(B.size());
        auto at = [&](const RVector& xi) {
            RVector t = a.s;
            for (int i = 0; i < k; ++i) t += xi(i) * B[static_cast<std::size_t>(i)];
            return RVector(t.normalized());
        };
        auto f = [&](const RVector& xi) {
            ++a.evals;
            return eval(at(xi));
        };
        RVector g(k);
        RMatrix H(k, k);
        std::vector<double> fp(static_cast<std::size_t>(k)), fm(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            RVector e = RVector::Zero(k);
            e(i) = h;
            fp[static_cast<std::size_t>(i)] = f(e);
            fm[static_cast<std::size_t>(i)] = f(-e);
            g(i) = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2 * h);
            H(i, i) = (fp[static_cast<std::size_t>(i)] - 2 * a.value + fm[static_cast<std::size_t>(i)]) / (h * h);
        }
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                RVector e(RVector::Zero(k));
                double acc = 0.0;
                for (double si : {1.0, -1.0}) {
                    for (double sj : {1.0, -1.0}) {
                        e.setZero();
                        e(i) = si * h;
                        e(j) = sj * h;
                        acc += si * sj * f(e);
                    }
                }
                H(i, j) = H(j, i) = acc / (4 * h * h);
            }
        }
        if (!g.allFinite() || !H.allFinite()) break;
        // shift so that -H + mu I is positive definite
        const double hmax = Eigen::SelfAdjointEigenSolver<RMatrix>(H, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
        const double hs = std::max(1e-12, H.cwiseAbs().maxCoeff());
        double mu = std::max(0.0, hmax + 1e-3 * hs);
        bool accepted = false;
        RVector p;
        for (int tries = 0; tries < 30; ++tries) {
            const RMatrix A = -H + mu * RMatrix::Identity(k, k);
            p = A.ldlt().solve(g);
            if (p.norm() > trust) p *= trust / p.norm();
            const double v = f(p);
            if (v > a.value) {
                a.predicted_gain = 0.5 * g.dot(p);
                a.s = at(p);
                a.value = v;
                accepted = true;
                break;
            }
            mu = std::max(4 * mu, hs);
        }
        if (!accepted) {
            a.predicted_gain = 0.0;
            break;
        }
        if (p.norm() < 1e-9) break;
    }
    return a;
}

struct DirectionSet {
    CMatrix E;
    std::vector<RVector> s;
    std::vector<CVector> X;
    double delta = 0.0;
};

inline DirectionSet make_direction_set(const HermitianChart& chart, const CVector& o, const SphereSampler& sampler) {
    DirectionSet d;
    d.E = unitary_frame(chart.g(o));
    d.s = sphere_directions(2 * chart.n(), sampler.directions, sampler.seed);
    for (const auto& s : d.s) d.X.push_back(direction_from_sphere(d.E, s));
    d.delta = covering_scale(chart.n(), sampler.directions);
    return d;
}

inline std::optional<CVector> exp_point(const HermitianChart& chart, const CVector& o, const CVector& X, double r,
                                        const ToleranceBundle& tol) {
    GeodesicOptions opts;
    opts.tol = tol;
    const auto path = integrate_geodesic(chart, o, X, r, opts);
    if (!path.reached(r)) return std::nullopt;
    return path.z(r);
}

/// Sphere maximum from endpoint values (NaN marks an invalid endpoint),
/// refined along geodesics when requested.
inline SphereMax sphere_max_from_samples(const HermitianChart& chart, const CVector& o, double r,
                                         const DirectionSet& dirs, const std::vector<double>& values,
                                         const std::vector<CVector>& points,
                                         const std::function<double(const CVector&)>& u,
                                         const SphereSampler& sampler, const ToleranceBundle& tol) {
    const std::size_t D = values.size();
    SphereMax sm;
    sm.r = r;
    bool any = false;
    for (std::size_t d = 0; d < D; ++d) {
        if (std::isnan(values[d])) continue;
        if (!any || values[d] > sm.sampled_M) {
            sm.sampled_M = values[d];
            sm.argmax = d;
            any = true;
        }
    }
    if (!any) throw DomainError("no valid sphere endpoint");
    sm.M = sm.sampled_M;
    sm.direction = dirs.X[sm.argmax];
    sm.point = points[sm.argmax];

    // neighbour drop at the covering scale
    double drop = 0.0;
    bool has_neighbour = false;
    for (std::size_t d = 0; d < D; ++d) {
        if (d == sm.argmax || std::isnan(values[d])) continue;
        if ((dirs.s[d] - dirs.s[sm.argmax]).norm() <= 2.0 * dirs.delta) {
            drop = std::max(drop, sm.sampled_M - values[d]);
            has_neighbour = true;
        }
    }
    if (!has_neighbour) {
        for (double v : values) {
            if (!std::isnan(v)) drop = std::max(drop, sm.sampled_M - v);
        }
    }
    sm.sampling_slack = drop;
    if (!sampler.refine) return sm;

    std::vector<std::size_t> order;
    for (std::size_t d = 0; d < D; ++d) {
        if (!std::isnan(values[d])) order.push_back(d);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::size_t> starts;
    for (std::size_t d : order) {
        if (starts.size() >= sampler.refine_starts) break;
        bool near = false;
        for (std::size_t s : starts) near = near || (dirs.s[d] - dirs.s[s]).norm() <= dirs.delta;
        if (!near) starts.push_back(d);
    }
    auto eval = [&](const RVector& s) {
        const auto p = exp_point(chart, o, direction_from_sphere(dirs.E, s), r, tol);
        return p ? u(*p) : -std::numeric_limits<double>::infinity();
    };
    sm.refined = true;
    double gain = 0.0;
    for (std::size_t st : starts) {
        const auto a = sphere_ascent(dirs.s[st], values[st], dirs.delta, eval);
        sm.evaluations += a.evals;
        if (a.value > sm.M) {
            sm.M = a.value;
            sm.argmax = st;
            sm.direction = direction_from_sphere(dirs.E, a.s);
            gain = a.predicted_gain;
        } else if (st == sm.argmax) {
            gain = a.predicted_gain;
        }
    }
    if (sm.M > sm.sampled_M) {
        if (auto p = exp_point(chart, o, sm.direction, r, tol)) sm.point = *p;
    }
    // model gain left plus the integration noise floor
    sm.sampling_slack = std::max(gain, 0.0) + 10.0 * tol.ode_rel * std::max(1.0, std::abs(sm.M));
    return sm;
}

}  // namespace detail

/// max of u over exp_o(r S).
inline SphereMax sphere_max(const HermitianChart& chart, const CVector& o, const ScalarField& u, double r,
                            const SphereSampler& sampler, const ToleranceBundle& tol = {}) {
    sampler.validate();
    const auto dirs = detail::make_direction_set(chart, o, sampler);
    const auto S = exp_sphere(chart, o, {r}, dirs.X, tol);
    std::vector<double> values(dirs.X.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t d = 0; d < values.size(); ++d) {
        if (S.valid[0][d]) values[d] = u.value(S.points[0][d]);
    }
    return detail::sphere_max_from_samples(chart, o, r, dirs, values, S.points[0], u.value, sampler, tol);
}

// --- growth curves ---------------------------------------------------------

enum class AbscissaKind { VProfile, Log, LogTnK };

struct Abscissa {
    AbscissaKind kind = AbscissaKind::Log;
    double K = 0.0;
    std::shared_ptr<const ComparisonProfile> profile;

    static Abscissa log_r() { return {}; }
    static Abscissa log_tn(double K) { return {AbscissaKind::LogTnK, K, nullptr}; }
    static Abscissa v_profile(std::shared_ptr<const ComparisonProfile> p) {
        if (!p) throw ConfigError("v-profile abscissa needs a solved profile");
        return {AbscissaKind::VProfile, 0.0, std::move(p)};
    }

    [[nodiscard]] double operator()(double r) const {
        switch (kind) {
            case AbscissaKind::Log:
                return std::log(r);
            case AbscissaKind::LogTnK:
                return std::log(tn(K, 0.5 * r));
            case AbscissaKind::VProfile:
                return profile->v_at(r);
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
    [[nodiscard]] std::string name() const {
        switch (kind) {
            case AbscissaKind::Log:
                return "log";
            case AbscissaKind::LogTnK:
                return "log-tnK";
            case AbscissaKind::VProfile:
                return "v-profile";
        }
        return "";
    }
};

/// Quantity whose convexity is checked: M itself or log M.
enum class ValueScale { Linear, Log };

struct GrowthCurve {
    std::string label;
    Abscissa abscissa;
    ValueScale scale = ValueScale::Log;
    std::vector<double> radii;
    std::vector<double> abscissae;
    std::vector<double> M;
    std::vector<double> y;            // checked quantity (M or log M)
    std::vector<double> second_diff;  // NaN at the two ends
    std::vector<double> slopes;       // (y_{j+1} - y_j) / (t_{j+1} - t_j)
    std::vector<double> sampling_slack;
    std::vector<std::size_t> argmax;
    std::vector<CVector> argmax_direction;
    bool beyond_injectivity_floor = false;

    [[nodiscard]] std::size_t size() const { return radii.size(); }
};

namespace detail {

inline void validate_radii(const std::vector<double>& radii) {
    if (radii.size() < 3) throw ConfigError("a growth curve needs at least 3 radii");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0) || !std::isfinite(radii[k])) throw ConfigError("radii must be positive and finite");
        if (k > 0 && !(radii[k] > radii[k - 1])) throw ConfigError("radii must be strictly increasing");
    }
}

inline void finish_curve(GrowthCurve& c) {
    const std::size_t N = c.size();
    for (std::size_t j = 0; j < N; ++j) {
        if (!std::isfinite(c.y[j])) throw DomainError("growth value is not finite at r = " + std::to_string(c.radii[j]));
        if (j > 0 && !(c.abscissae[j] > c.abscissae[j - 1])) throw DomainError("abscissae are not increasing");
    }
    c.slopes.resize(N - 1);
    for (std::size_t j = 0; j + 1 < N; ++j) {
        c.slopes[j] = (c.y[j + 1] - c.y[j]) / (c.abscissae[j + 1] - c.abscissae[j]);
    }
    c.second_diff.assign(N, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 1; j + 1 < N; ++j) {
        const double hbar = 0.5 * (c.abscissae[j + 1] - c.abscissae[j - 1]);
        c.second_diff[j] = hbar * (c.slopes[j] - c.slopes[j - 1]);
    }
}

}  // namespace detail

/// Growth curves of several fields sharing one exponential sphere sweep.
inline std::vector<GrowthCurve> growth_curves(const HermitianChart& chart, const CVector& o,
                                              const std::vector<ScalarField>& fields, const std::vector<double>& radii,
                                              const Abscissa& abscissa, const SphereSampler& sampler,
                                              ValueScale scale = ValueScale::Log, const ToleranceBundle& tol = {}) {
    detail::validate_radii(radii);
    sampler.validate();
    if (abscissa.kind == AbscissaKind::VProfile && abscissa.profile->horizon < radii.back()) {
        throw ConfigError("profile horizon is shorter than the largest radius");
    }
    const auto dirs = detail::make_direction_set(chart, o, sampler);
    const auto S = exp_sphere(chart, o, radii, dirs.X, tol);
    const std::size_t R = radii.size(), D = dirs.X.size();

    std::vector<GrowthCurve> out;
    for (const auto& u : fields) {
        std::vector<SphereMax> maxima(R);
        parallel_for(R, [&](std::size_t r) {
            std::vector<double> values(D, std::numeric_limits<double>::quiet_NaN());
            for (std::size_t d = 0; d < D; ++d) {
                if (S.valid[r][d]) values[d] = u.value(S.points[r][d]);
            }
            maxima[r] = detail::sphere_max_from_samples(chart, o, radii[r], dirs, values, S.points[r], u.value,
                                                        sampler, tol);
        });
        GrowthCurve c;
        c.label = u.label;
        c.abscissa = abscissa;
        c.scale = scale;
        c.radii = radii;
        c.beyond_injectivity_floor = S.beyond_injectivity_floor;
        for (std::size_t r = 0; r < R; ++r) {
            const auto& m = maxima[r];
            c.abscissae.push_back(abscissa(radii[r]));
            c.M.push_back(m.M);
            if (scale == ValueScale::Log && !(m.M > 0)) throw DomainError("log growth needs a positive maximum");
            c.y.push_back(scale == ValueScale::Log ? std::log(m.M) : m.M);
            c.sampling_slack.push_back(scale == ValueScale::Log ? m.sampling_slack / m.M : m.sampling_slack);
            c.argmax.push_back(m.argmax);
            c.argmax_direction.push_back(m.direction);
        }
        detail::finish_curve(c);
        out.push_back(std::move(c));
    }
    return out;
}

inline GrowthCurve growth_curve(const HermitianChart& chart, const CVector& o, const ScalarField& u,
                                const std::vector<double>& radii, const Abscissa& abscissa,
                                const SphereSampler& sampler, ValueScale scale = ValueScale::Log,
                                const ToleranceBundle& tol = {}) {
    return growth_curves(chart, o, {u}, radii, abscissa, sampler, scale, tol).front();
}

/// Curve from given samples (no sphere sweep), used for synthetic data.
inline GrowthCurve curve_from_values(std::vector<double> radii, std::vector<double> abscissae, std::vector<double> y,
                                     ValueScale scale = ValueScale::Linear) {
    detail::validate_radii(radii);
    if (abscissae.size() != radii.size() || y.size() != radii.size()) throw ConfigError("curve arrays differ in length");
    GrowthCurve c;
    c.label = "samples";
    c.scale = scale;
    c.radii = std::move(radii);
    c.abscissae = std::move(abscissae);
    c.y = std::move(y);
    for (double v : c.y) c.M.push_back(scale == ValueScale::Log ? std::exp(v) : v);
    c.sampling_slack.assign(c.size(), 0.0);
    c.argmax.assign(c.size(), 0);
    c.argmax_direction.assign(c.size(), CVector());
    detail::finish_curve(c);
    return c;
}

// --- verdicts --------------------------------------------------------------

enum class VerdictKind { Convex, Violation, MonotoneIncreasing, MonotoneDecreasing, BoundHolds };

inline std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Convex:
            return "convex";
        case VerdictKind::Violation:
            return "violation";
        case VerdictKind::MonotoneIncreasing:
            return "monotone-increasing";
        case VerdictKind::MonotoneDecreasing:
            return "monotone-decreasing";
        case VerdictKind::BoundHolds:
            return "bound-holds";
    }
    return "";
}

struct Verdict {
    std::string check;
    VerdictKind kind = VerdictKind::Violation;
    bool passed = false;
    long worst_index = -1;
    double worst_magnitude = 0.0;  // amount by which the worst entry goes the wrong way, >= 0
    double slack_used = 0.0;       // slack at the worst index
    std::string detail;
};

/// Convex iff every second difference is >= -slack_j with
/// slack_j = convexity_slack * max(1, |y_j|) * hbar_j^2.
inline Verdict convexity_check(const GrowthCurve& c, const ToleranceBundle& tol = {}) {
    Verdict v;
    v.check = "convexity";
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::size_t j = 1; j + 1 < c.size(); ++j) {
        const double hbar = 0.5 * (c.abscissae[j + 1] - c.abscissae[j - 1]);
        const double slack = tol.convexity_slack * std::max(1.0, std::abs(c.y[j])) * hbar * hbar;
        const double margin = c.second_diff[j] + slack;
        if (margin < worst) {
            worst = margin;
            v.worst_index = static_cast<long>(j);
            v.worst_magnitude = std::max(0.0, -c.second_diff[j]);
            v.slack_used = slack;
        }
        ok = ok && margin >= 0;
    }
    v.passed = ok;
    v.kind = ok ? VerdictKind::Convex : VerdictKind::Violation;
    return v;
}

/// Monotonicity of q_j along the curve abscissae with
/// slack_j = convexity_slack * max(1, |y_j|) * (t_{j+1} - t_j).
inline Verdict monotone_check(std::string check, const std::vector<double>& t, const std::vector<double>& q,
                              const std::vector<double>& scale_ref, bool increasing, const ToleranceBundle& tol = {}) {
    Verdict v;
    v.check = std::move(check);
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::size_t j = 0; j + 1 < q.size(); ++j) {
        const double inc = increasing ? q[j + 1] - q[j] : q[j] - q[j + 1];
        const double slack = tol.convexity_slack * std::max(1.0, std::abs(scale_ref[j])) * (t[j + 1] - t[j]);
        const double margin = inc + slack;
        if (margin < worst) {
            worst = margin;
            v.worst_index = static_cast<long>(j);
            v.worst_magnitude = std::max(0.0, -inc);
            v.slack_used = slack;
        }
        ok = ok && margin >= 0;
    }
    v.passed = ok;
    if (ok) {
        v.kind = increasing ? VerdictKind::MonotoneIncreasing : VerdictKind::MonotoneDecreasing;
    } else {
        v.kind = VerdictKind::Violation;
    }
    return v;
}

struct MonotonicityVerdicts {
    Verdict order_increasing;   // log M - ord v increasing
    Verdict degree_decreasing;  // log M - I(q) deg v decreasing
};

/// Curve must be log M of |f| against v(r) (or log r, the q = 0 profile).
inline MonotonicityVerdicts monotonicity_checks(const GrowthCurve& c, int ord, double deg, double Iq,
                                                const ToleranceBundle& tol = {}) {
    if (c.scale != ValueScale::Log) throw ConfigError("monotonicity checks need a log-scale curve");
    if (c.abscissa.kind == AbscissaKind::LogTnK) throw ConfigError("monotonicity checks need the v abscissa");
    std::vector<double> a(c.size()), b(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        a[j] = c.y[j] - ord * c.abscissae[j];
        b[j] = c.y[j] - Iq * deg * c.abscissae[j];
    }
    MonotonicityVerdicts m;
    m.order_increasing = monotone_check("log M - ord v increasing", c.abscissae, a, c.y, true, tol);
    m.degree_decreasing = monotone_check("log M - I(q) deg v decreasing", c.abscissae, b, c.y, false, tol);
    return m;
}

/// Step profile c on [0, R] dominating -H along geodesics of length <= R
/// from o, with c read from the sampled lower envelope of H.
inline DecayProfile dominating_bump(const HermitianChart& chart, const CVector& o, double R, std::size_t directions,
                                    std::uint64_t seed, const ToleranceBundle& tol = {}) {
    std::vector<double> radii;
    for (int k = 1; k <= 8; ++k) radii.push_back(R * k / 8.0);
    const auto prof = h_lower_profile(chart, o, radii, unit_directions(chart, o, directions, seed), tol);
    const double c = std::max(0.0, -prof.envelope.back());
    if (c == 0.0) return profiles::zero();
    return profiles::bump(c, R, false);
}

}  // namespace threecircle
