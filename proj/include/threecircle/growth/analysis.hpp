#pragma once

// Vanishing order and degree, the truncation map Phi and dimension counts,
// maximum-principle and Liouville probes, zero witnesses.

#include "threecircle/growth/growth.hpp"
#include "threecircle/growth/polynomial.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace threecircle {

struct OrderDegree {
    int ord = 0;
    double deg = 0.0;
    bool declared = false;  // transcendental entry: values are declared, not computed
};

namespace detail {

/// Taylor polynomial at o in centered coordinates, rounding noise removed.
inline Polynomial centered(const Polynomial& p, const CVector& o) {
    const Polynomial s = p.shifted(o);
    double scale = 0.0;
    for (const auto& [a, c] : s.terms()) scale = std::max(scale, std::abs(c));
    return s.chopped(1e-13 * std::max(1.0, scale));
}

}  // namespace detail

inline OrderDegree ord_and_degree(const HolomorphicTestFunction& f, const CVector& o) {
    if (o.size() != f.n) throw ConfigError("base point dimension does not match function");
    OrderDegree od;
    if (f.poly) {
        if (f.poly->is_zero()) throw DomainError("order and degree of the zero polynomial");
        od.ord = detail::centered(*f.poly, o).low_degree();
        od.deg = f.poly->degree();
        return od;
    }
    if (!f.order_at) throw DomainError("function '" + f.name + "' has no declared vanishing order");
    od.ord = f.order_at(o);
    od.deg = f.declared_degree;
    od.declared = true;
    return od;
}

/// Taylor polynomial of f at o, in coordinates centered at o, of total
/// degree <= floor(Iq d).
inline Polynomial phi_truncation(const HolomorphicTestFunction& f, const CVector& o, double d, double Iq) {
    if (!(d >= 0) || !(Iq >= 1)) throw ConfigError("truncation needs d >= 0 and I(q) >= 1");
    const int D = static_cast<int>(std::floor(Iq * d + 1e-12));
    if (f.poly) return detail::centered(*f.poly, o).truncated(D);
    if (f.taylor_at) return f.taylor_at(o, D).truncated(D);
    throw DomainError("no Taylor expansion available for '" + f.name + "'");
}

struct DimensionCount {
    int n = 0;
    int d = 0;
    std::size_t basis_size = 0;
    long rank = 0;
    long expected = 0;  // binomial(n + d, n)

    [[nodiscard]] bool consistent() const {
        return rank == expected && static_cast<long>(basis_size) == expected;
    }
};

/// Rank of Phi on the monomial basis of polynomials of degree <= d, taken
/// at base point o (Iq = 1 on flat space).
inline DimensionCount dimension_count(int n, int d, const CVector& o, double Iq = 1.0) {
    if (n < 1 || d < 0) throw ConfigError("dimension count needs n >= 1 and d >= 0");
    DimensionCount dc;
    dc.n = n;
    dc.d = d;
    const auto basis = monomials_up_to(n, d);
    const auto target = monomials_up_to(n, static_cast<int>(std::floor(Iq * d + 1e-12)));
    dc.basis_size = basis.size();
    dc.expected = static_cast<long>(binomial(n + d, n));
    CMatrix A(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(target.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto f = from_polynomial("monomial", Polynomial::monomial(basis[i]));
        const Polynomial img = phi_truncation(f, o, d, Iq);
        for (std::size_t j = 0; j < target.size(); ++j) {
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = img.coefficient(target[j]);
        }
    }
    Eigen::FullPivLU<CMatrix> lu(A);
    lu.setThreshold(1e-10);
    dc.rank = lu.rank();
    return dc;
}

// --- maximum principle -----------------------------------------------------

struct MaxPrincipleReport {
    Verdict verdict;
    bool hypothesis_ok = false;
    double min_L = std::numeric_limits<double>::infinity();
    double interior_max = -std::numeric_limits<double>::infinity();
    double boundary_max = -std::numeric_limits<double>::infinity();
    std::size_t interior_samples = 0;
};

/// Omega is the coordinate ball |z - center| < radius. Interior samples lie
/// on concentric spheres; the boundary maximum is refined by sphere ascent.
inline MaxPrincipleReport max_principle_check(const HermitianChart& chart, const CVector& center, double radius,
                                              const ScalarField& u, const SphereSampler& sampler,
                                              const ToleranceBundle& tol = {}, double slack = 1e-8) {
    sampler.validate();
    if (!(radius > 0)) throw ConfigError("sub-ball radius must be positive");
    if (chart.domain().margin(center) <= radius * (1 + 1e-9)) throw ConfigError("sub-ball is not inside the chart");
    const int n = chart.n();
    const auto dirs = sphere_directions(2 * n, sampler.directions, sampler.seed);
    auto at = [&](const RVector& s, double rho) { return CVector(center + rho * to_complex(s)); };

    MaxPrincipleReport rep;
    std::vector<CVector> interior{center};
    for (double f : {0.25, 0.5, 0.75, 0.9}) {
        for (const auto& s : dirs) interior.push_back(at(s, f * radius));
    }
    rep.interior_samples = interior.size();
    std::vector<double> L(interior.size()), val(interior.size());
    parallel_for(interior.size(), [&](std::size_t k) {
        L[k] = L_operator(chart, interior[k], u, tol);
        val[k] = u.value(interior[k]);
    });
    double L_scale = 1.0;
    for (std::size_t k = 0; k < interior.size(); ++k) {
        rep.min_L = std::min(rep.min_L, L[k]);
        L_scale = std::max(L_scale, std::abs(L[k]));
        rep.interior_max = std::max(rep.interior_max, val[k]);
    }
    rep.hypothesis_ok = rep.min_L >= -tol.tensor_rel * L_scale;
    rep.verdict.check = "maximum principle";
    if (!rep.hypothesis_ok) {
        rep.verdict.kind = VerdictKind::Violation;
        rep.verdict.passed = false;
        rep.verdict.detail = "skipped: L[u] < 0 at an interior sample";
        return rep;
    }

    std::vector<double> bvals(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) bvals[d] = u.value(at(dirs[d], radius));
    std::vector<std::size_t> order(dirs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return bvals[a] > bvals[b]; });
    rep.boundary_max = bvals[order.front()];
    const double delta = detail::covering_scale(n, dirs.size());
    auto eval = [&](const RVector& s) { return u.value(at(s, radius)); };
    const std::size_t starts = std::min<std::size_t>(sampler.refine ? sampler.refine_starts : 0, order.size());
    for (std::size_t k = 0; k < starts; ++k) {
        const auto a = detail::sphere_ascent(dirs[order[k]], bvals[order[k]], delta, eval, 1e-4);
        rep.boundary_max = std::max(rep.boundary_max, a.value);
    }
    rep.verdict.slack_used = slack;
    rep.verdict.worst_magnitude = std::max(0.0, rep.interior_max - rep.boundary_max);
    rep.verdict.passed = rep.interior_max <= rep.boundary_max + slack;
    rep.verdict.kind = rep.verdict.passed ? VerdictKind::BoundHolds : VerdictKind::Violation;
    return rep;
}

/// Plurisubharmonic fields used for maximum-principle sweeps.
inline std::vector<ScalarField> psh_catalog(int n) {
    std::vector<ScalarField> out;
    out.push_back(ScalarField::from_generic("re-z1", [](const auto& z) { return z[0]; }));
    out.push_back(ScalarField::from_generic("norm-squared", [](const auto& z) { return metrics::norm_squared(z); }));
    out.push_back(ScalarField::from_generic(
        "log-norm-squared-eps", [](const auto& z) { return log(metrics::norm_squared(z) + 0.01); }));
    const auto f = make_function({"z1-plus-z1-cubed", n, {}, {}});
    const auto one = from_polynomial("one", Polynomial::constant(n, 1.0));
    auto lf = log_sum_squares_field({one, f}, 0.0);
    lf.label = "log(1+|z1+z1^3|^2)";
    out.push_back(lf);
    auto m = modulus_field(make_function({"one-plus-z", n, {}, {}}));
    out.push_back(m);
    if (n >= 2) {
        out.push_back(log_sum_squares_field(
            {make_function({"z1z2", n, {}, {}}), make_function({"linear", n, {{"k", 2}}, {}})}, 0.01));
    }
    return out;
}

// --- Liouville probe -------------------------------------------------------

struct LiouvilleReport {
    int k = 0;  // ord_o(f - f(o))
    Verdict verdict;
    GrowthCurve curve;
};

/// M_o(|f - f(o)|, r) e^{-k v(r)} nondecreasing on the radii.
inline LiouvilleReport liouville_probe(const HermitianChart& chart, const CVector& o,
                                       const HolomorphicTestFunction& f, const DecayProfile& q,
                                       const std::vector<double>& radii, const SphereSampler& sampler,
                                       const ToleranceBundle& tol = {}) {
    if (!f.poly) throw ConfigError("Liouville probe needs a polynomial");
    const Polynomial h = *f.poly - Polynomial::constant(f.n, (*f.poly)(o));
    if (detail::centered(h, o).is_zero()) throw ConfigError("Liouville probe needs a nonconstant polynomial");
    LiouvilleReport rep;
    const auto hf = from_polynomial(f.name + " - f(o)", h);
    rep.k = ord_and_degree(hf, o).ord;
    auto prof = std::make_shared<const ComparisonProfile>(solve_profile(q, radii.back() * 1.01, tol));
    rep.curve = growth_curve(chart, o, modulus_field(hf), radii, Abscissa::v_profile(prof), sampler,
                             ValueScale::Log, tol);
    std::vector<double> a(rep.curve.size());
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = rep.curve.y[j] - rep.k * rep.curve.abscissae[j];
    rep.verdict = monotone_check("M e^{-k v} nondecreasing", rep.curve.abscissae, a, rep.curve.y, true, tol);
    return rep;
}

// --- zero witnesses --------------------------------------------------------

struct ZeroWitness {
    bool found = false;
    CVector point;
    double residual = std::numeric_limits<double>::infinity();
    CVector seed;
    int iterations = 0;
};

/// Grid search over the ball |z| <= search_radius with `density` nodes per
/// real axis, then damped Gauss-Newton from the best seeds (50 steps max).
inline ZeroWitness zero_witness_search(const HolomorphicTestFunction& f, double search_radius, int density,
                                       std::size_t seeds = 8) {
    if (!f.poly) throw ConfigError("zero search needs a polynomial");
    if (f.poly->is_zero() || f.poly->degree() == 0) throw ConfigError("zero search needs a nonconstant polynomial");
    if (!(search_radius > 0) || density < 2) throw ConfigError("zero search needs a positive radius and density >= 2");
    const int n = f.n, m = 2 * n;
    const double total = std::pow(static_cast<double>(density), m);
    if (total > 5e6) throw ConfigError("zero search grid too large");

    const Polynomial& p = *f.poly;
    std::vector<Polynomial> grad;
    for (int k = 0; k < n; ++k) grad.push_back(p.derivative(k));

    std::vector<std::pair<double, CVector>> best;
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    for (long g = 0; g < static_cast<long>(total); ++g) {
        long rem = g;
        RVector x(m);
        for (int a = 0; a < m; ++a) {
            x(a) = -search_radius + 2.0 * search_radius * static_cast<double>(rem % density) / (density - 1);
            rem /= density;
        }
        if (x.norm() > search_radius) continue;
        const CVector z = to_complex(x);
        const double v = std::abs(p(z));
        if (best.size() < seeds || v < best.back().first) {
            best.emplace_back(v, z);
            std::stable_sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            if (best.size() > seeds) best.pop_back();
        }
    }

    ZeroWitness out;
    for (const auto& [v0, z0] : best) {
        CVector z = z0;
        cplx F = p(z);
        int it = 0;
        for (; it < 50 && std::abs(F) > 1e-15; ++it) {
            CVector gv(n);
            for (int k = 0; k < n; ++k) gv(k) = grad[static_cast<std::size_t>(k)](z);
            const double gn = gv.squaredNorm();
            if (gn == 0.0) break;
            const CVector dz = -F * gv.conjugate() / gn;
            bool accepted = false;
            for (double lam = 1.0; lam > 1e-4; lam *= 0.5) {
                const CVector z2 = z + lam * dz;
                const cplx F2 = p(z2);
                if (std::abs(F2) < std::abs(F)) {
                    z = z2;
                    F = F2;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        if (std::abs(F) < out.residual) {
            out.residual = std::abs(F);
            out.point = z;
            out.seed = z0;
            out.iterations = it;
        }
        if (out.residual < 1e-8 && out.point.norm() <= search_radius) break;
    }
    out.found = out.residual < 1e-8 && out.point.norm() <= search_radius;
    return out;
}

}  // namespace threecircle
