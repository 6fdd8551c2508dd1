#pragma once

// Named metric charts. Each metric is written once as a template over the
// scalar type so the same expression yields values (cplx) and exact first and
// second derivatives (Jet).
//
//   flat              g = delta on C^n, complete, injectivity floor infinite
//   poincare-ball     Bergman metric of the unit ball, Kaehler, H = -2,
//                     injectivity floor infinite (Cartan-Hadamard)
//   radial-conformal  g = exp(a s + b s^2) delta with s = |z|^2; non-Kaehler
//                     for n >= 2 unless a = b = 0; floor set to 1
//   poly-perturbed    g = I + eps (B + B^*) with B a seeded random polynomial
//                     matrix in (z, zbar) of degree <= 2 on the unit ball;
//                     floor set to 0.5

#include "threecircle/geometry/chart.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace threecircle {

using ParamMap = std::map<std::string, double>;

struct MetricSpec {
    std::string name;
    int n = 1;
    ParamMap params;
};

struct CatalogEntryInfo {
    std::string name;
    std::string parameters;
    std::string description;
};

namespace metrics {

template <class S>
S norm_squared(const std::vector<S>& z) {
    S s = scalar_constant<S>(0.0, scalar_vars(z.front()));
    for (const auto& zk : z) s += zk * conj(zk);
    return s;
}

template <class S>
SquareMat<S> flat(const std::vector<S>& z) {
    const int n = static_cast<int>(z.size());
    const int vars = scalar_vars(z.front());
    SquareMat<S> g(n, scalar_constant<S>(0.0, vars));
    for (int i = 0; i < n; ++i) g(i, i) = scalar_constant<S>(1.0, vars);
    return g;
}

template <class S>
SquareMat<S> bergman_ball(const std::vector<S>& z) {
    const int n = static_cast<int>(z.size());
    const int vars = scalar_vars(z.front());
    const S w = 1.0 / (1.0 - norm_squared(z));
    const S w2 = w * w;
    SquareMat<S> g(n, scalar_constant<S>(0.0, vars));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = conj(z[static_cast<std::size_t>(i)]) * z[static_cast<std::size_t>(j)] * w2;
            if (i == j) g(i, j) += w;
        }
    }
    return g;
}

template <class S>
SquareMat<S> radial_conformal(const std::vector<S>& z, double a, double b) {
    const int n = static_cast<int>(z.size());
    const int vars = scalar_vars(z.front());
    const S s = norm_squared(z);
    const S f = exp(a * s + b * s * s);
    SquareMat<S> g(n, scalar_constant<S>(0.0, vars));
    for (int i = 0; i < n; ++i) g(i, i) = f;
    return g;
}

struct PolyTerm {
    int i = 0;
    int j = 0;
    cplx coef;
    std::vector<int> holo;  // exponents of z
    std::vector<int> anti;  // exponents of zbar
};

/// Random terms of B for the poly-perturbed family, normalized so that
/// |B(z)| <= 1 on the unit ball.
inline std::vector<PolyTerm> perturbation_terms(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::pair<std::vector<int>, std::vector<int>>> monomials;
    // all (alpha, beta) with 1 <= |alpha| + |beta| <= 2
    for (int p = 0; p < 2 * n; ++p) {
        std::vector<int> h(static_cast<std::size_t>(n), 0), a(static_cast<std::size_t>(n), 0);
        (p < n ? h : a)[static_cast<std::size_t>(p % n)] = 1;
        monomials.emplace_back(h, a);
        for (int q = p; q < 2 * n; ++q) {
            auto h2 = h, a2 = a;
            (q < n ? h2 : a2)[static_cast<std::size_t>(q % n)] += 1;
            monomials.emplace_back(h2, a2);
        }
    }
    std::vector<PolyTerm> terms;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (const auto& [h, a] : monomials) {
                PolyTerm t{i, j, cplx(gauss(rng), gauss(rng)), h, a};
                total += std::abs(t.coef);
                terms.push_back(std::move(t));
            }
        }
    }
    for (auto& t : terms) t.coef /= total;
    return terms;
}

template <class S>
SquareMat<S> poly_perturbed(const std::vector<S>& z, const std::vector<PolyTerm>& terms, double eps) {
    const int n = static_cast<int>(z.size());
    const int vars = scalar_vars(z.front());
    SquareMat<S> B(n, scalar_constant<S>(0.0, vars));
    for (const auto& t : terms) {
        S m = scalar_constant<S>(t.coef, vars);
        for (int k = 0; k < n; ++k) {
            for (int e = 0; e < t.holo[static_cast<std::size_t>(k)]; ++e) m *= z[static_cast<std::size_t>(k)];
            for (int e = 0; e < t.anti[static_cast<std::size_t>(k)]; ++e) m *= conj(z[static_cast<std::size_t>(k)]);
        }
        B(t.i, t.j) += m;
    }
    SquareMat<S> g(n, scalar_constant<S>(0.0, vars));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = eps * (B(i, j) + conj(B(j, i)));
            if (i == j) g(i, j) += 1.0;
        }
    }
    return g;
}

inline CMatrix to_matrix(const SquareMat<cplx>& m) {
    CMatrix out(m.n, m.n);
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) out(i, j) = m(i, j);
    }
    return out;
}

inline std::vector<cplx> to_std(const CVector& z) { return {z.data(), z.data() + z.size()}; }

/// Wrap a scalar-generic metric template into a chart.
template <class Generic>
HermitianChart make_chart(int n, ChartDomain domain, Generic generic, std::string label, double floor) {
    MetricValueFn value = [generic](const CVector& z) { return to_matrix(generic(to_std(z))); };
    MetricJetFn jet = [generic](const std::vector<Jet>& z) { return generic(z); };
    return HermitianChart(n, domain, std::move(value), std::move(jet), std::move(label), floor);
}

}  // namespace metrics

inline double param_or(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline const std::vector<CatalogEntryInfo>& metric_catalog() {
    static const std::vector<CatalogEntryInfo> entries = {
        {"flat", "(none)", "Euclidean metric delta on C^n"},
        {"poincare-ball", "(none)", "Bergman metric of the unit ball, Kaehler with H = -2"},
        {"radial-conformal", "a=1, b=0", "exp(a|z|^2 + b|z|^4) delta, torsionful for n >= 2"},
        {"poly-perturbed", "eps=0.1, seed=1", "I + eps(B + B^*) with seeded random quadratic B on the unit ball"},
    };
    return entries;
}

inline HermitianChart make_metric(const MetricSpec& spec) {
    const int n = spec.n;
    if (n < 1) throw ConfigError("metric dimension must be at least 1");
    const auto& p = spec.params;
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : p) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) throw ConfigError("unknown parameter '" + k + "' for metric '" + spec.name + "'");
        }
    };
    const double inf = std::numeric_limits<double>::infinity();
    if (spec.name == "flat") {
        reject_unknown({});
        return metrics::make_chart(
            n, ChartDomain{}, [](const auto& z) { return metrics::flat(z); }, "flat", inf);
    }
    if (spec.name == "poincare-ball") {
        reject_unknown({});
        return metrics::make_chart(
            n, ChartDomain{ChartDomain::Shape::Ball, 1.0}, [](const auto& z) { return metrics::bergman_ball(z); },
            "poincare-ball", inf);
    }
    if (spec.name == "radial-conformal") {
        reject_unknown({"a", "b"});
        const double a = param_or(p, "a", 1.0);
        const double b = param_or(p, "b", 0.0);
        return metrics::make_chart(
            n, ChartDomain{}, [a, b](const auto& z) { return metrics::radial_conformal(z, a, b); },
            "radial-conformal", 1.0);
    }
    if (spec.name == "poly-perturbed") {
        reject_unknown({"eps", "seed"});
        const double eps = param_or(p, "eps", 0.1);
        const auto seed = static_cast<std::uint64_t>(param_or(p, "seed", 1.0));
        if (!(eps >= 0 && eps < 0.5)) throw ConfigError("poly-perturbed requires 0 <= eps < 0.5");
        auto terms = std::make_shared<const std::vector<metrics::PolyTerm>>(metrics::perturbation_terms(n, seed));
        auto chart = metrics::make_chart(
            n, ChartDomain{ChartDomain::Shape::Ball, 1.0},
            [terms, eps](const auto& z) { return metrics::poly_perturbed(z, *terms, eps); }, "poly-perturbed", 0.5);
        chart.check_positive_definite(256, seed);
        return chart;
    }
    throw ConfigError("unknown metric '" + spec.name + "'");
}

}  // namespace threecircle
