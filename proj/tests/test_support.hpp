#pragma once

#include "threecircle/geometry/catalog.hpp"

#include <random>
#include <vector>

namespace tc_test {

using namespace threecircle;

inline CVector pt(std::initializer_list<cplx> v) {
    CVector p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (auto c : v) p(k++) = c;
    return p;
}

inline std::vector<MetricSpec> catalog_specs() {
    return {
        {"flat", 1, {}},
        {"flat", 2, {}},
        {"poincare-ball", 1, {}},
        {"poincare-ball", 2, {}},
        {"radial-conformal", 1, {}},
        {"radial-conformal", 2, {}},
        {"radial-conformal", 2, {{"a", 0.5}, {"b", 0.3}}},
        {"poly-perturbed", 2, {{"eps", 0.1}, {"seed", 3}}},
    };
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double gauss() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
    double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(eng); }

    CVector gaussian_vector(int n) {
        CVector v(n);
        for (int k = 0; k < n; ++k) v(k) = cplx(gauss(), gauss());
        return v;
    }

    /// Point with |z| <= radius.
    CVector point(int n, double radius) {
        CVector v = gaussian_vector(n);
        return v * (radius * std::pow(uniform(), 1.0 / (2.0 * n)) / v.norm());
    }

    /// Point well inside the chart domain.
    CVector chart_point(const HermitianChart& c) {
        const double R = c.domain().bounded() ? 0.6 * c.domain().radius : 0.8;
        return point(c.n(), R);
    }

    /// Real unit vector (real norm) at p.
    RVector unit_real(const HermitianChart& c, const CVector& p) {
        RVector v(2 * c.n());
        for (int a = 0; a < 2 * c.n(); ++a) v(a) = gauss();
        const RMatrix G = real_metric(c.g(p));
        return v / std::sqrt(v.dot(G * v));
    }
};

}  // namespace tc_test
