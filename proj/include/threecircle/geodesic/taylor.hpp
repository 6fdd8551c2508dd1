#pragma once

// Third-order expansion of a unit-speed geodesic at o, in coordinates that
// are normal holomorphic at o (g(o) = delta, symmetrized Gamma(o) = 0,
// symmetrized holomorphic dGamma(o) = 0).

#include "threecircle/geodesic/normal_coordinates.hpp"

#include <cmath>

namespace threecircle {

/// z(t) = o + c1 t + c2 t^2 / 2 + c3 t^3 / 6.
struct GeodesicTaylor {
    CVector o;
    CVector c1, c2, c3;

    [[nodiscard]] CVector operator()(double t) const { return o + c1 * t + c2 * (0.5 * t * t) + c3 * (t * t * t / 6.0); }
    [[nodiscard]] CVector velocity(double t) const { return c1 + c2 * t + c3 * (0.5 * t * t); }
};

/// Throws ConfigError unless the chart is normal holomorphic at o to within
/// `tol.tensor_rel` (the derivative condition is checked along X).
inline GeodesicTaylor geodesic_taylor(const HermitianChart& chart, const CVector& o, const CVector& X,
                                      const ToleranceBundle& tol = {}) {
    const int n = chart.n();
    const auto md = chart.derivatives(o, 2);
    const Tensor3 gamma = chern_christoffels(md);
    const auto cd = christoffel_derivatives(md);
    {
        const double scale = std::max(1.0, gamma.max_abs());
        CVector sym_d = CVector::Zero(n);
        for (int m = 0; m < n; ++m) sym_d += X(m) * cd.d[static_cast<std::size_t>(m)].contract(X, X);
        if ((md.g - CMatrix::Identity(n, n)).norm() > tol.tensor_rel ||
            symmetrized(gamma).max_abs() > tol.tensor_rel * scale || sym_d.norm() > tol.tensor_rel * scale) {
            throw ConfigError("geodesic expansion needs normal holomorphic coordinates at the base point");
        }
    }
    const Tensor3 tau = torsion_from(gamma);
    std::vector<Tensor3> dtau(static_cast<std::size_t>(n)), dbtau(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        dtau[static_cast<std::size_t>(m)] = torsion_from(cd.d[static_cast<std::size_t>(m)]);
        dbtau[static_cast<std::size_t>(m)] = torsion_from(cd.dbar[static_cast<std::size_t>(m)]);
    }
    const CVector Xb = X.conjugate();

    GeodesicTaylor T;
    T.o = o;
    T.c1 = X;
    T.c2 = CVector::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) T.c2(i) += std::conj(tau(k, i, j)) * Xb(j) * X(k);
    const CVector& z2 = T.c2;

    CVector c3 = CVector::Zero(n);
    for (int i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (int mu = 0; mu < n; ++mu)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    // metric-free Christoffel derivative along conj(X)
                    s -= cd.dbar[static_cast<std::size_t>(mu)](i, j, k) * Xb(mu) * X(j) * X(k);
                }
        for (int mu = 0; mu < n; ++mu)
            for (int lam = 0; lam < n; ++lam)
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l) {
                        // derivative of the inverse metric, d g_{lambda ibar} = Gamma + conj(Gamma)
                        s += 0.5 * tau(i, mu, lam) * X(mu) * std::conj(tau(l, j, lam)) * Xb(j) * X(l);
                        s += 0.5 * std::conj(tau(lam, mu, i)) * std::conj(tau(l, j, lam)) * Xb(mu) * Xb(j) * X(l);
                    }
        for (int mu = 0; mu < n; ++mu)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    // d_mu A_{j i l} and d_mubar A_{j i l}, A_{jil} = conj(tau^k_{ji}) g_{l kbar}
                    cplx dA = std::conj(dbtau[static_cast<std::size_t>(mu)](l, j, i));
                    cplx dbA = std::conj(dtau[static_cast<std::size_t>(mu)](l, j, i));
                    for (int k = 0; k < n; ++k) {
                        dA += std::conj(tau(k, j, i)) * gamma(k, mu, l);
                        dbA += std::conj(tau(k, j, i)) * std::conj(gamma(l, mu, k));
                    }
                    s -= dA * X(mu) * Xb(j) * X(l);
                    s -= dbA * Xb(mu) * Xb(j) * X(l);
                }
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) s -= std::conj(tau(l, j, i)) * (std::conj(z2(j)) * X(l) + Xb(j) * z2(l));
        c3(i) = s;
    }
    T.c3 = c3;
    return T;
}

/// Expansion at o of an arbitrary chart, computed in normal coordinates and
/// returned together with the map back to the chart.
struct NormalTaylor {
    NormalCoordinateMap map;
    HermitianChart w_chart;
    GeodesicTaylor w_taylor;

    [[nodiscard]] CVector operator()(double t) const { return map.to_chart(w_taylor(t) - w_taylor.o); }
};

inline NormalTaylor geodesic_taylor_normal(const HermitianChart& chart, const CVector& o, const CVector& X,
                                           const ToleranceBundle& tol = {}) {
    NormalTaylor nt{normal_holomorphic_coordinates(chart, o), {}, {}};
    nt.w_chart = pullback_chart(chart, nt.map);
    const CVector Xw = nt.map.direction_to_normal(X);
    nt.w_taylor = geodesic_taylor(nt.w_chart, CVector::Zero(chart.n()), Xw, tol);
    return nt;
}

}  // namespace threecircle
