#pragma once

// Chern connection, torsion and curvature in holomorphic coordinates, and the
// Levi-Civita connection and Riemann tensor in the underlying real coordinates.

#include "threecircle/geometry/chart.hpp"

#include <vector>

namespace threecircle {

/// T^k_{ij}, stored as (k, i, j).
struct Tensor3 {
    int n = 0;
    std::vector<cplx> a;

    Tensor3() = default;
    explicit Tensor3(int dim) : n(dim), a(static_cast<std::size_t>(dim * dim * dim), cplx(0.0)) {}

    cplx& operator()(int k, int i, int j) { return a[static_cast<std::size_t>((k * n + i) * n + j)]; }
    cplx operator()(int k, int i, int j) const { return a[static_cast<std::size_t>((k * n + i) * n + j)]; }

    /// Vector T(X, Y)^k = sum T^k_{ij} X^i Y^j.
    [[nodiscard]] CVector contract(const CVector& X, const CVector& Y) const {
        CVector out = CVector::Zero(n);
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) out(k) += (*this)(k, i, j) * X(i) * Y(j);
            }
        }
        return out;
    }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (auto v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

/// R_{i jbar k lbar}, stored as (i, j, k, l).
struct Tensor4 {
    int n = 0;
    std::vector<cplx> a;

    Tensor4() = default;
    explicit Tensor4(int dim) : n(dim), a(static_cast<std::size_t>(dim * dim * dim * dim), cplx(0.0)) {}

    cplx& operator()(int i, int j, int k, int l) { return a[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)]; }
    cplx operator()(int i, int j, int k, int l) const {
        return a[static_cast<std::size_t>(((i * n + j) * n + k) * n + l)];
    }

    /// sum R_{i jbar k lbar} A^i conj(B^j) C^k conj(D^l)
    [[nodiscard]] cplx evaluate(const CVector& A, const CVector& B, const CVector& C, const CVector& D) const {
        cplx s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        s += (*this)(i, j, k, l) * A(i) * std::conj(B(j)) * C(k) * std::conj(D(l));
        return s;
    }
};

/// Gamma^k_{ij} = sum_l d_i g_{j lbar} g^{lbar k}.
inline Tensor3 chern_christoffels(const MetricDerivatives& md) {
    const int n = md.n;
    Tensor3 G(n);
    for (int i = 0; i < n; ++i) {
        const CMatrix Gi = md.d(i) * md.ginv;  // (j, k)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) G(k, i, j) = Gi(j, k);
    }
    return G;
}

inline Tensor3 torsion_from(const Tensor3& gamma) {
    Tensor3 t(gamma.n);
    for (int k = 0; k < gamma.n; ++k)
        for (int i = 0; i < gamma.n; ++i)
            for (int j = 0; j < gamma.n; ++j) t(k, i, j) = gamma(k, i, j) - gamma(k, j, i);
    return t;
}

/// Symmetric part (Gamma^k_{ij} + Gamma^k_{ji}) / 2.
inline Tensor3 symmetrized(const Tensor3& gamma) {
    Tensor3 s(gamma.n);
    for (int k = 0; k < gamma.n; ++k)
        for (int i = 0; i < gamma.n; ++i)
            for (int j = 0; j < gamma.n; ++j) s(k, i, j) = 0.5 * (gamma(k, i, j) + gamma(k, j, i));
    return s;
}

/// R_{i jbar k lbar} = -d_i d_jbar g_{k lbar} + sum g^{qbar p} d_i g_{k qbar} d_jbar g_{p lbar}.
inline Tensor4 chern_curvature(const MetricDerivatives& md) {
    if (md.order < 2) throw ConfigError("curvature needs second derivatives of the metric");
    const int n = md.n;
    Tensor4 R(n);
    for (int i = 0; i < n; ++i) {
        const CMatrix di = md.d(i);
        for (int j = 0; j < n; ++j) {
            const CMatrix M = -md.d_dbar(i, j) + di * md.ginv * md.dbar(j);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) R(i, j, k, l) = M(k, l);
        }
    }
    return R;
}

/// Holomorphic and antiholomorphic first derivatives of Gamma.
struct ChristoffelDerivatives {
    std::vector<Tensor3> d;     // d_m Gamma
    std::vector<Tensor3> dbar;  // d_mbar Gamma
};

inline ChristoffelDerivatives christoffel_derivatives(const MetricDerivatives& md) {
    if (md.order < 2) throw ConfigError("Christoffel derivatives need second derivatives of the metric");
    const int n = md.n;
    ChristoffelDerivatives out;
    out.d.assign(static_cast<std::size_t>(n), Tensor3(n));
    out.dbar.assign(static_cast<std::size_t>(n), Tensor3(n));
    std::vector<CMatrix> dg(static_cast<std::size_t>(n)), dbg(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        dg[static_cast<std::size_t>(m)] = md.d(m);
        dbg[static_cast<std::size_t>(m)] = md.dbar(m);
    }
    for (int m = 0; m < n; ++m) {
        // d(ginv) = -ginv (dg) ginv
        const CMatrix dinv = -md.ginv * dg[static_cast<std::size_t>(m)] * md.ginv;
        const CMatrix dbinv = -md.ginv * dbg[static_cast<std::size_t>(m)] * md.ginv;
        for (int i = 0; i < n; ++i) {
            const CMatrix a = md.d_d(m, i) * md.ginv + dg[static_cast<std::size_t>(i)] * dinv;
            const CMatrix b = md.d_dbar(i, m) * md.ginv + dg[static_cast<std::size_t>(i)] * dbinv;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    out.d[static_cast<std::size_t>(m)](k, i, j) = a(j, k);
                    out.dbar[static_cast<std::size_t>(m)](k, i, j) = b(j, k);
                }
        }
    }
    return out;
}

/// Real Christoffel symbols Gamma^c_{ab}, stored [c](a, b).
using RealChristoffels = std::vector<RMatrix>;

/// Real Riemann tensor R^d_{abc} with R(d_a, d_b) d_c = R^d_{abc} d_d, stored
/// at index ((d * m + a) * m + b) * m + c.
struct RealRiemann {
    int m = 0;
    std::vector<double> a;

    [[nodiscard]] double operator()(int d, int i, int j, int k) const {
        return a[static_cast<std::size_t>(((d * m + i) * m + j) * m + k)];
    }
    double& operator()(int d, int i, int j, int k) { return a[static_cast<std::size_t>(((d * m + i) * m + j) * m + k)]; }
};

struct LeviCivitaData {
    RMatrix G;
    RMatrix Ginv;
    RealChristoffels gamma;
    std::vector<RealChristoffels> dgamma;  // [e] = d_e Gamma
    RealRiemann riemann_up;                // R^d_{abc}

    /// R(X, Y, Z, W) = <R(X, Y) Z, W>.
    [[nodiscard]] double riemann(const RVector& X, const RVector& Y, const RVector& Z, const RVector& W) const {
        const int m = static_cast<int>(G.rows());
        RVector v = RVector::Zero(m);
        for (int d = 0; d < m; ++d)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    for (int c = 0; c < m; ++c) v(d) += riemann_up(d, a, b, c) * X(a) * Y(b) * Z(c);
        return v.dot(G * W);
    }

    /// Gamma(X, Y)^c = Gamma^c_{ab} X^a Y^b.
    [[nodiscard]] RVector apply(const RVector& X, const RVector& Y) const {
        RVector v(gamma.size());
        for (std::size_t c = 0; c < gamma.size(); ++c) v(static_cast<Eigen::Index>(c)) = X.dot(gamma[c] * Y);
        return v;
    }
};

/// Levi-Civita connection of the real metric, with curvature when second
/// metric derivatives are present.
inline LeviCivitaData levi_civita(const MetricDerivatives& md) {
    const int m = 2 * md.n;
    LeviCivitaData lc;
    lc.G = real_metric(md.g);
    lc.Ginv = lc.G.inverse();
    std::vector<RMatrix> dG(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) dG[static_cast<std::size_t>(e)] = real_metric(md.dx[static_cast<std::size_t>(e)]);
    // first-kind symbols [ab, c] = (d_a G_bc + d_b G_ac - d_c G_ab) / 2
    auto first_kind = [&](const std::vector<RMatrix>& D) {
        std::vector<RMatrix> out(static_cast<std::size_t>(m), RMatrix(m, m));
        for (int c = 0; c < m; ++c)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    out[static_cast<std::size_t>(c)](a, b) =
                        0.5 * (D[static_cast<std::size_t>(a)](b, c) + D[static_cast<std::size_t>(b)](a, c) -
                               D[static_cast<std::size_t>(c)](a, b));
        return out;
    };
    auto raise = [&](const std::vector<RMatrix>& low, const RMatrix& Ginv) {
        RealChristoffels up(static_cast<std::size_t>(m), RMatrix::Zero(m, m));
        for (int d = 0; d < m; ++d)
            for (int c = 0; c < m; ++c) up[static_cast<std::size_t>(d)] += Ginv(d, c) * low[static_cast<std::size_t>(c)];
        return up;
    };
    const auto low = first_kind(dG);
    lc.gamma = raise(low, lc.Ginv);
    if (md.order < 2) return lc;

    // d_e Gamma^d_{ab} = d_e(G^{dc}) [ab,c] + G^{dc} d_e [ab,c]
    lc.dgamma.resize(static_cast<std::size_t>(m));
    for (int e = 0; e < m; ++e) {
        std::vector<RMatrix> ddG(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a) ddG[static_cast<std::size_t>(a)] = real_metric(md.second(e, a));
        const auto dlow = first_kind(ddG);
        const RMatrix dGinv = -lc.Ginv * dG[static_cast<std::size_t>(e)] * lc.Ginv;
        auto part1 = raise(low, dGinv);
        auto part2 = raise(dlow, lc.Ginv);
        for (int d = 0; d < m; ++d) part1[static_cast<std::size_t>(d)] += part2[static_cast<std::size_t>(d)];
        lc.dgamma[static_cast<std::size_t>(e)] = std::move(part1);
    }
    lc.riemann_up.m = m;
    lc.riemann_up.a.assign(static_cast<std::size_t>(m * m * m * m), 0.0);
    for (int d = 0; d < m; ++d)
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) {
                    double v = lc.dgamma[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)](b, c) -
                               lc.dgamma[static_cast<std::size_t>(b)][static_cast<std::size_t>(d)](a, c);
                    for (int e = 0; e < m; ++e) {
                        v += lc.gamma[static_cast<std::size_t>(d)](a, e) * lc.gamma[static_cast<std::size_t>(e)](b, c) -
                             lc.gamma[static_cast<std::size_t>(d)](b, e) * lc.gamma[static_cast<std::size_t>(e)](a, c);
                    }
                    lc.riemann_up(d, a, b, c) = v;
                }
    return lc;
}

/// Fully covariant Riemann tensor R_{abcd} = <R(d_a, d_b) d_c, d_d>.
inline std::vector<double> lowered_riemann(const LeviCivitaData& lc) {
    const int m = static_cast<int>(lc.G.rows());
    std::vector<double> out(static_cast<std::size_t>(m * m * m * m), 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double v = 0.0;
                    for (int e = 0; e < m; ++e) v += lc.riemann_up(e, a, b, c) * lc.G(e, d);
                    out[static_cast<std::size_t>(((a * m + b) * m + c) * m + d)] = v;
                }
    return out;
}

/// Chern connection written on real coordinates: Gamma_C^c_{ab} with
/// D_{d_a} d_b = Gamma_C^c_{ab} d_c, stored [c](a, b).
inline RealChristoffels chern_real_connection(const Tensor3& gamma) {
    const int n = gamma.n;
    const int m = 2 * n;
    RealChristoffels out(static_cast<std::size_t>(m), RMatrix::Zero(m, m));
    auto basis = [&](int a) {
        CVector e = CVector::Zero(n);
        e(a / 2) = (a % 2 == 0) ? cplx(1.0) : I_unit;
        return e;
    };
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const RVector v = to_real(gamma.contract(basis(a), basis(b)));
            for (int c = 0; c < m; ++c) out[static_cast<std::size_t>(c)](a, b) = v(c);
        }
    return out;
}

/// Pointwise connection and curvature data.
struct GeometryReport {
    CVector point;
    MetricDerivatives metric;
    Tensor3 christoffels;
    Tensor3 torsion;
    Tensor4 chern_curvature;
    LeviCivitaData levi_civita;
    CMatrix unitary_frame;
};

inline GeometryReport geometry_report(const HermitianChart& chart, const CVector& p) {
    GeometryReport r;
    r.point = p;
    r.metric = chart.derivatives(p, 2);
    r.christoffels = chern_christoffels(r.metric);
    r.torsion = torsion_from(r.christoffels);
    r.chern_curvature = chern_curvature(r.metric);
    r.levi_civita = levi_civita(r.metric);
    r.unitary_frame = threecircle::unitary_frame(r.metric.g);
    return r;
}

inline Tensor3 chern_christoffels(const HermitianChart& chart, const CVector& p) {
    return chern_christoffels(chart.derivatives(p, 1));
}
inline Tensor3 torsion(const HermitianChart& chart, const CVector& p) {
    return torsion_from(chern_christoffels(chart, p));
}
inline Tensor4 chern_curvature(const HermitianChart& chart, const CVector& p) {
    return chern_curvature(chart.derivatives(p, 2));
}
inline LeviCivitaData levi_civita_curvature(const HermitianChart& chart, const CVector& p) {
    return levi_civita(chart.derivatives(p, 2));
}

/// Residuals of the two Kaehler tests at p: max |tau| and
/// max |d_k g_{i jbar} - d_i g_{k jbar}| (the components of d omega).
struct KahlerResiduals {
    double torsion = 0.0;
    double d_omega = 0.0;
};

inline KahlerResiduals kahler_residuals(const MetricDerivatives& md) {
    KahlerResiduals r;
    r.torsion = torsion_from(chern_christoffels(md)).max_abs();
    for (int i = 0; i < md.n; ++i)
        for (int k = 0; k < md.n; ++k) {
            const CMatrix diff = md.d(k).row(i) - md.d(i).row(k);
            r.d_omega = std::max(r.d_omega, diff.cwiseAbs().maxCoeff());
        }
    return r;
}

}  // namespace threecircle
