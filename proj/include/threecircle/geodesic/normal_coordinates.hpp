#pragma once

// Normal holomorphic coordinates at a point: a cubic holomorphic change of
// variables after which g(o) = delta, the symmetrized Chern Christoffel
// symbols vanish at o, and so do their symmetrized holomorphic derivatives.

#include "threecircle/geometry/connection.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>
#include <vector>

namespace threecircle {

/// z(w) = o + E [w + Q(w, w)/2 + C(w, w, w)/6].
struct NormalCoordinateMap {
    int n = 0;
    CVector o;
    CMatrix E;                  // columns: unitary frame at o
    Tensor3 Q;                  // Q^k_{ij}, symmetric in i, j
    std::vector<cplx> C;        // C^k_{ijl} at ((k n + i) n + j) n + l, symmetric in i, j, l

    [[nodiscard]] cplx c(int k, int i, int j, int l) const {
        return C[static_cast<std::size_t>(((k * n + i) * n + j) * n + l)];
    }

    /// Frame components w + Q(w,w)/2 + C(w,w,w)/6 and the matrix d/dw of it,
    /// on any scalar type.
    template <class S>
    void frame_polynomial(const std::vector<S>& w, std::vector<S>& value, SquareMat<S>& jac) const {
        value.assign(static_cast<std::size_t>(n), scalar_constant<S>(0.0, scalar_vars(w.front())));
        jac = SquareMat<S>(n, scalar_constant<S>(0.0, scalar_vars(w.front())));
        for (int k = 0; k < n; ++k) {
            S v = w[static_cast<std::size_t>(k)];
            for (int i = 0; i < n; ++i) {
                S row = scalar_constant<S>(k == i ? 1.0 : 0.0, scalar_vars(w.front()));
                for (int j = 0; j < n; ++j) {
                    const cplx q = Q(k, i, j);
                    if (q != cplx(0.0)) {
                        v += 0.5 * q * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)];
                        row += q * w[static_cast<std::size_t>(j)];
                    }
                    for (int l = 0; l < n; ++l) {
                        const cplx cc = c(k, i, j, l);
                        if (cc == cplx(0.0)) continue;
                        const S wjl = w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(l)];
                        v += (cc / 6.0) * w[static_cast<std::size_t>(i)] * wjl;
                        row += (0.5 * cc) * wjl;
                    }
                }
                jac(k, i) = row;
            }
            value[static_cast<std::size_t>(k)] = v;
        }
    }

    template <class S>
    [[nodiscard]] std::vector<S> to_chart_generic(const std::vector<S>& w) const {
        std::vector<S> p;
        SquareMat<S> jac;
        frame_polynomial(w, p, jac);
        std::vector<S> z;
        for (int a = 0; a < n; ++a) {
            S s = scalar_constant<S>(0.0, scalar_vars(w.front())) + o(a);
            for (int k = 0; k < n; ++k) s += E(a, k) * p[static_cast<std::size_t>(k)];
            z.push_back(s);
        }
        return z;
    }

    [[nodiscard]] CVector to_chart(const CVector& w) const {
        const auto z = to_chart_generic(std::vector<cplx>(w.data(), w.data() + w.size()));
        return Eigen::Map<const CVector>(z.data(), n);
    }

    /// dz/dw at w.
    [[nodiscard]] CMatrix jacobian(const CVector& w) const {
        std::vector<cplx> p;
        SquareMat<cplx> jac;
        frame_polynomial(std::vector<cplx>(w.data(), w.data() + w.size()), p, jac);
        CMatrix P(n, n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) P(k, i) = jac(k, i);
        return E * P;
    }

    /// Newton inversion of w -> z near o.
    [[nodiscard]] CVector from_chart(const CVector& z) const {
        CVector w = E.lu().solve(z - o);
        for (int it = 0; it < 50; ++it) {
            const CVector r = to_chart(w) - z;
            if (r.norm() <= 1e-15 * std::max(1.0, z.norm())) break;
            w -= jacobian(w).lu().solve(r);
        }
        return w;
    }

    /// w-components of a tangent vector given in chart components at o.
    [[nodiscard]] CVector direction_to_normal(const CVector& X) const { return E.lu().solve(X); }
    [[nodiscard]] CVector direction_to_chart(const CVector& Xw) const { return E * Xw; }
};

namespace detail {

/// Symmetrized Christoffels transformed into the frame: E^{-1} Gt(E., E.).
inline Tensor3 frame_tensor(const Tensor3& T, const CMatrix& E, const CMatrix& Einv) {
    const int n = T.n;
    Tensor3 mid(n);
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) s += T(c, a, b) * E(a, i) * E(b, j);
                mid(c, i, j) = s;
            }
    Tensor3 out(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s = 0.0;
                for (int c = 0; c < n; ++c) s += Einv(k, c) * mid(c, i, j);
                out(k, i, j) = s;
            }
    return out;
}

inline double tensor_norm(const std::vector<cplx>& a) {
    double s = 0.0;
    for (auto v : a) s += std::norm(v);
    return std::sqrt(s);
}

}  // namespace detail

/// Build the map at o. `frame` defaults to the unitary frame of g(o) and must
/// be unitary for g(o).
inline NormalCoordinateMap normal_holomorphic_coordinates(const HermitianChart& chart, const CVector& o,
                                                          const CMatrix* frame = nullptr) {
    const auto md = chart.derivatives(o, 2);
    const int n = chart.n();
    NormalCoordinateMap map;
    map.n = n;
    map.o = o;
    map.E = frame ? *frame : unitary_frame(md.g);
    if (map.E.rows() != n || map.E.cols() != n) throw ConfigError("frame dimension does not match chart");
    const CMatrix gram = map.E.transpose() * md.g * map.E.conjugate();
    if ((gram - CMatrix::Identity(n, n)).norm() > 1e-10) throw ConfigError("frame is not unitary for g(o)");
    const CMatrix Einv = map.E.inverse();

    const Tensor3 gt = detail::frame_tensor(symmetrized(chern_christoffels(md)), map.E, Einv);
    map.Q = Tensor3(n);
    for (std::size_t k = 0; k < gt.a.size(); ++k) map.Q.a[k] = -gt.a[k];

    // frame derivatives d'_l = sum_m E^m_l d_m of the symmetrized Christoffels
    const auto cd = christoffel_derivatives(md);
    std::vector<Tensor3> dgt_chart(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        dgt_chart[static_cast<std::size_t>(m)] = detail::frame_tensor(symmetrized(cd.d[static_cast<std::size_t>(m)]), map.E, Einv);
    }
    auto dgt = [&](int l, int k, int i, int j) {
        cplx s = 0.0;
        for (int m = 0; m < n; ++m) s += map.E(m, l) * dgt_chart[static_cast<std::size_t>(m)](k, i, j);
        return s;
    };
    // C(X,X,X) = -d'Gt(X; X, X) + 2 Gt(Gt(X, X), X), polarized
    auto raw = [&](int k, int i, int j, int l) {
        cplx s = -dgt(i, k, j, l);
        for (int m = 0; m < n; ++m) s += 2.0 * gt(k, m, l) * gt(m, i, j);
        return s;
    };
    map.C.assign(static_cast<std::size_t>(n * n * n * n), cplx(0.0));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    const cplx s = raw(k, i, j, l) + raw(k, i, l, j) + raw(k, j, i, l) + raw(k, j, l, i) +
                                   raw(k, l, i, j) + raw(k, l, j, i);
                    map.C[static_cast<std::size_t>(((k * n + i) * n + j) * n + l)] = s / 6.0;
                }
    return map;
}

/// The chart expressed in normal coordinates w, on a ball where the cubic map
/// stays inside the original domain and has invertible Jacobian.
inline HermitianChart pullback_chart(const HermitianChart& chart, const NormalCoordinateMap& map) {
    const int n = chart.n();
    const double qn = detail::tensor_norm(map.Q.a);
    const double cn = detail::tensor_norm(map.C);
    const double en = Eigen::JacobiSVD<CMatrix>(map.E).singularValues()(0);
    auto fits = [&](double r) {
        if (qn * r + 0.5 * cn * r * r > 0.5) return false;
        const double reach = en * (r + 0.5 * qn * r * r + cn * r * r * r / 6.0);
        return reach < 0.9 * chart.domain().margin(map.o);
    };
    double lo = 0.0, hi = 1.0;
    while (fits(hi) && hi < 1e6) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fits(mid) ? lo : hi) = mid;
    }
    ChartDomain dom;
    dom.shape = ChartDomain::Shape::Ball;
    dom.radius = lo;

    auto original_value = chart.metric_fn();
    MetricValueFn value = [map, original_value](const CVector& w) {
        const CMatrix A = map.jacobian(w);
        return CMatrix(A.transpose() * original_value(map.to_chart(w)) * A.conjugate());
    };
    MetricJetFn jet;
    if (chart.metric_jet_fn()) {
        auto original_jet = chart.metric_jet_fn();
        jet = [map, original_jet, n](const std::vector<Jet>& w) {
            std::vector<Jet> p;
            SquareMat<Jet> P;
            map.frame_polynomial(w, p, P);
            std::vector<Jet> z;
            for (int a = 0; a < n; ++a) {
                Jet s = scalar_constant<Jet>(0.0, scalar_vars(w.front())) + map.o(a);
                for (int k = 0; k < n; ++k) s += map.E(a, k) * p[static_cast<std::size_t>(k)];
                z.push_back(s);
            }
            // A = E P
            SquareMat<Jet> A(n, scalar_constant<Jet>(0.0, scalar_vars(w.front())));
            for (int a = 0; a < n; ++a)
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) A(a, i) += map.E(a, k) * P(k, i);
            const SquareMat<Jet> g = original_jet(z);
            SquareMat<Jet> out(n, scalar_constant<Jet>(0.0, scalar_vars(w.front())));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) out(i, j) += A(a, i) * g(a, b) * conj(A(b, j));
            return out;
        };
    }
    return HermitianChart(n, dom, value, jet, chart.label() + " (normal coordinates)", chart.injectivity_floor(),
                          chart.mode());
}

/// Residuals of the normalization conditions at w = 0 of a chart: |g - delta|,
/// |symmetrized Gamma| and the largest |sym dGamma (X, X, X)| over `directions`.
struct NormalizationResiduals {
    double metric = 0.0;
    double christoffel = 0.0;
    double derivative = 0.0;
};

inline NormalizationResiduals normalization_residuals(const HermitianChart& w_chart, const std::vector<CVector>& directions) {
    const int n = w_chart.n();
    const CVector zero = CVector::Zero(n);
    const auto md = w_chart.derivatives(zero, 2);
    NormalizationResiduals r;
    r.metric = (md.g - CMatrix::Identity(n, n)).norm();
    r.christoffel = symmetrized(chern_christoffels(md)).max_abs();
    const auto cd = christoffel_derivatives(md);
    for (const auto& X : directions) {
        CVector v = CVector::Zero(n);
        for (int m = 0; m < n; ++m) v += X(m) * cd.d[static_cast<std::size_t>(m)].contract(X, X);
        r.derivative = std::max(r.derivative, v.norm() / std::pow(X.norm(), 3));
    }
    return r;
}

}  // namespace threecircle
