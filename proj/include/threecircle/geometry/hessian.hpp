#pragma once

// Scalar fields on a chart, their Levi-Civita and Chern Hessians, the L and
// generalized L operators, and the plurisubharmonicity test.

#include "threecircle/geometry/connection.hpp"

#include <functional>
#include <string>
#include <vector>

namespace threecircle {

/// Real-valued function on a chart. `jet`, when present, evaluates the same
/// function on jets (its real part is used) for exact derivatives.
struct ScalarField {
    std::string label;
    std::function<double(const CVector&)> value;
    std::function<Jet(const std::vector<Jet>&)> jet;

    /// Build from a template callable S(const std::vector<S>&) whose real part is the field.
    template <class Generic>
    static ScalarField from_generic(std::string label, Generic generic) {
        ScalarField f;
        f.label = std::move(label);
        f.value = [generic](const CVector& z) {
            return std::real(generic(std::vector<cplx>(z.data(), z.data() + z.size())));
        };
        f.jet = [generic](const std::vector<Jet>& z) { return generic(z); };
        return f;
    }
};

/// Value, real gradient and real Hessian of a scalar field (coordinate partials).
struct ScalarDerivatives {
    double value = 0.0;
    RVector grad;
    RMatrix hess;

    /// d_k u
    [[nodiscard]] cplx d(int k) const { return 0.5 * cplx(grad(2 * k), -grad(2 * k + 1)); }
    /// d_i d_jbar u
    [[nodiscard]] cplx d_dbar(int i, int j) const {
        return 0.25 * (hess(2 * i, 2 * j) + I_unit * hess(2 * i, 2 * j + 1) - I_unit * hess(2 * i + 1, 2 * j) +
                       hess(2 * i + 1, 2 * j + 1));
    }
    /// Matrix of d_i d_jbar u.
    [[nodiscard]] CMatrix complex_hessian() const {
        const int n = static_cast<int>(grad.size()) / 2;
        CMatrix h(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) h(i, j) = d_dbar(i, j);
        return h;
    }
};

inline ScalarDerivatives scalar_derivatives(const HermitianChart& chart, const ScalarField& u, const CVector& p) {
    chart.require_interior(p);
    const int m = 2 * chart.n();
    ScalarDerivatives sd;
    const bool analytic = chart.mode().kind == DifferentiationMode::Kind::AnalyticCallback && u.jet && m <= kMaxJetVars;
    if (analytic) {
        const Jet j = u.jet(seed_coordinates(p));
        sd.value = j.value().real();
        sd.grad = j.grad().real();
        sd.hess = j.hess().real();
        return sd;
    }
    DifferentiationMode fd = chart.mode();
    if (fd.kind == DifferentiationMode::Kind::AnalyticCallback) fd = DifferentiationMode::finite_difference();
    if (chart.domain().margin(p) < fd.step * std::sqrt(static_cast<double>(m))) {
        throw DomainError("point too close to domain boundary for the requested difference stencil");
    }
    const RVector x = to_real(p);
    auto f = [&](const RVector& y) { return u.value(to_complex(y)); };
    sd.value = u.value(p);
    sd.grad.resize(m);
    sd.hess.resize(m, m);
    std::vector<int> orders(static_cast<std::size_t>(m), 0);
    for (int a = 0; a < m; ++a) {
        orders.assign(static_cast<std::size_t>(m), 0);
        orders[static_cast<std::size_t>(a)] = 1;
        sd.grad(a) = real_partial<double>(f, x, orders, fd.step, fd.richardson_levels);
        for (int b = a; b < m; ++b) {
            orders.assign(static_cast<std::size_t>(m), 0);
            orders[static_cast<std::size_t>(a)] += 1;
            orders[static_cast<std::size_t>(b)] += 1;
            sd.hess(a, b) = sd.hess(b, a) = real_partial<double>(f, x, orders, fd.step, fd.richardson_levels);
        }
    }
    return sd;
}

/// Both Hessians on real coordinates with the gradient and J-gradient.
///
/// hess(a, b)   = Hess(u)(d_a, d_b) for the Levi-Civita connection (symmetric);
/// hess_D(a, b) = Hess_D(u)(d_a, d_b) = d_b(d_a u) - (D_{d_b} d_a) u for the
///                Chern connection, so that Hess_D(X,Y) - Hess_D(Y,X) = tau(X,Y) u.
struct HessianData {
    RMatrix hess;
    RMatrix hess_D;
    RVector gradient;    // real components of grad u
    RVector J_gradient;  // J grad u
    CMatrix complex_hessian;
    ScalarDerivatives partials;
    MetricDerivatives metric;
    Tensor3 torsion;
    LeviCivitaData lc;
};

inline HessianData hessians(const HermitianChart& chart, const CVector& p, const ScalarField& u) {
    HessianData h;
    h.metric = chart.derivatives(p, 1);
    h.partials = scalar_derivatives(chart, u, p);
    const int m = 2 * chart.n();
    h.lc = levi_civita(h.metric);
    const Tensor3 gamma = chern_christoffels(h.metric);
    h.torsion = torsion_from(gamma);
    const RealChristoffels chern = chern_real_connection(gamma);
    h.hess = h.partials.hess;
    h.hess_D = h.partials.hess;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                h.hess(a, b) -= h.lc.gamma[static_cast<std::size_t>(c)](a, b) * h.partials.grad(c);
                h.hess_D(a, b) -= chern[static_cast<std::size_t>(c)](b, a) * h.partials.grad(c);
            }
    h.gradient = h.lc.Ginv * h.partials.grad;
    h.J_gradient = complex_structure(chart.n()) * h.gradient;
    h.complex_hessian = h.partials.complex_hessian();
    return h;
}

/// Right-hand side of the Hessian difference identity for real X, Y:
/// 1/2 [<tau(X,Y), grad u> + <tau(Y, grad u), X> - <tau(grad u, X), Y>].
inline double hessian_difference_formula(const HessianData& h, const RVector& X, const RVector& Y) {
    const CVector x = to_complex(X);
    const CVector y = to_complex(Y);
    const CVector f = to_complex(h.gradient);
    const CMatrix& g = h.metric.g;
    return 0.5 * (real_pairing(g, h.torsion.contract(x, y), f) + real_pairing(g, h.torsion.contract(y, f), x) -
                  real_pairing(g, h.torsion.contract(f, x), y));
}

/// Complex-bilinear extension of a real bilinear form B to complex real-basis
/// coefficient vectors: B(c, d) = sum B_ab c_a d_b.
inline cplx complex_extend(const RMatrix& B, const CVector& c, const CVector& d) {
    return (c.transpose() * B.cast<cplx>() * d)(0, 0);
}

/// Real-basis coefficients of the complex vector V - i J V.
inline CVector complexified(const RVector& V, const RMatrix& J) {
    return V.cast<cplx>() - I_unit * (J * V).cast<cplx>();
}

/// The three evaluations of L[u] at p.
struct LOperatorValues {
    double direct = 0.0;         // Hess(grad u, grad u) + Hess(J grad u, J grad u)
    double levi_civita = 0.0;    // Hess(xi, xibar), xi = grad u - i J grad u
    double chern = 0.0;          // Hess_D(xi, xibar) = 4 sum u_{i jbar} X^i conj(X^j)
    double imag_residual = 0.0;  // largest imaginary part among the complex forms

    [[nodiscard]] double value() const { return direct; }
    [[nodiscard]] double spread() const {
        return std::max({std::abs(direct - levi_civita), std::abs(direct - chern), std::abs(levi_civita - chern)});
    }
};

inline LOperatorValues L_operator_values(const HessianData& h) {
    LOperatorValues L;
    const int n = static_cast<int>(h.gradient.size()) / 2;
    const RMatrix J = complex_structure(n);
    const RVector& V = h.gradient;
    const RVector& JV = h.J_gradient;
    L.direct = V.dot(h.hess * V) + JV.dot(h.hess * JV);
    const CVector xi = complexified(V, J);
    const cplx lc = complex_extend(h.hess, xi, xi.conjugate());
    L.levi_civita = lc.real();
    // Hess_D(xi, xibar) with (1,0)-components 2X of xi
    const CVector X = 2.0 * to_complex(V);
    const cplx ch = (X.transpose() * h.complex_hessian * X.conjugate())(0, 0);
    L.chern = ch.real();
    L.imag_residual = std::max(std::abs(lc.imag()), std::abs(ch.imag()));
    return L;
}

/// L[u](p); throws when the three forms disagree beyond tensor_rel.
inline double L_operator(const HermitianChart& chart, const CVector& p, const ScalarField& u,
                         const ToleranceBundle& tol = {}) {
    const auto L = L_operator_values(hessians(chart, p, u));
    const double scale = std::max(1.0, std::abs(L.direct));
    if (L.spread() > tol.tensor_rel * scale || L.imag_residual > tol.tensor_rel * scale) {
        throw NumericalError("L operator forms disagree: metric or derivative defect");
    }
    return L.value();
}

/// Real (1,1)-tensor field: endomorphism of T_p on real components.
using EndomorphismField = std::function<RMatrix(const CVector&)>;
/// Real (0,3)-tensor field evaluated on three real vectors.
using CubicFormField = std::function<double(const CVector&, const RVector&, const RVector&, const RVector&)>;

/// sum_i Hess(u)(T_i grad u, T_i grad u) + Q(grad u, grad u, grad u).
inline double script_L(const HermitianChart& chart, const CVector& p, const ScalarField& u,
                       const std::vector<EndomorphismField>& T, const CubicFormField& Q) {
    const auto h = hessians(chart, p, u);
    const int m = 2 * chart.n();
    double s = 0.0;
    for (const auto& Ti : T) {
        const RMatrix M = Ti(p);
        if (M.rows() != m || M.cols() != m) throw ConfigError("tensor dimension does not match chart");
        const RVector w = M * h.gradient;
        s += w.dot(h.hess * w);
    }
    if (Q) s += Q(p, h.gradient, h.gradient, h.gradient);
    return s;
}

inline EndomorphismField identity_field(int n) {
    return [n](const CVector&) { return RMatrix(RMatrix::Identity(2 * n, 2 * n)); };
}
inline EndomorphismField J_field(int n) {
    return [n](const CVector&) { return complex_structure(n); };
}

struct PshResult {
    double min_eigenvalue = 0.0;
    bool is_psh = false;
};

/// Smallest eigenvalue of u_{i jbar} relative to g (equal to the plain
/// eigenvalue when g = delta); psh when it is >= -tensor_rel.
inline PshResult psh_test(const HermitianChart& chart, const CVector& p, const ScalarField& u,
                          const ToleranceBundle& tol = {}) {
    const auto md = chart.derivatives(p, 0);
    const auto sd = scalar_derivatives(chart, u, p);
    const CMatrix A = sd.complex_hessian();
    Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> es(0.5 * (A + A.adjoint()), md.g, Eigen::EigenvaluesOnly);
    PshResult r;
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.is_psh = r.min_eigenvalue >= -tol.tensor_rel;
    return r;
}

}  // namespace threecircle
