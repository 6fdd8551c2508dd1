#pragma once

// Holomorphic sectional curvature, its plus-sign companion, and the covariant
// derivative of J computed two ways.

#include "threecircle/geometry/connection.hpp"

#include <cmath>

namespace threecircle {

/// Curvature and torsion components in a unitary frame with e_1 = xi.
struct FrameComponents {
    double r1111 = 0.0;           // R_{1 1bar 1 1bar}
    double torsion_squared = 0.0;  // sum_{i >= 2} |tau^1_{i1}|^2
    CMatrix frame;
};

inline FrameComponents frame_components(const MetricDerivatives& md, const Tensor3& tau, const Tensor4& R,
                                        const CVector& xi, const CMatrix* seeds = nullptr) {
    const int n = md.n;
    const cplx s = hermitian_pairing(md.g, xi, xi);
    if (!(s.real() > 1e-300) || !std::isfinite(s.real())) throw DomainError("direction is not normalizable");
    FrameComponents fc;
    fc.frame = unitary_frame(md.g, &xi, seeds);
    const CVector e1 = fc.frame.col(0);
    fc.r1111 = R.evaluate(e1, e1, e1, e1).real();
    // frame components of tau(e_i, e_1): coefficients in the frame basis
    const Eigen::PartialPivLU<CMatrix> lu(fc.frame);
    for (int i = 1; i < n; ++i) {
        const CVector v = lu.solve(tau.contract(fc.frame.col(i), e1));
        fc.torsion_squared += std::norm(v(0));
    }
    return fc;
}

/// H(xi) = R_{1 1bar 1 1bar} - sum_{i >= 2} |tau^1_{i1}|^2 with e_1 = xi / |xi|.
inline double holomorphic_sectional_curvature(const MetricDerivatives& md, const CVector& xi,
                                              const CMatrix* seeds = nullptr) {
    const Tensor3 tau = torsion_from(chern_christoffels(md));
    const Tensor4 R = chern_curvature(md);
    const auto fc = frame_components(md, tau, R, xi, seeds);
    return fc.r1111 - fc.torsion_squared;
}

/// The same frame components with the torsion term added.
inline double converse_functional(const MetricDerivatives& md, const CVector& xi, const CMatrix* seeds = nullptr) {
    const Tensor3 tau = torsion_from(chern_christoffels(md));
    const Tensor4 R = chern_curvature(md);
    const auto fc = frame_components(md, tau, R, xi, seeds);
    return fc.r1111 + fc.torsion_squared;
}

inline double holomorphic_sectional_curvature(const HermitianChart& chart, const CVector& p, const CVector& xi) {
    return holomorphic_sectional_curvature(chart.derivatives(p, 2), xi);
}

inline double converse_functional(const HermitianChart& chart, const CVector& p, const CVector& xi) {
    return converse_functional(chart.derivatives(p, 2), xi);
}

/// (nabla_X J) X for the Levi-Civita connection, on real components.
inline RVector nabla_J_direct(const LeviCivitaData& lc, const RVector& X) {
    const RMatrix J = complex_structure(static_cast<int>(X.size()) / 2);
    return lc.apply(X, J * X) - J * lc.apply(X, X);
}

/// <(nabla_X J) X, Y> from differentiating J along Levi-Civita.
inline double nabla_J_pairing_direct(const LeviCivitaData& lc, const RVector& X, const RVector& Y) {
    return nabla_J_direct(lc, X).dot(lc.G * Y);
}

/// <(nabla_X J) X, Y> = 1/2 <tau(X, Y), JX> + 3/2 <tau(JX, Y), X>.
inline double nabla_J_pairing(const MetricDerivatives& md, const Tensor3& tau, const RVector& X, const RVector& Y) {
    const CVector x = to_complex(X);
    const CVector y = to_complex(Y);
    const CVector jx = I_unit * x;
    return 0.5 * real_pairing(md.g, tau.contract(x, y), jx) + 1.5 * real_pairing(md.g, tau.contract(jx, y), x);
}

inline double nabla_J_pairing(const HermitianChart& chart, const CVector& p, const RVector& X, const RVector& Y) {
    const auto md = chart.derivatives(p, 1);
    return nabla_J_pairing(md, torsion_from(chern_christoffels(md)), X, Y);
}

/// R^L(X, JX, JX, X) - |(nabla_X J) X|^2 for a real unit vector X.
inline double riemannian_side(const LeviCivitaData& lc, const RVector& X) {
    const RMatrix J = complex_structure(static_cast<int>(X.size()) / 2);
    const RVector JX = J * X;
    const RVector nj = nabla_J_direct(lc, X);
    return lc.riemann(X, JX, JX, X) - nj.dot(lc.G * nj);
}

}  // namespace threecircle
