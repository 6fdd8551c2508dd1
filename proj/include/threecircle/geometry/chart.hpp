#pragma once

// Coordinate-chart model of a Hermitian manifold: domain, metric field and its
// real/Wirtinger derivatives, tangent vectors and unitary frames.
//
// Conventions used throughout the library:
//  * complex coordinates z^k = x_{2k} + i x_{2k+1};
//  * g(i, j) stores g_{i jbar}, a Hermitian positive-definite matrix;
//  * a real tangent vector V = sum V^a d/dx_a has (1,0)-components
//    X^k = V^{2k} + i V^{2k+1}, and J acts on them as multiplication by i;
//  * the real length is |V|^2 = 2 sum g_{i jbar} X^i conj(X^j).

#include "threecircle/numerics/differentiate.hpp"
#include "threecircle/numerics/jet.hpp"
#include "threecircle/numerics/types.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace threecircle {

struct ChartDomain {
    enum class Shape { Ball, Polydisc };
    Shape shape = Shape::Ball;
    double radius = std::numeric_limits<double>::infinity();

    [[nodiscard]] double margin(const CVector& z) const {
        if (!std::isfinite(radius)) return std::numeric_limits<double>::infinity();
        if (shape == Shape::Ball) return radius - z.norm();
        double m = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < z.size(); ++k) m = std::min(m, radius - std::abs(z(k)));
        return m;
    }
    [[nodiscard]] bool contains(const CVector& z) const { return margin(z) > 0; }
    [[nodiscard]] bool bounded() const { return std::isfinite(radius); }
};

using MetricValueFn = std::function<CMatrix(const CVector&)>;
using MetricJetFn = std::function<SquareMat<Jet>(const std::vector<Jet>&)>;

/// Values and derivatives of the metric matrix at one point.
struct MetricDerivatives {
    int n = 0;
    int order = 0;
    CMatrix g;
    CMatrix ginv;
    std::vector<CMatrix> dx;   // d g / d x_a, a < 2n
    std::vector<CMatrix> dxx;  // d^2 g / d x_a d x_b at index a * 2n + b

    [[nodiscard]] const CMatrix& second(int a, int b) const { return dxx[static_cast<std::size_t>(a * 2 * n + b)]; }

    /// d_i g
    [[nodiscard]] CMatrix d(int i) const { return 0.5 * (dx[2 * i] - I_unit * dx[2 * i + 1]); }
    /// d_ibar g
    [[nodiscard]] CMatrix dbar(int i) const { return 0.5 * (dx[2 * i] + I_unit * dx[2 * i + 1]); }
    /// d_i d_jbar g
    [[nodiscard]] CMatrix d_dbar(int i, int j) const {
        return 0.25 * (second(2 * i, 2 * j) + I_unit * second(2 * i, 2 * j + 1) - I_unit * second(2 * i + 1, 2 * j) +
                       second(2 * i + 1, 2 * j + 1));
    }
    /// d_i d_j g
    [[nodiscard]] CMatrix d_d(int i, int j) const {
        return 0.25 * (second(2 * i, 2 * j) - I_unit * second(2 * i, 2 * j + 1) - I_unit * second(2 * i + 1, 2 * j) -
                       second(2 * i + 1, 2 * j + 1));
    }
    /// d_ibar d_jbar g
    [[nodiscard]] CMatrix dbar_dbar(int i, int j) const {
        return 0.25 * (second(2 * i, 2 * j) + I_unit * second(2 * i, 2 * j + 1) + I_unit * second(2 * i + 1, 2 * j) -
                       second(2 * i + 1, 2 * j + 1));
    }
};

inline RVector to_real(const CVector& X) {
    RVector v(2 * X.size());
    for (Eigen::Index k = 0; k < X.size(); ++k) {
        v(2 * k) = X(k).real();
        v(2 * k + 1) = X(k).imag();
    }
    return v;
}

inline CVector to_complex(const RVector& v) {
    CVector X(v.size() / 2);
    for (Eigen::Index k = 0; k < X.size(); ++k) X(k) = cplx(v(2 * k), v(2 * k + 1));
    return X;
}

/// Matrix of J on real components.
inline RMatrix complex_structure(int n) {
    RMatrix J = RMatrix::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        J(2 * k + 1, 2 * k) = 1.0;
        J(2 * k, 2 * k + 1) = -1.0;
    }
    return J;
}

/// Real metric G_ab = <d/dx_a, d/dx_b> induced by g.
inline RMatrix real_metric(const CMatrix& g) {
    const int n = static_cast<int>(g.rows());
    RMatrix G(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = 0; b < 2 * n; ++b) {
            const cplx ca = (a % 2 == 0) ? cplx(1.0) : I_unit;
            const cplx cb = (b % 2 == 0) ? cplx(1.0) : I_unit;
            G(a, b) = 2.0 * (ca * g(a / 2, b / 2) * std::conj(cb)).real();
        }
    }
    return G;
}

/// Hermitian pairing sum g_{i jbar} X^i conj(Y^j).
inline cplx hermitian_pairing(const CMatrix& g, const CVector& X, const CVector& Y) {
    return (X.transpose() * g * Y.conjugate())(0, 0);
}

/// Real inner product of real vectors with (1,0)-components X, Y.
inline double real_pairing(const CMatrix& g, const CVector& X, const CVector& Y) {
    return 2.0 * hermitian_pairing(g, X, Y).real();
}

class HermitianChart {
public:
    HermitianChart() = default;
    HermitianChart(int n, ChartDomain domain, MetricValueFn metric, MetricJetFn metric_jet, std::string label,
                   double injectivity_floor, DifferentiationMode mode = DifferentiationMode::analytic())
        : n_(n),
          domain_(domain),
          metric_(std::move(metric)),
          metric_jet_(std::move(metric_jet)),
          label_(std::move(label)),
          injectivity_floor_(injectivity_floor),
          mode_(mode) {
        if (n_ < 1) throw ConfigError("chart dimension must be at least 1");
        if (!metric_) throw ConfigError("chart requires a metric field");
        if (!(injectivity_floor_ > 0)) throw ConfigError("injectivity floor must be positive");
        mode_.validate();
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] const ChartDomain& domain() const { return domain_; }
    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] double injectivity_floor() const { return injectivity_floor_; }
    [[nodiscard]] const DifferentiationMode& mode() const { return mode_; }
    [[nodiscard]] bool has_jet() const { return static_cast<bool>(metric_jet_) && 2 * n_ <= kMaxJetVars; }
    [[nodiscard]] const MetricValueFn& metric_fn() const { return metric_; }
    [[nodiscard]] const MetricJetFn& metric_jet_fn() const { return metric_jet_; }

    /// Copy of this chart with another differentiation mode.
    [[nodiscard]] HermitianChart with_mode(const DifferentiationMode& m) const {
        HermitianChart c = *this;
        m.validate();
        c.mode_ = m;
        return c;
    }

    void require_interior(const CVector& z) const {
        if (z.size() != n_) throw ConfigError("point dimension does not match chart");
        if (!domain_.contains(z)) {
            std::ostringstream os;
            os << "point outside the domain of chart '" << label_ << "'";
            throw DomainError(os.str());
        }
    }

    [[nodiscard]] CMatrix g(const CVector& z) const {
        require_interior(z);
        return metric_(z);
    }

    /// Metric and derivatives up to `order` (0, 1 or 2) at z.
    [[nodiscard]] MetricDerivatives derivatives(const CVector& z, int order = 2) const {
        require_interior(z);
        MetricDerivatives md;
        md.n = n_;
        md.order = order;
        const int m = 2 * n_;
        const bool analytic = mode_.kind == DifferentiationMode::Kind::AnalyticCallback && has_jet();
        if (analytic && order > 0) {
            const auto gj = metric_jet_(seed_coordinates(z));
            md.g.resize(n_, n_);
            md.dx.assign(static_cast<std::size_t>(m), CMatrix(n_, n_));
            if (order > 1) md.dxx.assign(static_cast<std::size_t>(m * m), CMatrix(n_, n_));
            for (int i = 0; i < n_; ++i) {
                for (int j = 0; j < n_; ++j) {
                    const Jet& e = gj(i, j);
                    md.g(i, j) = e.value();
                    for (int a = 0; a < m; ++a) {
                        md.dx[static_cast<std::size_t>(a)](i, j) = e.grad()(a);
                        if (order > 1) {
                            for (int b = 0; b < m; ++b) md.dxx[static_cast<std::size_t>(a * m + b)](i, j) = e.hess()(a, b);
                        }
                    }
                }
            }
        } else {
            md.g = metric_(z);
            if (order > 0) {
                DifferentiationMode fd = mode_;
                if (fd.kind == DifferentiationMode::Kind::AnalyticCallback) fd = DifferentiationMode::finite_difference();
                fd_derivatives(z, order, fd, md);
            }
        }
        finish(md);
        return md;
    }

    /// Hermitian and positive-definite at `count` seeded sample points of the domain.
    void check_positive_definite(std::size_t count, std::uint64_t seed) const {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const double R = domain_.bounded() ? domain_.radius : 3.0;
        for (std::size_t s = 0; s < count; ++s) {
            CVector z(n_);
            for (int k = 0; k < n_; ++k) z(k) = cplx(gauss(rng), gauss(rng));
            double rad = R * std::pow(uni(rng), 1.0 / (2.0 * n_)) * 0.999;
            if (domain_.shape == ChartDomain::Shape::Polydisc) {
                for (int k = 0; k < n_; ++k) z(k) *= R * 0.999 * std::sqrt(uni(rng)) / std::abs(z(k));
            } else {
                z *= rad / z.norm();
            }
            const CMatrix gz = metric_(z);
            if ((gz - gz.adjoint()).norm() > 1e-12 * std::max(1.0, gz.norm())) {
                throw ConfigError("metric of chart '" + label_ + "' is not Hermitian");
            }
            Eigen::SelfAdjointEigenSolver<CMatrix> es(gz, Eigen::EigenvaluesOnly);
            if (!(es.eigenvalues().minCoeff() > 0)) {
                throw ConfigError("metric of chart '" + label_ + "' is not positive definite on its domain");
            }
        }
    }

private:
    void fd_derivatives(const CVector& z, int order, const DifferentiationMode& fd, MetricDerivatives& md) const {
        const int m = 2 * n_;
        const double need = fd.step * std::sqrt(2.0 * n_);
        if (domain_.margin(z) < need) {
            throw DomainError("point too close to domain boundary for the requested difference stencil");
        }
        const RVector x = to_real(z);
        auto field = [&](const RVector& y) { return CMatrix(metric_(to_complex(y))); };
        std::vector<int> orders(static_cast<std::size_t>(m), 0);
        md.dx.resize(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a) {
            orders.assign(static_cast<std::size_t>(m), 0);
            orders[static_cast<std::size_t>(a)] = 1;
            md.dx[static_cast<std::size_t>(a)] = real_partial<CMatrix>(field, x, orders, fd.step, fd.richardson_levels);
        }
        if (order < 2) return;
        md.dxx.assign(static_cast<std::size_t>(m * m), CMatrix());
        for (int a = 0; a < m; ++a) {
            for (int b = a; b < m; ++b) {
                orders.assign(static_cast<std::size_t>(m), 0);
                orders[static_cast<std::size_t>(a)] += 1;
                orders[static_cast<std::size_t>(b)] += 1;
                CMatrix v = real_partial<CMatrix>(field, x, orders, fd.step, fd.richardson_levels);
                md.dxx[static_cast<std::size_t>(a * m + b)] = v;
                md.dxx[static_cast<std::size_t>(b * m + a)] = v;
            }
        }
    }

    void finish(MetricDerivatives& md) const {
        Eigen::LLT<CMatrix> llt(md.g);
        if (llt.info() != Eigen::Success) {
            throw NumericalError("singular or indefinite metric in chart '" + label_ + "'");
        }
        md.ginv = llt.solve(CMatrix::Identity(n_, n_));
    }

    int n_ = 1;
    ChartDomain domain_;
    MetricValueFn metric_;
    MetricJetFn metric_jet_;
    std::string label_;
    double injectivity_floor_ = std::numeric_limits<double>::infinity();
    DifferentiationMode mode_;
};

/// A tangent vector given by its (1,0)-components at a base point.
struct TangentVec {
    CVector base;
    CVector comps;

    [[nodiscard]] double norm(const HermitianChart& chart) const {
        const double s = real_pairing(chart.g(base), comps, comps);
        if (!std::isfinite(s) || s < 0) throw NumericalError("tangent vector norm is not finite");
        return std::sqrt(s);
    }

    [[nodiscard]] TangentVec normalized(const HermitianChart& chart) const {
        const double nr = norm(chart);
        if (!(nr > 0)) throw DomainError("zero tangent vector cannot be normalized");
        return {base, comps / nr};
    }
};

/// Columns e_a with sum g_{i jbar} e_a^i conj(e_b^j) = delta_ab.
///
/// Modified Gram-Schmidt. When `first` is given it becomes e_1 (after
/// normalization); the remaining vectors are drawn from the columns of `seeds`
/// (identity by default), each time taking the candidate with the largest
/// remaining norm.
inline CMatrix unitary_frame(const CMatrix& g, const CVector* first = nullptr, const CMatrix* seeds = nullptr) {
    const int n = static_cast<int>(g.rows());
    const CMatrix S = seeds ? *seeds : CMatrix::Identity(n, n);
    std::vector<CVector> pool;
    for (int c = 0; c < S.cols(); ++c) pool.emplace_back(S.col(c));
    CMatrix E(n, n);
    int filled = 0;
    auto gnorm = [&](const CVector& v) { return std::sqrt(std::max(0.0, hermitian_pairing(g, v, v).real())); };
    auto orthogonalize = [&](CVector v) {
        for (int b = 0; b < filled; ++b) v -= hermitian_pairing(g, v, E.col(b)) * E.col(b);
        return v;
    };
    if (first) {
        const double nr = gnorm(*first);
        if (!(nr > 1e-300) || !std::isfinite(nr)) throw DomainError("direction is not normalizable");
        E.col(0) = *first / nr;
        filled = 1;
    }
    while (filled < n) {
        double best = -1.0;
        std::size_t best_k = 0;
        CVector best_v;
        for (std::size_t k = 0; k < pool.size(); ++k) {
            CVector v = orthogonalize(pool[k]);
            const double nr = gnorm(v);
            if (nr > best * (1.0 + 1e-12)) {
                best = nr;
                best_k = k;
                best_v = v;
            }
        }
        if (!(best > 1e-10)) throw NumericalError("frame seeds are degenerate");
        // second pass for stability
        best_v = orthogonalize(best_v);
        E.col(filled) = best_v / gnorm(best_v);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_k));
        ++filled;
    }
    return E;
}

}  // namespace threecircle
