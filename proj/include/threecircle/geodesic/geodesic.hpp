#pragma once

// Geodesics of the Levi-Civita connection written through the Chern
// connection: Christoffel symbols plus a torsion correction,
//
//   zdd^i = -Gamma^i_{jk} zd^j zd^k
//           - g^{lambdabar i} conj(tau^k_{j lambda}) g_{l kbar} conj(zd^j) zd^l.

#include "threecircle/geometry/connection.hpp"
#include "threecircle/numerics/ode.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace threecircle {

/// Second derivative of a geodesic through z with velocity zd.
inline CVector geodesic_acceleration(const MetricDerivatives& md, const CVector& zd) {
    const int n = md.n;
    const Tensor3 gamma = chern_christoffels(md);
    CVector acc = -gamma.contract(zd, zd);
    CVector b = CVector::Zero(n);
    for (int lam = 0; lam < n; ++lam)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const cplx tau = gamma(k, j, lam) - gamma(k, lam, j);
                if (tau == cplx(0.0)) continue;
                cplx gl = 0.0;
                for (int l = 0; l < n; ++l) gl += md.g(l, k) * zd(l);
                b(lam) += std::conj(tau) * gl * std::conj(zd(j));
            }
    acc -= md.ginv.transpose() * b;
    return acc;
}

struct GeodesicOptions {
    ToleranceBundle tol;
    // Times at which the path must have exact nodes (e.g. sphere radii).
    std::vector<double> checkpoints;
    // Integrate the real Levi-Civita form too and record the largest deviation.
    bool cross_check = false;
};

struct GeodesicPath {
    CVector o;
    CVector X;
    double t_max = 0.0;
    double t_reached = 0.0;
    bool exited = false;
    std::string exit_reason;
    double speed_drift = 0.0;                         // sup |speed - 1| over nodes
    std::vector<std::pair<double, double>> speed_history;  // (t, |speed - 1|)
    double cross_check_deviation = std::numeric_limits<double>::quiet_NaN();
    std::shared_ptr<const DenseSolution> solution;

    [[nodiscard]] CVector z(double t) const { return to_complex(position(solution->eval(t))); }
    [[nodiscard]] CVector zdot(double t) const { return to_complex(velocity(solution->eval(t))); }
    [[nodiscard]] CVector end() const { return z(t_reached); }
    [[nodiscard]] bool reached(double t) const { return t <= t_reached * (1 + 1e-14) + 1e-300; }

    static RVector position(const OdeState& y) {
        const auto m = static_cast<Eigen::Index>(y.size() / 2);
        return Eigen::Map<const RVector>(y.data(), m);
    }
    static RVector velocity(const OdeState& y) {
        const auto m = static_cast<Eigen::Index>(y.size() / 2);
        return Eigen::Map<const RVector>(y.data() + m, m);
    }
};

namespace detail {

inline OdeState pack(const CVector& z, const CVector& zd) {
    const RVector a = to_real(z), b = to_real(zd);
    OdeState y(static_cast<std::size_t>(a.size() + b.size()));
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        y[static_cast<std::size_t>(k)] = a(k);
        y[static_cast<std::size_t>(a.size() + k)] = b(k);
    }
    return y;
}

inline double unit_defect(const HermitianChart& chart, const CVector& o, const CVector& X) {
    return std::abs(std::sqrt(real_pairing(chart.g(o), X, X)) - 1.0);
}

inline void finish_path(const HermitianChart& chart, GeodesicPath& path, const DenseSolution& sol) {
    path.t_reached = sol.t_end();
    path.exited = sol.truncated;
    path.exit_reason = sol.truncation_reason;
    for (std::size_t k = 0; k < sol.nodes(); ++k) {
        const OdeState& y = sol.node_state(k);
        const CVector z = to_complex(GeodesicPath::position(y));
        const CVector zd = to_complex(GeodesicPath::velocity(y));
        const double s = std::abs(std::sqrt(real_pairing(chart.metric_fn()(z), zd, zd)) - 1.0);
        path.speed_history.emplace_back(sol.times()[k], s);
        path.speed_drift = std::max(path.speed_drift, s);
    }
}

}  // namespace detail

/// Real Levi-Civita geodesic, the independent formulation used for cross-checks.
inline GeodesicPath integrate_geodesic_levi_civita(const HermitianChart& chart, const CVector& o, const CVector& X,
                                                   double t_max, const GeodesicOptions& opts = {}) {
    chart.require_interior(o);
    if (detail::unit_defect(chart, o, X) > 1e-10) throw ConfigError("geodesic direction must have unit length");
    const int m = 2 * chart.n();
    OdeRhs rhs = [&chart, m](double, const OdeState& y, OdeState& dy) {
        const RVector x = Eigen::Map<const RVector>(y.data(), m);
        const RVector v = Eigen::Map<const RVector>(y.data() + m, m);
        const auto lc = levi_civita(chart.derivatives(to_complex(x), 1));
        const RVector a = -lc.apply(v, v);
        for (int k = 0; k < m; ++k) {
            dy[static_cast<std::size_t>(k)] = v(k);
            dy[static_cast<std::size_t>(m + k)] = a(k);
        }
    };
    OdeOptions oo;
    oo.checkpoints = opts.checkpoints;
    auto sol = std::make_shared<DenseSolution>(integrate_ode(rhs, detail::pack(o, X), 0.0, t_max, opts.tol, oo));
    GeodesicPath path;
    path.o = o;
    path.X = X;
    path.t_max = t_max;
    detail::finish_path(chart, path, *sol);
    path.solution = std::move(sol);
    return path;
}

/// Geodesic from o with unit initial velocity X on [0, t_max]. Leaving the
/// chart domain ends the path early with `exited` set.
inline GeodesicPath integrate_geodesic(const HermitianChart& chart, const CVector& o, const CVector& X, double t_max,
                                       const GeodesicOptions& opts = {}) {
    chart.require_interior(o);
    if (X.size() != chart.n()) throw ConfigError("direction dimension does not match chart");
    if (!(t_max >= 0) || !std::isfinite(t_max)) throw ConfigError("geodesic length must be finite and nonnegative");
    if (detail::unit_defect(chart, o, X) > 1e-10) throw ConfigError("geodesic direction must have unit length");
    const int m = 2 * chart.n();
    OdeRhs rhs = [&chart, m](double, const OdeState& y, OdeState& dy) {
        const CVector z = to_complex(Eigen::Map<const RVector>(y.data(), m));
        const CVector zd = to_complex(Eigen::Map<const RVector>(y.data() + m, m));
        const RVector a = to_real(geodesic_acceleration(chart.derivatives(z, 1), zd));
        for (int k = 0; k < m; ++k) {
            dy[static_cast<std::size_t>(k)] = y[static_cast<std::size_t>(m + k)];
            dy[static_cast<std::size_t>(m + k)] = a(k);
        }
    };
    OdeOptions oo;
    oo.checkpoints = opts.checkpoints;
    auto sol = std::make_shared<DenseSolution>(integrate_ode(rhs, detail::pack(o, X), 0.0, t_max, opts.tol, oo));
    GeodesicPath path;
    path.o = o;
    path.X = X;
    path.t_max = t_max;
    detail::finish_path(chart, path, *sol);
    path.solution = std::move(sol);
    if (opts.cross_check) {
        const auto lc = integrate_geodesic_levi_civita(chart, o, X, path.t_reached, opts);
        double dev = 0.0;
        for (double t : path.solution->times()) {
            if (t > lc.t_reached) break;
            dev = std::max(dev, (path.z(t) - lc.z(t)).norm());
        }
        path.cross_check_deviation = dev;
    }
    return path;
}

}  // namespace threecircle
