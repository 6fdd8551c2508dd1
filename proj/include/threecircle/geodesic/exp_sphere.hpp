#pragma once

// Exponential spheres S_o(r) = exp_o(r S) sampled along seeded unit directions.

#include "threecircle/geodesic/geodesic.hpp"
#include "threecircle/numerics/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace threecircle {

/// Unit (1,0)-direction for a real unit vector s on S^{2n-1} through the
/// unitary frame E: X = E c with c_a = (s_{2a} + i s_{2a+1}) / sqrt(2).
inline CVector direction_from_sphere(const CMatrix& E, const RVector& s) {
    const auto n = E.cols();
    CVector c(n);
    for (Eigen::Index a = 0; a < n; ++a) c(a) = cplx(s(2 * a), s(2 * a + 1)) / std::sqrt(2.0);
    return E * c;
}

/// Seeded unit (1,0)-directions at o, in the order of sphere_directions.
inline std::vector<CVector> unit_directions(const HermitianChart& chart, const CVector& o, std::size_t count,
                                            std::uint64_t seed) {
    const CMatrix E = unitary_frame(chart.g(o));
    std::vector<CVector> out;
    out.reserve(count);
    for (const RVector& s : sphere_directions(2 * chart.n(), count, seed)) out.push_back(direction_from_sphere(E, s));
    return out;
}

struct ExpSphere {
    CVector o;
    std::vector<double> radii;
    std::vector<CVector> directions;
    // [radius][direction]
    std::vector<std::vector<CVector>> points;
    std::vector<std::vector<CVector>> velocities;
    std::vector<std::vector<char>> valid;
    bool beyond_injectivity_floor = false;
    double max_speed_drift = 0.0;
    std::size_t exited_directions = 0;

    [[nodiscard]] std::size_t valid_count(std::size_t r) const {
        return static_cast<std::size_t>(std::count(valid[r].begin(), valid[r].end(), char(1)));
    }
};

/// One geodesic per direction, integrated to the largest radius with every
/// radius as an exact node. Throws DomainError when every direction leaves
/// the chart before some radius.
inline ExpSphere exp_sphere(const HermitianChart& chart, const CVector& o, const std::vector<double>& radii,
                            const std::vector<CVector>& directions, const ToleranceBundle& tol = {}) {
    if (radii.empty() || directions.empty()) throw ConfigError("exp_sphere needs radii and directions");
    for (double r : radii) {
        if (!(r > 0) || !std::isfinite(r)) throw ConfigError("sphere radii must be positive and finite");
    }
    ExpSphere S;
    S.o = o;
    S.radii = radii;
    S.directions = directions;
    const double r_max = *std::max_element(radii.begin(), radii.end());
    S.beyond_injectivity_floor = r_max > chart.injectivity_floor();
    const std::size_t R = radii.size(), D = directions.size();
    S.points.assign(R, std::vector<CVector>(D));
    S.velocities.assign(R, std::vector<CVector>(D));
    S.valid.assign(R, std::vector<char>(D, 0));
    std::vector<double> drift(D, 0.0);
    std::vector<char> exited(D, 0);

    GeodesicOptions opts;
    opts.tol = tol;
    opts.checkpoints = radii;
    parallel_for(D, [&](std::size_t d) {
        const auto path = integrate_geodesic(chart, o, directions[d], r_max, opts);
        drift[d] = path.speed_drift;
        exited[d] = path.exited ? 1 : 0;
        for (std::size_t r = 0; r < R; ++r) {
            if (!path.reached(radii[r])) continue;
            const OdeState y = path.solution->eval(radii[r]);
            S.points[r][d] = to_complex(GeodesicPath::position(y));
            S.velocities[r][d] = to_complex(GeodesicPath::velocity(y));
            S.valid[r][d] = 1;
        }
    });
    for (std::size_t d = 0; d < D; ++d) {
        S.max_speed_drift = std::max(S.max_speed_drift, drift[d]);
        S.exited_directions += exited[d] ? 1 : 0;
    }
    for (std::size_t r = 0; r < R; ++r) {
        if (S.valid_count(r) == 0) throw DomainError("every geodesic left the chart before the requested radius");
    }
    return S;
}

}  // namespace threecircle
