#pragma once

// Sampled lower curve for the holomorphic sectional curvature along geodesics
// from o: the minimum over directions of H(gamma'(r)).

#include "threecircle/geodesic/exp_sphere.hpp"
#include "threecircle/geometry/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace threecircle {

struct HLowerProfile {
    std::vector<double> radii;     // radii[0] = 0
    std::vector<double> sampled;   // min over directions
    std::vector<double> spread;    // max - min over directions
    std::vector<double> slack;
    std::vector<double> envelope;  // running minimum of sampled - slack
    bool beyond_injectivity_floor = false;

    /// Lower bound valid on [0, r] for r within the sampled radii.
    [[nodiscard]] double lower_bound(double r) const {
        for (std::size_t k = 0; k < radii.size(); ++k) {
            if (radii[k] >= r) return envelope[k];
        }
        return envelope.back();
    }
};

/// `directions` are unit (1,0)-vectors at o. The slack term is spread * delta^2
/// with delta the covering scale (|S^{2n-1}| / N)^{1/(2n-1)} of N directions.
inline HLowerProfile h_lower_profile(const HermitianChart& chart, const CVector& o, const std::vector<double>& radii,
                                     const std::vector<CVector>& directions, const ToleranceBundle& tol = {}) {
    const int n = chart.n();
    const std::size_t D = directions.size();
    if (D == 0) throw ConfigError("h_lower_profile needs directions");
    const double dim = 2.0 * n - 1.0;
    const double area = 2.0 * std::pow(M_PI, n) / std::tgamma(static_cast<double>(n));
    const double delta = std::pow(area / static_cast<double>(D), 1.0 / dim);

    std::vector<double> positive;
    for (double r : radii) {
        if (r > 0) positive.push_back(r);
    }
    std::sort(positive.begin(), positive.end());
    positive.erase(std::unique(positive.begin(), positive.end()), positive.end());

    HLowerProfile prof;
    prof.radii.push_back(0.0);
    prof.radii.insert(prof.radii.end(), positive.begin(), positive.end());
    const std::size_t R = prof.radii.size();
    std::vector<std::vector<double>> H(R, std::vector<double>(D, std::numeric_limits<double>::quiet_NaN()));

    const auto md0 = chart.derivatives(o, 2);
    for (std::size_t d = 0; d < D; ++d) H[0][d] = holomorphic_sectional_curvature(md0, directions[d]);
    if (!positive.empty()) {
        const auto S = exp_sphere(chart, o, positive, directions, tol);
        prof.beyond_injectivity_floor = S.beyond_injectivity_floor;
        parallel_for(D, [&](std::size_t d) {
            for (std::size_t r = 0; r < positive.size(); ++r) {
                if (!S.valid[r][d]) continue;
                H[r + 1][d] =
                    holomorphic_sectional_curvature(chart.derivatives(S.points[r][d], 2), S.velocities[r][d]);
            }
        });
    }
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < R; ++r) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double h : H[r]) {
            if (std::isnan(h)) continue;
            lo = std::min(lo, h);
            hi = std::max(hi, h);
        }
        prof.sampled.push_back(lo);
        prof.spread.push_back(hi - lo);
        prof.slack.push_back((hi - lo) * delta * delta);
        running = std::min(running, lo - prof.slack.back());
        prof.envelope.push_back(running);
    }
    return prof;
}

}  // namespace threecircle
