#pragma once

#include "threecircle/numerics/types.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

namespace threecircle {

struct QuadratureResult {
    double value = 0.0;       // integral over [a, b]
    double error = 0.0;       // estimated absolute error of `value`
    double tail = 0.0;        // caller-certified mass beyond b (not included in `value`)
};

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b].
///
/// `tail_bound` is the caller's certified bound on the integral beyond b; when
/// it exceeds the tolerance budget the tail is declared non-convergent.
inline QuadratureResult quadrature(const std::function<double(double)>& f, double a, double b, double tol,
                                   double tail_bound = 0.0) {
    if (!(tol > 0)) throw ConfigError("quadrature tolerance must be positive");
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("quadrature interval must be finite");
    if (tail_bound < 0 || !std::isfinite(tail_bound)) throw NumericalError("invalid tail bound");
    if (tail_bound > tol) {
        std::ostringstream os;
        os << "non-convergent tail: bound " << tail_bound << " exceeds tolerance budget " << tol;
        throw NumericalError(os.str());
    }
    QuadratureResult r;
    r.tail = tail_bound;
    if (a == b) return r;
    // relative termination inside Boost; tighten so absolute tol is met for O(1) integrals
    const double rel = std::max(tol * 1e-2, 1e-14);
    auto piece = [&](double lo, double hi) {
        double err = 0.0;
        r.value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 20, rel, &err);
        r.error += err * 0.5 * std::abs(hi - lo);
    };
    // long intervals are cut at geometrically spaced knots so slowly decaying
    // integrands keep their mass resolved
    const double sgn = b > a ? 1.0 : -1.0;
    double lo = a;
    double width = 1.0;
    while (std::abs(b - lo) > 64.0 * width) {
        piece(lo, lo + sgn * width);
        lo += sgn * width;
        width *= 2.0;
    }
    piece(lo, b);
    if (!std::isfinite(r.value)) throw NumericalError("quadrature produced a non-finite value");
    return r;
}

/// Sum of adaptive integrals over consecutive breakpoints (integrand may be
/// discontinuous at the breakpoints).
inline QuadratureResult quadrature_piecewise(const std::function<double(double)>& f, const std::vector<double>& knots,
                                             double tol) {
    QuadratureResult total;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const auto piece = quadrature(f, knots[k], knots[k + 1], tol);
        total.value += piece.value;
        total.error += piece.error;
    }
    return total;
}

}  // namespace threecircle
