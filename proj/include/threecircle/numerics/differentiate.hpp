#pragma once

// Central finite differences with Richardson extrapolation, real and Wirtinger
// partial derivatives of fields over C^n.

#include "threecircle/numerics/types.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <vector>

namespace threecircle {

struct DifferentiationMode {
    enum class Kind { AnalyticCallback, FiniteDifference };

    Kind kind = Kind::AnalyticCallback;
    // Base step for finite differences. With three Richardson levels the
    // truncation error is O(h^6) and roundoff O(eps/h^2), which balance near
    // h ~ eps^(1/8) ~ 1e-2.
    double step = 1e-2;
    int richardson_levels = 3;

    void validate() const {
        if (!(step > 0)) throw ConfigError("differentiation step must be positive");
        if (richardson_levels < 1 || richardson_levels > 4) {
            throw ConfigError("richardson_levels must lie in [1, 4]");
        }
    }

    static DifferentiationMode analytic() { return {}; }
    static DifferentiationMode finite_difference(double h = 1e-2, int levels = 3) {
        DifferentiationMode m;
        m.kind = Kind::FiniteDifference;
        m.step = h;
        m.richardson_levels = levels;
        m.validate();
        return m;
    }
};

inline constexpr int kMaxDerivativeOrder = 4;

namespace detail {

struct StencilTap {
    int offset;
    double weight;
};

inline const std::vector<StencilTap>& central_stencil(int order) {
    static const std::array<std::vector<StencilTap>, 5> table = {{
        {{0, 1.0}},
        {{-1, -0.5}, {1, 0.5}},
        {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
        {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
        {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
    }};
    return table.at(static_cast<std::size_t>(order));
}

inline int stencil_span(int order) { return order >= 3 ? 2 : (order >= 1 ? 1 : 0); }

}  // namespace detail

/// Largest coordinate displacement (in units of the base step) a derivative of
/// the given real orders will probe.
inline int richardson_span(const std::vector<int>& real_orders) {
    int span = 0;
    for (int o : real_orders) span = std::max(span, detail::stencil_span(o));
    return span;
}

/// Mixed real partial derivative of `f` at `x` with per-variable orders,
/// estimated by tensor-product central stencils and Richardson extrapolation.
/// V must support V + V and double * V.
template <class V, class F>
V real_partial(const F& f, const RVector& x, const std::vector<int>& orders, double step, int levels) {
    const int m = static_cast<int>(x.size());
    if (static_cast<int>(orders.size()) != m) throw ConfigError("order vector size mismatch");
    int total = 0;
    for (int o : orders) {
        if (o < 0) throw ConfigError("negative derivative order");
        total += o;
    }
    if (total > kMaxDerivativeOrder) throw DomainError("derivative order exceeds supported maximum of 4");
    if (total == 0) return f(x);

    std::vector<int> active;
    for (int a = 0; a < m; ++a) {
        if (orders[static_cast<std::size_t>(a)] > 0) active.push_back(a);
    }

    auto estimate = [&](double h) -> V {
        // enumerate the tensor product of per-variable stencils
        std::vector<std::size_t> idx(active.size(), 0);
        bool have = false;
        V acc{};
        while (true) {
            double w = 1.0;
            RVector y = x;
            for (std::size_t k = 0; k < active.size(); ++k) {
                const int a = active[k];
                const auto& st = detail::central_stencil(orders[static_cast<std::size_t>(a)]);
                w *= st[idx[k]].weight;
                y(a) += st[idx[k]].offset * h;
            }
            if (have) {
                acc = acc + w * f(y);
            } else {
                acc = w * f(y);
                have = true;
            }
            std::size_t k = 0;
            for (; k < active.size(); ++k) {
                const auto& st = detail::central_stencil(orders[static_cast<std::size_t>(active[k])]);
                if (++idx[k] < st.size()) break;
                idx[k] = 0;
            }
            if (k == active.size()) break;
        }
        return (1.0 / std::pow(h, total)) * acc;
    };

    std::vector<V> table;
    table.reserve(static_cast<std::size_t>(levels));
    double h = step;
    for (int l = 0; l < levels; ++l, h *= 0.5) table.push_back(estimate(h));
    for (int k = 1; k < levels; ++k) {
        const double factor = std::pow(4.0, k);
        for (int l = levels - 1; l >= k; --l) {
            table[static_cast<std::size_t>(l)] = (factor / (factor - 1.0)) * table[static_cast<std::size_t>(l)] +
                                                 (-1.0 / (factor - 1.0)) * table[static_cast<std::size_t>(l - 1)];
        }
    }
    return table.back();
}

/// Holomorphic and antiholomorphic derivative orders per complex coordinate.
struct WirtingerIndex {
    std::vector<int> holo;
    std::vector<int> anti;

    [[nodiscard]] int total() const {
        int t = 0;
        for (int o : holo) t += o;
        for (int o : anti) t += o;
        return t;
    }
};

namespace detail {

// Expansion of (1/2)^(a+b) (d_x - i d_y)^a (d_x + i d_y)^b as sum c_p d_x^p d_y^(a+b-p).
inline std::vector<cplx> wirtinger_expansion(int a, int b) {
    std::vector<cplx> poly{1.0};  // coefficients of d_x^p, with d_y filling the rest
    auto multiply = [&](cplx ycoef) {
        std::vector<cplx> next(poly.size() + 1, 0.0);
        for (std::size_t p = 0; p < poly.size(); ++p) {
            next[p + 1] += 0.5 * poly[p];     // d_x
            next[p] += 0.5 * ycoef * poly[p];  // d_y
        }
        poly = std::move(next);
    };
    for (int k = 0; k < a; ++k) multiply(-I_unit);
    for (int k = 0; k < b; ++k) multiply(I_unit);
    return poly;
}

}  // namespace detail

/// Wirtinger derivative of a field over C^n by finite differences.
/// `boundary_margin` is the distance from `point` to the boundary of the
/// field's domain (infinity when unbounded).
template <class V, class F>
V differentiate(const F& field, const CVector& point, const WirtingerIndex& index, const DifferentiationMode& mode,
                double boundary_margin = std::numeric_limits<double>::infinity()) {
    mode.validate();
    const int n = static_cast<int>(point.size());
    if (static_cast<int>(index.holo.size()) != n || static_cast<int>(index.anti.size()) != n) {
        throw ConfigError("Wirtinger index size mismatch");
    }
    if (index.total() > kMaxDerivativeOrder) throw DomainError("derivative order exceeds supported maximum of 4");

    std::vector<std::vector<cplx>> per_coord;
    int span = 0;
    for (int k = 0; k < n; ++k) {
        per_coord.push_back(detail::wirtinger_expansion(index.holo[static_cast<std::size_t>(k)],
                                                        index.anti[static_cast<std::size_t>(k)]));
        span = std::max(span, detail::stencil_span(index.holo[static_cast<std::size_t>(k)] +
                                                   index.anti[static_cast<std::size_t>(k)]));
    }
    if (boundary_margin < mode.step * span * std::sqrt(2.0 * n)) {
        throw DomainError("point too close to domain boundary for the requested difference stencil");
    }

    RVector x(2 * n);
    for (int k = 0; k < n; ++k) {
        x(2 * k) = point(k).real();
        x(2 * k + 1) = point(k).imag();
    }
    auto real_field = [&](const RVector& y) {
        CVector z(n);
        for (int k = 0; k < n; ++k) z(k) = cplx(y(2 * k), y(2 * k + 1));
        return field(z);
    };

    // enumerate the product of per-coordinate expansions
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    bool have = false;
    V acc{};
    while (true) {
        cplx coef = 1.0;
        std::vector<int> orders(static_cast<std::size_t>(2 * n), 0);
        for (int k = 0; k < n; ++k) {
            const auto& ex = per_coord[static_cast<std::size_t>(k)];
            const int tot = static_cast<int>(ex.size()) - 1;
            const int p = static_cast<int>(pick[static_cast<std::size_t>(k)]);
            coef *= ex[static_cast<std::size_t>(p)];
            orders[static_cast<std::size_t>(2 * k)] = p;
            orders[static_cast<std::size_t>(2 * k + 1)] = tot - p;
        }
        if (coef != cplx(0.0)) {
            V term = real_partial<V>(real_field, x, orders, mode.step, mode.richardson_levels);
            if (have) {
                acc = acc + coef * term;
            } else {
                acc = coef * term;
                have = true;
            }
        }
        int k = 0;
        for (; k < n; ++k) {
            if (++pick[static_cast<std::size_t>(k)] < per_coord[static_cast<std::size_t>(k)].size()) break;
            pick[static_cast<std::size_t>(k)] = 0;
        }
        if (k == n) break;
    }
    if (!have) return 0.0 * field(point);
    return acc;
}

}  // namespace threecircle
