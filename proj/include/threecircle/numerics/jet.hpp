#pragma once

// Second-order forward-mode differentiation over real coordinates.
//
// A Jet carries the value, real gradient and real Hessian of a complex-valued
// function of m <= kMaxJetVars real variables. Fields written as templates over
// their scalar type can be evaluated with `cplx` for values and with `Jet` for
// exact first and second derivatives; this backs the analytic-callback
// differentiation mode.

#include "threecircle/numerics/types.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace threecircle {

inline constexpr int kMaxJetVars = 6;

class Jet {
public:
    using Grad = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxJetVars, 1>;
    using Hess = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxJetVars, kMaxJetVars>;

    Jet() = default;
    Jet(cplx value, int vars) : v_(value), g_(Grad::Zero(vars)), h_(Hess::Zero(vars, vars)) {}
    Jet(cplx value, Grad g, Hess h) : v_(value), g_(std::move(g)), h_(std::move(h)) {}

    /// Independent real variable number `index` out of `vars`, with value `x`.
    static Jet variable(double x, int index, int vars) {
        Jet j(x, vars);
        j.g_(index) = 1.0;
        return j;
    }

    /// The complex coordinate x_{2k} + i x_{2k+1} as a jet.
    static Jet complex_coordinate(cplx z, int k, int vars) {
        Jet j(z, vars);
        j.g_(2 * k) = 1.0;
        j.g_(2 * k + 1) = I_unit;
        return j;
    }

    [[nodiscard]] int vars() const { return static_cast<int>(g_.size()); }
    [[nodiscard]] cplx value() const { return v_; }
    [[nodiscard]] const Grad& grad() const { return g_; }
    [[nodiscard]] const Hess& hess() const { return h_; }

    Jet& operator+=(const Jet& o) {
        v_ += o.v_;
        g_ += o.g_;
        h_ += o.h_;
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v_ -= o.v_;
        g_ -= o.g_;
        h_ -= o.h_;
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        Hess h = v_ * o.h_ + o.v_ * h_ + g_ * o.g_.transpose() + o.g_ * g_.transpose();
        g_ = v_ * o.g_ + o.v_ * g_;
        v_ *= o.v_;
        h_ = std::move(h);
        return *this;
    }
    Jet& operator/=(const Jet& o) { return *this *= o.reciprocal(); }

    Jet& operator+=(cplx c) {
        v_ += c;
        return *this;
    }
    Jet& operator-=(cplx c) {
        v_ -= c;
        return *this;
    }
    Jet& operator*=(cplx c) {
        v_ *= c;
        g_ *= c;
        h_ *= c;
        return *this;
    }
    Jet& operator/=(cplx c) { return *this *= (1.0 / c); }

    Jet operator-() const { return Jet(-v_, -g_, -h_); }

    /// phi(this) given phi(v), phi'(v), phi''(v).
    [[nodiscard]] Jet compose(cplx f0, cplx f1, cplx f2) const {
        return Jet(f0, f1 * g_, f1 * h_ + f2 * (g_ * g_.transpose()));
    }

    [[nodiscard]] Jet reciprocal() const {
        const cplx r = 1.0 / v_;
        return compose(r, -r * r, 2.0 * r * r * r);
    }

    [[nodiscard]] Jet conjugate() const { return Jet(std::conj(v_), g_.conjugate(), h_.conjugate()); }

private:
    cplx v_{};
    Grad g_;
    Hess h_;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, cplx c) { return a += c; }
inline Jet operator-(Jet a, cplx c) { return a -= c; }
inline Jet operator*(Jet a, cplx c) { return a *= c; }
inline Jet operator/(Jet a, cplx c) { return a /= c; }
inline Jet operator+(cplx c, Jet a) { return a += c; }
inline Jet operator-(cplx c, const Jet& a) { return (-a) += c; }
inline Jet operator*(cplx c, Jet a) { return a *= c; }
inline Jet operator/(cplx c, const Jet& a) { return a.reciprocal() * c; }
inline Jet operator+(Jet a, double c) { return a += cplx(c); }
inline Jet operator-(Jet a, double c) { return a -= cplx(c); }
inline Jet operator*(Jet a, double c) { return a *= cplx(c); }
inline Jet operator/(Jet a, double c) { return a /= cplx(c); }
inline Jet operator+(double c, Jet a) { return a += cplx(c); }
inline Jet operator-(double c, const Jet& a) { return (-a) += cplx(c); }
inline Jet operator*(double c, Jet a) { return a *= cplx(c); }
inline Jet operator/(double c, const Jet& a) { return a.reciprocal() * cplx(c); }

inline Jet conj(const Jet& a) { return a.conjugate(); }
inline Jet exp(const Jet& a) {
    const cplx e = std::exp(a.value());
    return a.compose(e, e, e);
}
inline Jet log(const Jet& a) {
    const cplx r = 1.0 / a.value();
    return a.compose(std::log(a.value()), r, -r * r);
}
inline Jet sqrt(const Jet& a) {
    const cplx s = std::sqrt(a.value());
    return a.compose(s, 0.5 / s, -0.25 / (s * a.value()));
}
inline Jet pow(const Jet& a, double p) {
    const cplx v = a.value();
    return a.compose(std::pow(v, p), p * std::pow(v, p - 1.0), p * (p - 1.0) * std::pow(v, p - 2.0));
}

// Scalar-generic helpers so templated fields can be written once.
inline cplx conj(cplx a) { return std::conj(a); }

template <class S>
S scalar_constant(cplx c, int vars) {
    if constexpr (std::is_same_v<S, Jet>) {
        return Jet(c, vars);
    } else {
        (void)vars;
        return S(c);
    }
}

template <class S>
int scalar_vars(const S& s) {
    if constexpr (std::is_same_v<S, Jet>) {
        return s.vars();
    } else {
        (void)s;
        return 0;
    }
}

/// Dense square matrix over a generic scalar (cplx or Jet), row-major.
template <class S>
struct SquareMat {
    int n = 0;
    std::vector<S> a;

    SquareMat() = default;
    SquareMat(int dim, const S& fill) : n(dim), a(static_cast<std::size_t>(dim * dim), fill) {}

    S& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    const S& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

/// Complex-coordinate jets seeded at point p (2n real variables).
inline std::vector<Jet> seed_coordinates(const CVector& p) {
    const int n = static_cast<int>(p.size());
    std::vector<Jet> z;
    z.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        z.push_back(Jet::complex_coordinate(p(k), k, 2 * n));
    }
    return z;
}

}  // namespace threecircle
