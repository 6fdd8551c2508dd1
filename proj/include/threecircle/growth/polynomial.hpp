#pragma once

// Exact multivariate polynomials over C and the holomorphic test-function
// catalog built on them.

#include "threecircle/geometry/catalog.hpp"
#include "threecircle/geometry/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace threecircle {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& a) {
    int s = 0;
    for (int e : a) s += e;
    return s;
}

/// All exponents in n variables with total degree <= d, graded then lexicographic.
inline std::vector<Exponent> monomials_up_to(int n, int d) {
    std::vector<Exponent> out;
    Exponent a(static_cast<std::size_t>(n), 0);
    for (int deg = 0; deg <= d; ++deg) {
        // compositions of deg into n parts, lexicographically descending in a[0]
        std::function<void(int, int)> rec = [&](int k, int left) {
            if (k == n - 1) {
                a[static_cast<std::size_t>(k)] = left;
                out.push_back(a);
                return;
            }
            for (int e = left; e >= 0; --e) {
                a[static_cast<std::size_t>(k)] = e;
                rec(k + 1, left - e);
            }
        };
        rec(0, deg);
    }
    return out;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

/// Polynomial in z^1..z^n. Terms are kept sorted by exponent with no zero
/// coefficients.
class Polynomial {
public:
    explicit Polynomial(int n = 1) : n_(n) {
        if (n < 1) throw ConfigError("polynomial needs at least one variable");
    }

    static Polynomial constant(int n, cplx c) {
        Polynomial p(n);
        p.add_term(Exponent(static_cast<std::size_t>(n), 0), c);
        return p;
    }
    static Polynomial monomial(const Exponent& a, cplx c = 1.0) {
        Polynomial p(static_cast<int>(a.size()));
        p.add_term(a, c);
        return p;
    }
    static Polynomial coordinate(int n, int k) {
        Exponent a(static_cast<std::size_t>(n), 0);
        a[static_cast<std::size_t>(k)] = 1;
        return monomial(a);
    }

    void add_term(const Exponent& a, cplx c) {
        if (static_cast<int>(a.size()) != n_) throw ConfigError("exponent length does not match variable count");
        for (int e : a) {
            if (e < 0) throw ConfigError("negative exponent");
        }
        if (c == cplx(0.0)) return;
        auto [it, inserted] = terms_.emplace(a, c);
        if (!inserted) {
            it->second += c;
            if (it->second == cplx(0.0)) terms_.erase(it);
        }
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] const std::map<Exponent, cplx>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    [[nodiscard]] cplx coefficient(const Exponent& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? cplx(0.0) : it->second;
    }

    [[nodiscard]] int degree() const {
        if (is_zero()) throw DomainError("degree of the zero polynomial");
        int d = 0;
        for (const auto& [a, c] : terms_) d = std::max(d, total_degree(a));
        return d;
    }

    /// Lowest total degree of a nonzero coefficient (at the origin).
    [[nodiscard]] int low_degree() const {
        if (is_zero()) throw DomainError("vanishing order of the zero polynomial");
        int d = std::numeric_limits<int>::max();
        for (const auto& [a, c] : terms_) d = std::min(d, total_degree(a));
        return d;
    }

    template <class S>
    [[nodiscard]] S evaluate(const std::vector<S>& z) const {
        const int vars = scalar_vars(z.front());
        S sum = scalar_constant<S>(0.0, vars);
        // power tables per variable
        std::vector<std::vector<S>> pw(static_cast<std::size_t>(n_));
        for (int k = 0; k < n_; ++k) pw[static_cast<std::size_t>(k)].push_back(scalar_constant<S>(1.0, vars));
        for (const auto& [a, c] : terms_) {
            S m = scalar_constant<S>(c, vars);
            for (int k = 0; k < n_; ++k) {
                auto& t = pw[static_cast<std::size_t>(k)];
                const int e = a[static_cast<std::size_t>(k)];
                while (static_cast<int>(t.size()) <= e) t.push_back(t.back() * z[static_cast<std::size_t>(k)]);
                if (e > 0) m *= t[static_cast<std::size_t>(e)];
            }
            sum += m;
        }
        return sum;
    }

    [[nodiscard]] cplx operator()(const CVector& z) const {
        return evaluate(std::vector<cplx>(z.data(), z.data() + z.size()));
    }

    /// Holomorphic partial derivative in z^k.
    [[nodiscard]] Polynomial derivative(int k) const {
        Polynomial d(n_);
        for (const auto& [a, c] : terms_) {
            const int e = a[static_cast<std::size_t>(k)];
            if (e == 0) continue;
            Exponent b = a;
            b[static_cast<std::size_t>(k)] = e - 1;
            d.add_term(b, c * static_cast<double>(e));
        }
        return d;
    }

    /// p(o + w) as a polynomial in w.
    [[nodiscard]] Polynomial shifted(const CVector& o) const {
        if (o.size() != n_) throw ConfigError("shift point dimension does not match polynomial");
        Polynomial out(n_);
        for (const auto& [a, c] : terms_) {
            // expand prod_k (o_k + w_k)^{a_k}
            std::vector<std::pair<Exponent, cplx>> acc{{Exponent(static_cast<std::size_t>(n_), 0), c}};
            for (int k = 0; k < n_; ++k) {
                const int e = a[static_cast<std::size_t>(k)];
                if (e == 0) continue;
                std::vector<std::pair<Exponent, cplx>> next;
                for (const auto& [b, cb] : acc) {
                    for (int j = 0; j <= e; ++j) {
                        const cplx f = binomial(e, j) * std::pow(o(k), e - j);
                        if (f == cplx(0.0)) continue;
                        Exponent bj = b;
                        bj[static_cast<std::size_t>(k)] += j;
                        next.emplace_back(bj, cb * f);
                    }
                }
                acc = std::move(next);
            }
            for (const auto& [b, cb] : acc) out.add_term(b, cb);
        }
        return out.chopped(1e-300);
    }

    /// Terms of total degree <= d.
    [[nodiscard]] Polynomial truncated(int d) const {
        Polynomial out(n_);
        for (const auto& [a, c] : terms_) {
            if (total_degree(a) <= d) out.add_term(a, c);
        }
        return out;
    }

    /// Drops coefficients with |c| <= threshold.
    [[nodiscard]] Polynomial chopped(double threshold) const {
        Polynomial out(n_);
        for (const auto& [a, c] : terms_) {
            if (std::abs(c) > threshold) out.add_term(a, c);
        }
        return out;
    }

    Polynomial& operator+=(const Polynomial& o) {
        require_same(o);
        for (const auto& [a, c] : o.terms_) add_term(a, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        require_same(o);
        for (const auto& [a, c] : o.terms_) add_term(a, -c);
        return *this;
    }
    Polynomial& operator*=(cplx s) {
        if (s == cplx(0.0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [a, c] : terms_) c *= s;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
    friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_same(b);
        Polynomial out(a.n_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e = ea;
                for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

    [[nodiscard]] std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        os.precision(6);
        bool first = true;
        for (const auto& [a, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
            for (int k = 0; k < n_; ++k) {
                const int e = a[static_cast<std::size_t>(k)];
                if (e == 0) continue;
                os << " z" << (k + 1);
                if (e > 1) os << "^" << e;
            }
        }
        return os.str();
    }

private:
    void require_same(const Polynomial& o) const {
        if (o.n_ != n_) throw ConfigError("polynomials in different variable counts");
    }

    int n_;
    std::map<Exponent, cplx> terms_;
};

/// Polynomial with Gaussian coefficients on every monomial of degree <= d,
/// scaled by 1/sqrt(count). Nonconstant for d >= 1.
inline Polynomial random_polynomial(int n, int d, std::uint64_t seed) {
    if (d < 1) throw ConfigError("random polynomial degree must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto mons = monomials_up_to(n, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(mons.size()));
    Polynomial p(n);
    for (const auto& a : mons) p.add_term(a, scale * cplx(gauss(rng), gauss(rng)));
    return p;
}

// --- test functions ---------------------------------------------------------

struct FunctionSpec {
    std::string name;
    int n = 1;
    ParamMap params;
    // explicit terms for the "polynomial" entry
    std::vector<std::pair<Exponent, cplx>> terms;
};

/// Holomorphic function on C^n: an exact polynomial, or a transcendental
/// catalog entry with a declared growth class.
struct HolomorphicTestFunction {
    std::string name;
    int n = 1;
    std::optional<Polynomial> poly;
    std::function<cplx(const CVector&)> eval;
    std::function<Jet(const std::vector<Jet>&)> jet;
    // transcendental entries only
    double declared_degree = std::numeric_limits<double>::quiet_NaN();
    std::string growth_class;
    std::function<int(const CVector&)> order_at;
    std::function<Polynomial(const CVector&, int)> taylor_at;

    [[nodiscard]] cplx operator()(const CVector& z) const { return eval(z); }
    [[nodiscard]] bool is_polynomial() const { return poly.has_value(); }
};

inline HolomorphicTestFunction from_polynomial(std::string name, Polynomial p) {
    HolomorphicTestFunction f;
    f.name = std::move(name);
    f.n = p.n();
    auto shared = std::make_shared<const Polynomial>(p);
    f.eval = [shared](const CVector& z) { return (*shared)(z); };
    f.jet = [shared](const std::vector<Jet>& z) { return shared->evaluate(z); };
    f.poly = std::move(p);
    return f;
}

inline const std::vector<CatalogEntryInfo>& function_catalog() {
    static const std::vector<CatalogEntryInfo> entries = {
        {"monomial", "e1, e2, e3 (exponents), c=1", "c z1^e1 z2^e2 z3^e3"},
        {"linear", "k=1, a=0", "z_k - a"},
        {"one-plus-z", "(none)", "1 + z1"},
        {"z1-plus-z1-cubed", "(none)", "z1 + z1^3"},
        {"z1-squared-z2", "(none)", "z1^2 z2, n >= 2"},
        {"z1-plus-z2-fifth", "(none)", "z1 + z2^5, n >= 2"},
        {"z1z2", "(none)", "z1 z2, n >= 2"},
        {"shifted-square", "a=0.5", "(z1 - a)^2"},
        {"z1-squared-plus-one", "(none)", "z1^2 + 1"},
        {"random-poly", "degree=3, seed=1", "Gaussian coefficients on all monomials of degree <= degree"},
        {"polynomial", "terms: [[exponents], re, im]", "explicit coefficient list"},
        {"exp-z1", "(none)", "exp(z1), transcendental, not of polynomial growth"},
        {"exp-z1-minus-one", "(none)", "exp(z1) - 1, transcendental, simple zero at 0"},
    };
    return entries;
}

namespace detail {

inline HolomorphicTestFunction exp_entry(int n, bool minus_one) {
    HolomorphicTestFunction f;
    f.name = minus_one ? "exp-z1-minus-one" : "exp-z1";
    f.n = n;
    const double shift = minus_one ? 1.0 : 0.0;
    f.eval = [shift](const CVector& z) { return std::exp(z(0)) - shift; };
    f.jet = [shift](const std::vector<Jet>& z) { return exp(z[0]) - shift; };
    f.declared_degree = std::numeric_limits<double>::infinity();
    f.growth_class = "exponential";
    f.taylor_at = [n, shift](const CVector& o, int d) {
        Polynomial p(n);
        const cplx e = std::exp(o(0));
        double fact = 1.0;
        for (int k = 0; k <= d; ++k) {
            if (k > 0) fact *= k;
            Exponent a(static_cast<std::size_t>(n), 0);
            a[0] = k;
            p.add_term(a, e / fact - (k == 0 ? shift : 0.0));
        }
        return p.chopped(1e-15);
    };
    f.order_at = [shift](const CVector& o) {
        const cplx v = std::exp(o(0)) - shift;
        return std::abs(v) < 1e-14 ? 1 : 0;
    };
    return f;
}

}  // namespace detail

inline HolomorphicTestFunction make_function(const FunctionSpec& spec) {
    const int n = spec.n;
    if (n < 1) throw ConfigError("function dimension must be at least 1");
    const auto& p = spec.params;
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : p) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) throw ConfigError("unknown parameter '" + k + "' for function '" + spec.name + "'");
        }
    };
    auto need = [&](int m) {
        if (n < m) throw ConfigError("function '" + spec.name + "' needs n >= " + std::to_string(m));
    };
    auto e = [&](std::initializer_list<int> v) {
        Exponent a(static_cast<std::size_t>(n), 0);
        std::size_t k = 0;
        for (int x : v) a[k++] = x;
        return a;
    };
    const auto& nm = spec.name;
    Polynomial poly(n);
    if (nm == "monomial") {
        reject_unknown({"e1", "e2", "e3", "c"});
        Exponent a(static_cast<std::size_t>(n), 0);
        for (int k = 0; k < 3; ++k) {
            const double v = param_or(p, "e" + std::to_string(k + 1), 0.0);
            if (v != std::floor(v) || v < 0) throw ConfigError("monomial exponents must be nonnegative integers");
            if (v > 0 && k >= n) throw ConfigError("monomial exponent for a missing variable");
            if (k < n) a[static_cast<std::size_t>(k)] = static_cast<int>(v);
        }
        poly.add_term(a, param_or(p, "c", 1.0));
        if (poly.is_zero()) throw ConfigError("monomial coefficient must be nonzero");
    } else if (nm == "linear") {
        reject_unknown({"k", "a"});
        const int k = static_cast<int>(param_or(p, "k", 1.0));
        if (k < 1 || k > n) throw ConfigError("linear: variable index out of range");
        poly = Polynomial::coordinate(n, k - 1) - Polynomial::constant(n, param_or(p, "a", 0.0));
    } else if (nm == "one-plus-z") {
        reject_unknown({});
        poly = Polynomial::constant(n, 1.0) + Polynomial::coordinate(n, 0);
    } else if (nm == "z1-plus-z1-cubed") {
        reject_unknown({});
        poly.add_term(e({1}), 1.0);
        poly.add_term(e({3}), 1.0);
    } else if (nm == "z1-squared-z2") {
        reject_unknown({});
        need(2);
        poly.add_term(e({2, 1}), 1.0);
    } else if (nm == "z1-plus-z2-fifth") {
        reject_unknown({});
        need(2);
        poly.add_term(e({1}), 1.0);
        poly.add_term(e({0, 5}), 1.0);
    } else if (nm == "z1z2") {
        reject_unknown({});
        need(2);
        poly.add_term(e({1, 1}), 1.0);
    } else if (nm == "shifted-square") {
        reject_unknown({"a"});
        const Polynomial l = Polynomial::coordinate(n, 0) - Polynomial::constant(n, param_or(p, "a", 0.5));
        poly = l * l;
    } else if (nm == "z1-squared-plus-one") {
        reject_unknown({});
        poly.add_term(e({2}), 1.0);
        poly.add_term(e({}), 1.0);
    } else if (nm == "random-poly") {
        reject_unknown({"degree", "seed"});
        poly = random_polynomial(n, static_cast<int>(param_or(p, "degree", 3.0)),
                                 static_cast<std::uint64_t>(param_or(p, "seed", 1.0)));
    } else if (nm == "polynomial") {
        reject_unknown({});
        for (const auto& [a, c] : spec.terms) poly.add_term(a, c);
        if (poly.is_zero()) throw ConfigError("explicit polynomial has no nonzero terms");
    } else if (nm == "exp-z1" || nm == "exp-z1-minus-one") {
        reject_unknown({});
        return detail::exp_entry(n, nm == "exp-z1-minus-one");
    } else {
        throw ConfigError("unknown function '" + nm + "'");
    }
    return from_polynomial(nm, std::move(poly));
}

/// The fixed polynomial entries available in dimension n.
inline std::vector<HolomorphicTestFunction> polynomial_catalog(int n) {
    std::vector<FunctionSpec> specs = {
        {"monomial", n, {{"e1", 2}}, {}}, {"linear", n, {}, {}}, {"one-plus-z", n, {}, {}},
        {"z1-plus-z1-cubed", n, {}, {}},  {"shifted-square", n, {}, {}}, {"z1-squared-plus-one", n, {}, {}},
        {"random-poly", n, {{"degree", 3}, {"seed", 7}}, {}},
    };
    if (n >= 2) {
        specs.push_back({"z1-squared-z2", n, {}, {}});
        specs.push_back({"z1-plus-z2-fifth", n, {}, {}});
        specs.push_back({"z1z2", n, {}, {}});
    }
    std::vector<HolomorphicTestFunction> out;
    for (const auto& s : specs) out.push_back(make_function(s));
    return out;
}

// --- scalar fields built from test functions --------------------------------

inline ScalarField modulus_field(const HolomorphicTestFunction& f) {
    ScalarField u;
    u.label = "|" + f.name + "|";
    auto ev = f.eval;
    auto jt = f.jet;
    u.value = [ev](const CVector& z) { return std::abs(ev(z)); };
    if (jt) u.jet = [jt](const std::vector<Jet>& z) { return sqrt(jt(z) * conj(jt(z))); };
    return u;
}

/// sum_i |f_i|^2 + eps.
inline ScalarField sum_squares_field(const std::vector<HolomorphicTestFunction>& fs, double eps = 0.0) {
    if (fs.empty()) throw ConfigError("sum of squares needs at least one function");
    ScalarField u;
    u.label = "sum|f|^2";
    std::vector<std::function<cplx(const CVector&)>> ev;
    std::vector<std::function<Jet(const std::vector<Jet>&)>> jt;
    bool all_jets = true;
    for (const auto& f : fs) {
        ev.push_back(f.eval);
        jt.push_back(f.jet);
        all_jets = all_jets && static_cast<bool>(f.jet);
    }
    u.value = [ev, eps](const CVector& z) {
        double s = eps;
        for (const auto& e : ev) s += std::norm(e(z));
        return s;
    };
    if (all_jets) {
        u.jet = [jt, eps](const std::vector<Jet>& z) {
            Jet s(cplx(eps), z.front().vars());
            for (const auto& j : jt) {
                const Jet v = j(z);
                s += v * conj(v);
            }
            return s;
        };
    }
    return u;
}

/// log(sum_i |f_i|^2 + eps): plurisubharmonic.
inline ScalarField log_sum_squares_field(const std::vector<HolomorphicTestFunction>& fs, double eps) {
    ScalarField s = sum_squares_field(fs, eps);
    ScalarField u;
    u.label = "log(" + s.label + (eps > 0 ? " + eps" : "") + ")";
    auto v = s.value;
    auto j = s.jet;
    u.value = [v](const CVector& z) { return std::log(v(z)); };
    if (j) u.jet = [j](const std::vector<Jet>& z) { return log(j(z)); };
    return u;
}

}  // namespace threecircle
