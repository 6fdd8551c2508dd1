#include "threecircle/comparison/h_profile.hpp"
#include "threecircle/geodesic/exp_sphere.hpp"
#include "threecircle/geodesic/geodesic.hpp"
#include "threecircle/geodesic/normal_coordinates.hpp"
#include "threecircle/geodesic/taylor.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>

using namespace threecircle;
using tc_test::pt;
using tc_test::Rng;

namespace {

HermitianChart chart(const std::string& name, int n, ParamMap p = {}) { return make_metric({name, n, std::move(p)}); }

CVector unit_direction(Rng& rng, const HermitianChart& c, const CVector& p) {
    return to_complex(rng.unit_real(c, p));
}

// |F(h) - F(-h)| / 2h along the quadratic approximation of the flow, with one
// Richardson level
CVector third_derivative_oracle(const HermitianChart& w, const CVector& X, const CVector& c2) {
    auto F = [&](double t) {
        const CVector z = X * t + c2 * (0.5 * t * t);
        return geodesic_acceleration(w.derivatives(z, 1), X + c2 * t);
    };
    auto D = [&](double h) { return CVector((F(h) - F(-h)) / (2 * h)); };
    const double h = 1e-3;
    return (4.0 * D(h / 2) - D(h)) / 3.0;
}

}  // namespace

TEST(GeodesicEquation, MatchesLeviCivitaPointwise) {
    Rng rng(21);
    for (const auto& spec : tc_test::catalog_specs()) {
        const auto c = make_metric(spec);
        for (int t = 0; t < 5; ++t) {
            const CVector p = rng.chart_point(c);
            const RVector v = rng.unit_real(c, p) * rng.uniform(0.5, 2.0);
            const auto md = c.derivatives(p, 1);
            const RVector chern = to_real(geodesic_acceleration(md, to_complex(v)));
            const RVector lc = -levi_civita(md).apply(v, v);
            EXPECT_LT((chern - lc).norm(), 1e-11 * std::max(1.0, lc.norm())) << c.label();
        }
    }
}

TEST(Geodesic, FlatStraightLine) {
    const auto c = chart("flat", 2);
    const CVector X = pt({1.0 / std::sqrt(2.0), 0.0});
    const auto path = integrate_geodesic(c, pt({0.0, 0.0}), X, 3.0);
    EXPECT_FALSE(path.exited);
    for (double t : {0.5, 1.7, 3.0}) {
        EXPECT_LT((path.z(t) - pt({t / std::sqrt(2.0), 0.0})).norm(), 1e-12);
    }
    EXPECT_LT(path.speed_drift, 1e-14);
}

TEST(Geodesic, RejectsNonUnitDirection) {
    const auto c = chart("flat", 1);
    EXPECT_THROW(integrate_geodesic(c, pt({0.0}), pt({1.0}), 1.0), ConfigError);
}

TEST(Geodesic, SpeedConservedAndLeviCivitaCrossCheck) {
    Rng rng(22);
    ToleranceBundle tol;
    for (const auto& spec : tc_test::catalog_specs()) {
        const auto c = make_metric(spec);
        const CVector p = rng.chart_point(c);
        const CVector X = unit_direction(rng, c, p);
        GeodesicOptions opts;
        opts.cross_check = true;
        const double T = std::isfinite(c.injectivity_floor()) ? 0.5 * c.injectivity_floor() : 1.5;
        const auto path = integrate_geodesic(c, p, X, T, opts);
        EXPECT_LE(path.speed_drift, 10 * tol.ode_rel) << c.label();
        EXPECT_LT(path.cross_check_deviation, 1e-8) << c.label();
    }
}

TEST(Geodesic, RadialLineIsTotallyGeodesic) {
    Rng rng(23);
    for (const auto& p : std::vector<ParamMap>{{}, {{"a", 0.5}, {"b", 0.3}}}) {
        const auto c = chart("radial-conformal", 2, p);
        for (int t = 0; t < 4; ++t) {
            const CVector o = CVector::Zero(2);
            const CVector X = unit_direction(rng, c, o);
            const auto path = integrate_geodesic(c, o, X, 1.0);
            for (double s : {0.3, 0.7, 1.0}) {
                const CVector z = path.z(s);
                const cplx coef = X.dot(z) / X.squaredNorm();  // conj(X) . z
                EXPECT_LT((z - coef * X).norm(), 1e-8);
                EXPECT_LT(std::abs(std::arg(coef)), 1e-8);
            }
        }
    }
}

TEST(Geodesic, PoincareDiscRadius) {
    const auto c = chart("poincare-ball", 1);
    const auto path = integrate_geodesic(c, pt({0.0}), pt({cplx(0.0, 1.0 / std::sqrt(2.0))}), 4.0);
    for (double r : {0.5, 2.0, 4.0}) EXPECT_NEAR(path.z(r).norm(), std::tanh(r / std::sqrt(2.0)), 1e-9);
}

TEST(Geodesic, DomainExitIsFlagged) {
    auto c = metrics::make_chart(
        1, ChartDomain{ChartDomain::Shape::Ball, 0.5}, [](const auto& z) { return metrics::flat(z); }, "flat-disc",
        0.5);
    const auto path = integrate_geodesic(c, pt({0.0}), pt({1.0 / std::sqrt(2.0)}), 2.0);
    EXPECT_TRUE(path.exited);
    EXPECT_FALSE(path.exit_reason.empty());
    EXPECT_LT(path.t_reached, 2.0);
    EXPECT_GT(path.t_reached, 0.6);  // the boundary sits at r = 0.5 sqrt 2
    EXPECT_LE(path.end().norm(), 0.5);
}

TEST(ExpSphere, FlatLineCircleRadius) {
    const auto c = chart("flat", 1);
    const auto dirs = unit_directions(c, pt({0.0}), 100, 3);
    const auto S = exp_sphere(c, pt({0.0}), {1.0}, dirs);
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        ASSERT_TRUE(S.valid[0][d]);
        EXPECT_NEAR(std::abs(S.points[0][d](0)), 1.0 / std::sqrt(2.0), 1e-12);
    }
}

TEST(ExpSphere, DirectionsAreUnitAndSeeded) {
    const auto c = chart("poly-perturbed", 2, {{"eps", 0.1}, {"seed", 3}});
    const CVector o = pt({0.1, cplx(0.0, 0.2)});
    const auto a = unit_directions(c, o, 64, 9);
    const auto b = unit_directions(c, o, 64, 9);
    const auto other = unit_directions(c, o, 64, 10);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_NEAR(real_pairing(c.g(o), a[k], a[k]), 1.0, 1e-12);
        EXPECT_EQ(a[k], b[k]);
    }
    EXPECT_GT((a[0] - other[0]).norm(), 1e-6);
}

TEST(ExpSphere, PoincareEndpointsStayInside) {
    const auto c = chart("poincare-ball", 1);
    const auto dirs = unit_directions(c, pt({0.0}), 16, 1);
    const auto S = exp_sphere(c, pt({0.0}), {2.0, 6.0, 12.0}, dirs);
    double prev = 0.0;
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            ASSERT_TRUE(S.valid[r][d]);
            const double rho = S.points[r][d].norm();
            EXPECT_LT(rho, 1.0);
            EXPECT_GT(rho, prev);
            EXPECT_NEAR(rho, std::tanh(S.radii[r] / std::sqrt(2.0)), 1e-7);
        }
        prev = S.points[r][0].norm();
    }
    EXPECT_GT(prev, 1.0 - 1e-4);
}

TEST(ExpSphere, RadialConformalArclength) {
    const double a = 0.5, b = 0.3;
    const auto c = chart("radial-conformal", 2, {{"a", a}, {"b", b}});
    const CVector o = CVector::Zero(2);
    const auto dirs = unit_directions(c, o, 12, 4);
    const std::vector<double> radii = {0.25, 0.5, 1.0};
    const auto S = exp_sphere(c, o, radii, dirs);
    auto arclength = [&](double rho) {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double s) { return std::sqrt(2.0) * std::exp(0.5 * (a * s * s + b * s * s * s * s)); }, 0.0, rho, 15,
            1e-14);
    };
    for (std::size_t r = 0; r < radii.size(); ++r) {
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            const double rho = S.points[r][d].norm();
            EXPECT_NEAR(arclength(rho), radii[r], 1e-6);
        }
    }
}

TEST(ExpSphere, EveryDirectionExitingIsAnError) {
    auto c = metrics::make_chart(
        1, ChartDomain{ChartDomain::Shape::Ball, 0.5}, [](const auto& z) { return metrics::flat(z); }, "flat-disc",
        0.5);
    const auto dirs = unit_directions(c, pt({0.0}), 8, 1);
    EXPECT_THROW(exp_sphere(c, pt({0.0}), {0.3, 2.0}, dirs), DomainError);
    const auto S = exp_sphere(c, pt({0.0}), {0.3}, dirs);
    EXPECT_EQ(S.valid_count(0), dirs.size());
    EXPECT_FALSE(S.beyond_injectivity_floor);
}

TEST(ExpSphere, DeterministicAcrossRuns) {
    const auto c = chart("radial-conformal", 2);
    const CVector o = pt({0.2, 0.1});
    const auto dirs = unit_directions(c, o, 32, 5);
    const auto A = exp_sphere(c, o, {0.2, 0.4}, dirs);
    const auto B = exp_sphere(c, o, {0.2, 0.4}, dirs);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t d = 0; d < dirs.size(); ++d) EXPECT_EQ(A.points[r][d], B.points[r][d]);
}

TEST(NormalCoordinates, FlatIsIdentityMap) {
    const auto c = chart("flat", 2);
    const auto map = normal_holomorphic_coordinates(c, pt({0.3, -0.2}));
    EXPECT_EQ(map.Q.max_abs(), 0.0);
    for (auto v : map.C) EXPECT_EQ(v, cplx(0.0));
    // unitary frame for g = delta is the identity
    EXPECT_LT((map.E - CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(NormalCoordinates, KahlerQuadraticTermIsMinusGamma) {
    const auto c = chart("poincare-ball", 2);
    const CVector o = pt({cplx(0.2, 0.1), -0.3});
    const auto map = normal_holomorphic_coordinates(c, o);
    const auto gamma = chern_christoffels(c, o);
    // E Q(w, w) = -Gamma(E w, E w)
    Rng rng(31);
    for (int t = 0; t < 5; ++t) {
        const CVector w = rng.gaussian_vector(2);
        const CVector lhs = map.E * map.Q.contract(w, w);
        const CVector rhs = -gamma.contract(map.E * w, map.E * w);
        EXPECT_LT((lhs - rhs).norm(), 1e-12);
    }
}

TEST(NormalCoordinates, PullbackInvariants) {
    Rng rng(32);
    for (const auto& spec : tc_test::catalog_specs()) {
        const auto c = make_metric(spec);
        const CVector o = rng.chart_point(c);
        const auto map = normal_holomorphic_coordinates(c, o);
        const auto w = pullback_chart(c, map);
        std::vector<CVector> dirs;
        for (int k = 0; k < 20; ++k) dirs.push_back(rng.gaussian_vector(c.n()));
        const auto res = normalization_residuals(w, dirs);
        EXPECT_LT(res.metric, 1e-12) << c.label();
        EXPECT_LT(res.christoffel, 1e-8) << c.label();
        EXPECT_LT(res.derivative, 1e-6) << c.label();
        // Jacobian at o is the frame
        EXPECT_LT((map.jacobian(CVector::Zero(c.n())) - map.E).norm(), 1e-15);
        const CVector wp = rng.gaussian_vector(c.n()) * 0.05;
        EXPECT_LT((map.from_chart(map.to_chart(wp)) - wp).norm(), 1e-13) << c.label();
        EXPECT_GT(w.domain().radius, 0.0);
    }
}

TEST(NormalCoordinates, NonKahlerConformalDerivativeCondition) {
    Rng rng(33);
    const auto c = chart("radial-conformal", 2, {{"a", 0.5}, {"b", 0.3}});
    const auto map = normal_holomorphic_coordinates(c, pt({0.5, 0.0}));
    EXPECT_GT(torsion(c, pt({0.5, 0.0})).max_abs(), 0.1);
    const auto w = pullback_chart(c, map);
    std::vector<CVector> dirs;
    for (int k = 0; k < 20; ++k) dirs.push_back(rng.gaussian_vector(2));
    EXPECT_LT(normalization_residuals(w, dirs).derivative, 1e-6);
    // without the cubic term the condition fails
    auto quad_only = map;
    std::fill(quad_only.C.begin(), quad_only.C.end(), cplx(0.0));
    EXPECT_GT(normalization_residuals(pullback_chart(c, quad_only), dirs).derivative, 1e-3);
}

TEST(NormalCoordinates, RejectsNonUnitaryFrame) {
    const auto c = chart("radial-conformal", 2);
    const CMatrix bad = 2.0 * CMatrix::Identity(2, 2);
    EXPECT_THROW(normal_holomorphic_coordinates(c, pt({0.1, 0.1}), &bad), ConfigError);
}

TEST(GeodesicTaylor, FlatIsLinear) {
    const auto c = chart("flat", 2);
    const CVector X = pt({0.5, cplx(0.0, 0.5)});
    const auto T = geodesic_taylor(c, pt({0.0, 0.0}), X);
    EXPECT_EQ(T.c2.norm(), 0.0);
    EXPECT_EQ(T.c3.norm(), 0.0);
}

TEST(GeodesicTaylor, RequiresNormalCoordinates) {
    const auto c = chart("radial-conformal", 2);
    EXPECT_THROW(geodesic_taylor(c, pt({0.5, 0.0}), pt({0.5, 0.0})), ConfigError);
}

TEST(GeodesicTaylor, KahlerCubicTermIsCurvature) {
    Rng rng(34);
    const auto c = chart("poincare-ball", 2);
    const CVector o = pt({0.3, cplx(0.0, 0.2)});
    const auto map = normal_holomorphic_coordinates(c, o);
    const auto w = pullback_chart(c, map);
    const CVector zero = CVector::Zero(2);
    const auto R = chern_curvature(w, zero);
    for (int t = 0; t < 5; ++t) {
        const CVector X = unit_direction(rng, w, zero);
        const auto T = geodesic_taylor(w, zero, X);
        EXPECT_LT(T.c2.norm(), 1e-10);
        CVector expect = CVector::Zero(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) expect(i) += R(j, i, k, l) * X(j) * X(k) * std::conj(X(l));
        EXPECT_LT((T.c3 - expect).norm(), 1e-9);
    }
}

TEST(GeodesicTaylor, CoefficientsMatchDifferentiatedFlow) {
    Rng rng(35);
    for (const auto& spec : tc_test::catalog_specs()) {
        const auto c = make_metric(spec);
        const CVector o = rng.chart_point(c);
        const auto map = normal_holomorphic_coordinates(c, o);
        const auto w = pullback_chart(c, map);
        const CVector zero = CVector::Zero(c.n());
        for (int t = 0; t < 3; ++t) {
            const CVector X = unit_direction(rng, w, zero);
            const auto T = geodesic_taylor(w, zero, X);
            const CVector a0 = geodesic_acceleration(w.derivatives(zero, 1), X);
            EXPECT_LT((T.c2 - a0).norm(), 1e-12) << c.label();
            const CVector c3 = third_derivative_oracle(w, X, T.c2);
            EXPECT_LT((T.c3 - c3).norm(), 1e-7 * std::max(1.0, c3.norm())) << c.label();
        }
    }
}

namespace {

// worst pairwise log2 ratio of |z_int - z_taylor| over successive halvings
double taylor_order(const HermitianChart& c, const CVector& o, const CVector& X, const std::vector<double>& ts,
                    const ToleranceBundle& tol) {
    const auto nt = geodesic_taylor_normal(c, o, X);
    GeodesicOptions opts;
    opts.tol = tol;
    opts.checkpoints = ts;
    const auto path = integrate_geodesic(c, o, X, ts.front(), opts);
    double worst = 10.0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double a = (path.z(ts[k]) - nt(ts[k])).norm(), b = (path.z(ts[k + 1]) - nt(ts[k + 1])).norm();
        if (a < 1e-13) return worst;  // exact (flat)
        worst = std::min(worst, std::log2(a / b));
    }
    return worst;
}

}  // namespace

TEST(GeodesicTaylor, ConvergenceOrderAtCatalogPoints) {
    for (const auto& spec : tc_test::catalog_specs()) {
        const auto c = make_metric(spec);
        for (double shift : {0.0, 0.5}) {
            CVector o = CVector::Zero(c.n());
            o(0) = shift;
            for (const auto& X : unit_directions(c, o, 10, 1)) {
                EXPECT_GE(taylor_order(c, o, X, {0.1, 0.05, 0.025}, {}), 3.7) << c.label() << " shift " << shift;
            }
        }
    }
}

TEST(GeodesicTaylor, AsymptoticOrderAtRandomPoints) {
    Rng rng(36);
    ToleranceBundle tight;
    tight.ode_rel = 1e-13;
    tight.ode_abs = 1e-15;
    for (const auto& spec : tc_test::catalog_specs()) {
        const auto c = make_metric(spec);
        const CVector o = rng.chart_point(c);
        for (int d = 0; d < 10; ++d) {
            const CVector X = unit_direction(rng, c, o);
            EXPECT_GE(taylor_order(c, o, X, {0.025, 0.0125, 0.00625}, tight), 3.7) << c.label();
        }
    }
}

TEST(GeodesicTaylor, ShiftedConformalOrigin) {
    Rng rng(37);
    const auto c = chart("radial-conformal", 2);
    const CVector o = pt({0.5, 0.0});
    for (int d = 0; d < 4; ++d) {
        const CVector X = unit_direction(rng, c, o);
        const auto nt = geodesic_taylor_normal(c, o, X);
        const auto path = integrate_geodesic(c, o, X, 0.1);
        const double e1 = (path.z(0.1) - nt(0.1)).norm();
        const double e2 = (path.z(0.05) - nt(0.05)).norm();
        EXPECT_GE(std::log2(e1 / e2), 3.7);
        // the quadratic torsion term is present here
        EXPECT_GT(nt.w_taylor.c2.norm(), 1e-3);
    }
}

TEST(HLowerProfile, FlatIsZero) {
    const auto c = chart("flat", 2);
    const CVector o = CVector::Zero(2);
    const auto prof = h_lower_profile(c, o, {0.5, 1.0}, unit_directions(c, o, 32, 1));
    for (double v : prof.envelope) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(prof.radii.front(), 0.0);
}

TEST(HLowerProfile, PoincareDiscConstant) {
    const auto c = chart("poincare-ball", 1);
    const CVector o = pt({0.0});
    const auto prof = h_lower_profile(c, o, {0.5, 1.0, 2.0}, unit_directions(c, o, 16, 1));
    for (std::size_t k = 0; k < prof.radii.size(); ++k) {
        EXPECT_NEAR(prof.sampled[k], -2.0, 1e-4);
        EXPECT_NEAR(prof.envelope[k], -2.0, 1e-4);
    }
}

TEST(HLowerProfile, ConformalAtOrigin) {
    const auto c = chart("radial-conformal", 2);
    const CVector o = CVector::Zero(2);
    const auto dirs = unit_directions(c, o, 32, 2);
    const auto prof = h_lower_profile(c, o, {0.2, 0.4}, dirs);
    EXPECT_NEAR(prof.sampled[0], -1.0, 1e-12);
    EXPECT_NEAR(converse_functional(c, o, dirs[0]), -1.0, 1e-12);
    for (std::size_t k = 1; k < prof.envelope.size(); ++k) EXPECT_LE(prof.envelope[k], prof.envelope[k - 1]);
    for (std::size_t k = 0; k < prof.envelope.size(); ++k) EXPECT_LE(prof.envelope[k], prof.sampled[k]);
    EXPECT_LE(prof.lower_bound(0.3), prof.envelope[1]);
}
