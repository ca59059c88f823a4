#include "geoflow/curvature.hpp"
#include "geoflow/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace geoflow;

namespace {

constexpr double pi = std::numbers::pi;

Field sin1(const Grid& g) { return Field::sample(g, [](double x) { return std::sin(x); }); }
Field cos1(const Grid& g) { return Field::sample(g, [](double x) { return std::cos(x); }); }

CentralVec rvec(const Grid& g, CounterRng& rng, bool center) {
    return CentralVec(random_trig(g, rng), center ? rng.uniform(-1, 1) : 0.0);
}

double rel(double err, double scale) { return std::abs(err) / std::max(1.0, std::abs(scale)); }

const std::vector<InertiaSpec>& specs() {
    static const std::vector<InertiaSpec> s = {InertiaSpec::hk(0), InertiaSpec::hk(1), InertiaSpec::hk(2),
                                               InertiaSpec::ga(0.5), InertiaSpec::hk(0).with_center(),
                                               InertiaSpec::hk(1).with_center()};
    return s;
}

} // namespace

TEST(Sectional, BurgersSinCos) {
    const Grid g(64);
    EXPECT_NEAR(sectional(InertiaSpec::hk(0), sin1(g), cos1(g)), 2.0 / pi, 1e-10);
}

TEST(Sectional, BurgersNonNegative) {
    const Grid g(64);
    CounterRng rng(61);
    for (int i = 0; i < 50; ++i)
        EXPECT_GE(sectional(InertiaSpec::hk(0), random_trig(g, rng), random_trig(g, rng)), -1e-12);
}

TEST(Sectional, ScaleInvariantInThePlane) {
    const Grid g(64);
    CounterRng rng(62);
    const InertiaSpec h1 = InertiaSpec::hk(1);
    const Field x = random_trig(g, rng), y = random_trig(g, rng);
    const double k = sectional(h1, x, y);
    EXPECT_NEAR(sectional(h1, 2.0 * x + y, -0.5 * y), k, 1e-9 * std::max(1.0, std::abs(k)));
}

TEST(Sectional, DegeneratePlaneThrows) {
    const Grid g(64);
    const Field s = sin1(g);
    EXPECT_THROW(sectional(InertiaSpec::hk(0), s, 3.0 * s), InvalidArgument);
    EXPECT_THROW(sectional(InertiaSpec::hk(0), s, Field(g)), InvalidArgument);
}

TEST(Quadruple, OperatorFormAgrees) {
    const Grid g(64);
    CounterRng rng(63);
    for (const auto& sp : specs()) {
        for (int i = 0; i < 5; ++i) {
            const bool c = sp.extended();
            const CentralVec X = rvec(g, rng, c), Y = rvec(g, rng, c), Z = rvec(g, rng, c), U = rvec(g, rng, c);
            const double q = curvature_quadruple(sp, X, Y, Z, U);
            EXPECT_LT(rel(4.0 * inner(sp, curvature_operator(sp, X, Y, Z), U) - q, q), 1e-9) << sp.name();
        }
    }
}

TEST(Quadruple, SectionalNumeratorAgrees) {
    const Grid g(64);
    CounterRng rng(64);
    for (const auto& sp : specs()) {
        const bool c = sp.extended();
        const CentralVec X = rvec(g, rng, c), Y = rvec(g, rng, c);
        const double q = curvature_quadruple(sp, X, Y, X, Y);
        EXPECT_LT(rel(curvature_sectional_numerator(sp, X, Y) - q, q), 1e-9) << sp.name();
    }
}

TEST(Quadruple, Symmetries) {
    const Grid g(64);
    CounterRng rng(65);
    for (const auto& sp : specs()) {
        const bool c = sp.extended();
        const CentralVec X = rvec(g, rng, c), Y = rvec(g, rng, c), Z = rvec(g, rng, c), U = rvec(g, rng, c);
        const double q = curvature_quadruple(sp, X, Y, Z, U);
        EXPECT_LT(rel(q + curvature_quadruple(sp, Y, X, Z, U), q), 1e-9) << sp.name();
        EXPECT_LT(rel(q + curvature_quadruple(sp, X, Y, U, Z), q), 1e-9) << sp.name();
        EXPECT_LT(rel(q - curvature_quadruple(sp, Z, U, X, Y), q), 1e-9) << sp.name();
        const CentralVec b = curvature_operator(sp, X, Y, Z) + curvature_operator(sp, Y, Z, X) +
                             curvature_operator(sp, Z, X, Y);
        EXPECT_LT(b.max_abs(), 1e-9) << sp.name();
    }
}

TEST(Virasoro, ClosedFormMatchesQuadruple) {
    const Grid g(64);
    CounterRng rng(66);
    const InertiaSpec vir = InertiaSpec::hk(0).with_center();
    for (int i = 0; i < 30; ++i) {
        const Field x1 = random_trig(g, rng), x2 = random_trig(g, rng);
        const double a1 = rng.uniform(-2, 2), a2 = rng.uniform(-2, 2);
        const double q = curvature_quadruple(vir, {x1, a1}, {x2, a2}, {x1, a1}, {x2, a2});
        EXPECT_LT(rel(virasoro_curvature_form(x1, a1, x2, a2) - q, q), 1e-8);
    }
}

TEST(Virasoro, SinCosReferenceIsTheRawQuadruple) {
    // -pi (8 + a1^2 + a2^2 - 3 pi) is gamma(4 R(X1,X2) X1, X2) itself, not a normalised sectional value.
    const Grid g(64);
    const InertiaSpec vir = InertiaSpec::hk(0).with_center();
    const Field s = sin1(g), c = cos1(g);
    for (double a1 : {0.0, 0.5, -1.5})
        for (double a2 : {0.0, 1.0, 2.0}) {
            const double ref = -pi * (8.0 + a1 * a1 + a2 * a2 - 3.0 * pi);
            EXPECT_NEAR(curvature_quadruple(vir, {s, a1}, {c, a2}, {s, a1}, {c, a2}), ref, 1e-9);
            EXPECT_NEAR(virasoro_curvature_form(s, a1, c, a2), ref, 1e-9);
        }
}

TEST(Virasoro, CentralPartsEnterOnlyWhenExtended) {
    const Grid g(64);
    CounterRng rng(67);
    const InertiaSpec h0 = InertiaSpec::hk(0);
    const Field x = random_trig(g, rng), y = random_trig(g, rng);
    const double plain = curvature_quadruple(h0, x, y, x, y);
    EXPECT_NEAR(curvature_quadruple(h0.with_center(), {x, 0.0}, {y, 0.0}, {x, 0.0}, {y, 0.0}),
                plain + 3.0 * std::pow(gelfand_fuchs(x, y), 2), 1e-9 * std::max(1.0, std::abs(plain)));
}

TEST(Emb, ChristoffelExamples) {
    const Grid g(64);
    const Diffeo id = Diffeo::identity(g);
    const Field s = sin1(g), c = cos1(g);
    // -(sin cos)' = -cos 2x at the identity.
    const Field expect = Field::sample(g, [](double x) { return -std::cos(2 * x); });
    EXPECT_LT((christoffel_emb(id, s, c) - expect).max_abs(), 1e-12);
    EXPECT_LT((christoffel_emb(id, s, c) - christoffel_emb(id, c, s)).max_abs(), 1e-14);
    CounterRng rng(68);
    const Diffeo f = random_diffeo(g, rng);
    const Field h = random_trig(g, rng), k = random_trig(g, rng);
    EXPECT_LT((christoffel_emb(f, h, k) - christoffel_emb(f, k, h)).max_abs(), 1e-13);
    EXPECT_LT((christoffel_emb(f, h, k) * f.jacobian() + deriv(h * k, 1)).max_abs(), 1e-12);
}

TEST(Emb, CurvatureAntisymmetric) {
    const Grid g(64);
    CounterRng rng(69);
    const Diffeo f = random_diffeo(g, rng);
    const Field h = random_trig(g, rng), k = random_trig(g, rng), l = random_trig(g, rng);
    EXPECT_LT((curvature_emb(f, h, k, l) + curvature_emb(f, k, h, l)).max_abs(), 1e-12);
    EXPECT_LT(curvature_emb(f, h, h, l).max_abs(), 1e-12);
}

TEST(Emb, CurvatureMatchesFiniteDifferencedConnection) {
    // R(h,k)l = -dGamma(h)(k,l) + dGamma(k)(h,l) + Gamma(h, Gamma(k,l)) - Gamma(k, Gamma(h,l)),
    // dGamma(v) the directional derivative in f along v by centred differences.
    const Grid g(64);
    CounterRng rng(70);
    const double step = 1e-5;
    for (int i = 0; i < 10; ++i) {
        const Diffeo f = random_diffeo(g, rng);
        const Field h = random_trig(g, rng), k = random_trig(g, rng), l = random_trig(g, rng);
        auto dgamma = [&](const Field& v, const Field& p, const Field& q) {
            const Diffeo fp = Diffeo(f.disp() + step * v);
            const Diffeo fm = Diffeo(f.disp() - step * v);
            return (0.5 / step) * (christoffel_emb(fp, p, q) - christoffel_emb(fm, p, q));
        };
        const Field oracle = -1.0 * dgamma(h, k, l) + dgamma(k, h, l) + christoffel_emb(f, h, christoffel_emb(f, k, l)) -
                             christoffel_emb(f, k, christoffel_emb(f, h, l));
        EXPECT_LT((curvature_emb(f, h, k, l) - oracle).max_abs(), 1e-6);
    }
}

TEST(Emb, GridMismatchThrows) {
    const Grid g(64), g2(32);
    const Diffeo id = Diffeo::identity(g);
    EXPECT_THROW(christoffel_emb(id, sin1(g), sin1(g2)), InvalidArgument);
    EXPECT_THROW(curvature_emb(id, sin1(g), sin1(g), sin1(g2)), InvalidArgument);
}
