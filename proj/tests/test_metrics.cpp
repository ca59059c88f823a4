#include "geoflow/metrics.hpp"
#include "geoflow/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace geoflow;

namespace {

const double pi = std::numbers::pi;

struct Trig : ::testing::Test {
    Grid g{64};
    Field S = Field::sample(g, [](double x) { return std::sin(x); });
    Field C = Field::sample(g, [](double x) { return std::cos(x); });
};

std::vector<InertiaSpec> all_specs() {
    return {InertiaSpec::hk(0), InertiaSpec::hk(1), InertiaSpec::hk(2), InertiaSpec::ga(0.5),
            InertiaSpec::hk(0).with_center(), InertiaSpec::hk(1).with_center(), InertiaSpec::ga(2.0).with_center()};
}

CentralVec rvec(const Grid& g, CounterRng& rng, bool central) {
    return {random_trig(g, rng, 4, 1.0, 0.5), central ? rng.uniform(-1, 1) : 0.0};
}

} // namespace

TEST(InertiaSpec, ParseAndName) {
    EXPECT_EQ(InertiaSpec::parse("h2").order(), 2);
    EXPECT_EQ(InertiaSpec::parse("ga").A(), 1.0);
    EXPECT_EQ(InertiaSpec::parse("ga:0.25").A(), 0.25);
    EXPECT_TRUE(InertiaSpec::parse("h0+center").extended());
    EXPECT_EQ(InertiaSpec::parse("h1+center").name(), "h1+center");
    EXPECT_THROW(InertiaSpec::parse("h-1"), InvalidArgument);
    EXPECT_THROW(InertiaSpec::parse("sobolev"), InvalidArgument);
    EXPECT_THROW(InertiaSpec::parse("h1x"), InvalidArgument);
    EXPECT_THROW(InertiaSpec::ga(-1.0), InvalidArgument);
    // G^A with A = 1 has the H^1 symbol.
    EXPECT_DOUBLE_EQ(InertiaSpec::ga(1.0).symbol(3.0), InertiaSpec::hk(1).symbol(3.0));
}

TEST_F(Trig, InnerExamples) {
    EXPECT_NEAR(inner(InertiaSpec::hk(0), S, S), pi, 1e-12);
    EXPECT_NEAR(inner(InertiaSpec::hk(1), S, S), 2 * pi, 1e-12);
    EXPECT_NEAR(inner(InertiaSpec::hk(0), CentralVec(Field(g), 1.0), CentralVec(Field(g), 1.0)), 1.0, 1e-15);
}

TEST_F(Trig, BracketExamples) {
    const CentralVec b = bracket(S, C);
    EXPECT_LT((b.x - 1.0).max_abs(), 1e-12);
    EXPECT_NEAR(b.a, -pi, 1e-12);
    const CentralVec z = bracket(S, S);
    EXPECT_LT(z.max_abs(), 1e-13);
    EXPECT_NEAR(gelfand_fuchs(S, C), -pi, 1e-12);
    EXPECT_NEAR(gelfand_fuchs(S, S), 0.0, 1e-12);
}

TEST_F(Trig, BracketDropsCenterOffTheExtension) {
    EXPECT_EQ(ad(InertiaSpec::hk(0), S, C).a, 0.0);
    EXPECT_NEAR(ad(InertiaSpec::hk(0).with_center(), S, C).a, -pi, 1e-12);
}

TEST_F(Trig, AdTransposeExamples) {
    const InertiaSpec h0 = InertiaSpec::hk(0);
    const Field expect = Field::sample(g, [](double x) { return 1.5 * std::sin(2 * x); });
    EXPECT_LT((ad_transpose(h0, S, S).x - expect).max_abs(), 1e-12);
    const CentralVec c(Field(g), 1.0);
    EXPECT_LT((ad_transpose(h0.with_center(), S, c).x + C).max_abs(), 1e-10);
    // Without the extension the central velocity is invisible.
    EXPECT_LT(ad_transpose(h0, S, c).x.max_abs(), 1e-15);
}

TEST_F(Trig, AlphaExamples) {
    const InertiaSpec h0 = InertiaSpec::hk(0);
    const Field direct = 2.0 * deriv(S, 1) * C + S * deriv(C, 1);   // 2Z'X + ZX' with X = cos, Z = sin
    EXPECT_LT((alpha_op(h0, C, S).x - direct).max_abs(), 1e-12);
    EXPECT_LT(alpha_op(h0, S, CentralVec(Field(g))).max_abs(), 1e-15);
}

TEST(Metrics, AdjointnessEverySpec) {
    const Grid g(64);
    CounterRng rng(31);
    for (const auto& sp : all_specs()) {
        for (int i = 0; i < 10; ++i) {
            const CentralVec v = rvec(g, rng, sp.extended()), w = rvec(g, rng, sp.extended()),
                             u = rvec(g, rng, sp.extended());
            const double l = inner(sp, ad(sp, v, w), u), r = inner(sp, w, ad_transpose(sp, v, u));
            EXPECT_NEAR(l, r, 1e-9 * std::max(1.0, std::abs(l))) << sp.name();
        }
    }
}

TEST(Metrics, InnerIsSymmetricBilinearPositive) {
    const Grid g(64);
    CounterRng rng(32);
    for (const auto& sp : all_specs()) {
        const CentralVec v = rvec(g, rng, true), w = rvec(g, rng, true), u = rvec(g, rng, true);
        EXPECT_NEAR(inner(sp, v, w), inner(sp, w, v), 1e-12);
        EXPECT_NEAR(inner(sp, 2.0 * v + u, w), 2 * inner(sp, v, w) + inner(sp, u, w), 1e-11);
        EXPECT_GT(norm2(sp, v), 0.0);
    }
}

TEST(Metrics, JacobiAndCocycleIdentities) {
    const Grid g(64);
    CounterRng rng(33);
    for (int i = 0; i < 10; ++i) {
        const CentralVec x = rvec(g, rng, true), y = rvec(g, rng, true), z = rvec(g, rng, true);
        const CentralVec j = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        EXPECT_LT(j.max_abs(), 1e-10);
        const double w = gelfand_fuchs(field_bracket(x.x, y.x), z.x) + gelfand_fuchs(field_bracket(y.x, z.x), x.x) +
                         gelfand_fuchs(field_bracket(z.x, x.x), y.x);
        EXPECT_LT(std::abs(w), 1e-10);
    }
}

TEST(Metrics, BurgersSymmetrisedOperators) {
    const Grid g(64);
    CounterRng rng(34);
    const InertiaSpec h0 = InertiaSpec::hk(0);
    for (int i = 0; i < 5; ++i) {
        const Field X = random_trig(g, rng), Z = random_trig(g, rng);
        const CentralVec x(X), z(Z);
        const Field P = (ad_transpose(h0, x, z) + ad(h0, x, z)).x;
        const Field M = (ad_transpose(h0, x, z) - ad(h0, x, z)).x;
        EXPECT_LT((P - 3.0 * deriv(X, 1) * Z).max_abs(), 1e-10);
        EXPECT_LT((M - (deriv(X, 1) * Z + 2.0 * X * deriv(Z, 1))).max_abs(), 1e-10);
    }
}

TEST(Metrics, AdTransposeReversesCommutators) {
    const Grid g(64);
    CounterRng rng(35);
    for (const auto& sp : {InertiaSpec::hk(0), InertiaSpec::hk(1)}) {
        for (int i = 0; i < 5; ++i) {
            const CentralVec x = rvec(g, rng, false), y = rvec(g, rng, false), z = rvec(g, rng, false);
            const CentralVec l = ad_transpose(sp, x, ad_transpose(sp, y, z)) - ad_transpose(sp, y, ad_transpose(sp, x, z));
            const CentralVec r = -ad_transpose(sp, ad(sp, x, y), z);
            EXPECT_LT((l - r).max_abs(), 1e-8 * std::max(1.0, r.max_abs()));
        }
    }
}

TEST(Metrics, MinusHalfAlphaIsHomomorphism) {
    const Grid g(64);
    CounterRng rng(36);
    const InertiaSpec h0 = InertiaSpec::hk(0);
    auto op = [&](const CentralVec& x, const CentralVec& z) { return -0.5 * alpha_op(h0, x, z); };
    for (int i = 0; i < 5; ++i) {
        const CentralVec x = rvec(g, rng, false), y = rvec(g, rng, false), z = rvec(g, rng, false);
        const CentralVec l = op(ad(h0, x, y), z);
        const CentralVec r = op(x, op(y, z)) - op(y, op(x, z));
        EXPECT_LT((l - r).max_abs(), 1e-8);
    }
}

TEST(Metrics, CovariantConstantIsTorsionFreeAndCompatible) {
    const Grid g(64);
    CounterRng rng(37);
    for (const auto& sp : all_specs()) {
        const CentralVec x = rvec(g, rng, sp.extended()), y = rvec(g, rng, sp.extended()),
                         z = rvec(g, rng, sp.extended());
        // nabla_X Y - nabla_Y X = -[X, Y] for right-invariant fields in this convention.
        const CentralVec tor = covariant_constant(sp, x, y) - covariant_constant(sp, y, x) + ad(sp, x, y);
        EXPECT_LT(tor.max_abs(), 1e-10) << sp.name();
        // Constant fields have constant inner products: <nabla_X Y, Z> + <Y, nabla_X Z> = 0.
        const double c = inner(sp, covariant_constant(sp, x, y), z) + inner(sp, y, covariant_constant(sp, x, z));
        EXPECT_NEAR(c, 0.0, 1e-9) << sp.name();
    }
}
