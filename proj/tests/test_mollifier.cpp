#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ilt/mollifier.hpp"
#include "ilt/renorm.hpp"
#include "support/oracles.hpp"

namespace ilt {
namespace {

TEST(Mollifier, SmoothBumpNormalizationMatchesOracle) {
    EXPECT_NEAR(kSmoothBumpNormalization, testing::smooth_bump_normalization_oracle(), 1e-14);
}

class MollifierShapes : public ::testing::TestWithParam<MollifierShape> {};

TEST_P(MollifierShapes, UnitMassSupportEvenNonnegative) {
    const Mollifier m(GetParam());
    const double mass = testing::gk_pieces([&](double u) { return m.base(u); }, -1.0, 1.0, {0.0}, 1e-14);
    EXPECT_NEAR(mass, 1.0, 1e-12);
    EXPECT_EQ(m.base(1.0), 0.0);
    EXPECT_EQ(m.base(-1.0), 0.0);
    EXPECT_EQ(m.base(1.5), 0.0);
    EXPECT_EQ(m.base(-3.0), 0.0);
    for (double u = -0.99; u < 1.0; u += 0.0137) {
        EXPECT_GE(m.base(u), 0.0);
        EXPECT_EQ(m.base(u), m.base(-u));
        EXPECT_EQ(m.base_prime(u), -m.base_prime(-u));
    }
}

TEST_P(MollifierShapes, ScaledFamilyKeepsUnitMass) {
    const Mollifier m(GetParam());
    for (double e : {0.5, 0.01, 1e-3}) {
        const Epsilon eps(e);
        const double mass =
            testing::gk_pieces([&](double y) { return m.f_eps(eps, y); }, -e, e, {0.0}, 1e-13);
        EXPECT_NEAR(mass, 1.0, 1e-11) << "eps = " << e;
        EXPECT_EQ(m.f_eps(eps, 1.0001 * e), 0.0);
    }
}

TEST_P(MollifierShapes, DerivativeMatchesCentralDifference) {
    const Mollifier m(GetParam());
    const double h = 1e-6;
    for (double u = -0.95; u < 0.96; u += 0.05) {
        const double fd = (m.base(u + h) - m.base(u - h)) / (2 * h);
        EXPECT_NEAR(m.base_prime(u), fd, 1e-7 * (1 + std::abs(fd))) << "u = " << u;
    }
    const Epsilon eps(0.1);
    const double y = 0.037;
    const double fd = (m.f_eps(eps, y + 1e-8) - m.f_eps(eps, y - 1e-8)) / 2e-8;
    EXPECT_NEAR(m.f_eps_prime(eps, y), fd, 1e-5 * std::abs(fd));
}

TEST_P(MollifierShapes, SmoothedGreenFunction) {
    const Mollifier m(GetParam());
    const Epsilon eps(0.05);
    // Away from the kink the convolution factorizes: g_eps(x) = g(x) * integral f(u) e^{eps u} du.
    const double factor = testing::gk_pieces([&](double u) { return m.base(u) * std::exp(0.05 * u); }, -1, 1, {0.0});
    for (double x : {0.2, 0.7, 3.0}) {
        EXPECT_NEAR(m.g_eps(eps, x), std::exp(-x) * factor, 1e-13);
        EXPECT_NEAR(m.g_eps(eps, -x), std::exp(-x) * factor, 1e-13);
        EXPECT_NEAR(m.g_eps_prime(eps, x), -std::exp(-x) * factor, 1e-13);
    }
    // Even, bounded by 1, 1-Lipschitz and within eps of g.
    double prev = m.g_eps(eps, -1.0);
    for (double x = -1.0; x <= 1.0; x += 0.01) {
        const double v = m.g_eps(eps, x);
        EXPECT_NEAR(v, m.g_eps(eps, -x), 1e-14);
        EXPECT_LE(v, 1.0);
        EXPECT_LE(std::abs(v - green_g(x)), 0.05 + 1e-12);
        EXPECT_LE(std::abs(v - prev), 0.01 + 1e-12);
        prev = v;
    }
    EXPECT_EQ(m.g_eps_prime(eps, 0.0), 0.0);
}

TEST_P(MollifierShapes, SmoothedGreenDerivativeIsDerivative) {
    const Mollifier m(GetParam());
    const Epsilon eps(0.05);
    for (double x : {-0.03, -0.01, 0.004, 0.02, 0.049, 0.3}) {
        const double h = 1e-4;
        const double fd = (8.0 * (m.g_eps(eps, x + h) - m.g_eps(eps, x - h)) -
                           (m.g_eps(eps, x + 2 * h) - m.g_eps(eps, x - 2 * h))) / (12 * h);
        EXPECT_NEAR(m.g_eps_prime(eps, x), fd, 1e-8) << "x = " << x;
    }
}

TEST_P(MollifierShapes, ScaledDerivative) {
    const Mollifier m(GetParam());
    const double e = 0.02;
    const Epsilon eps(e);
    EXPECT_EQ(m.f_eps_prime(eps, 0.0), 0.0);
    const double h = 1e-6 * e;
    for (int i = 0; i < 50; ++i) {
        const double y = e * (-0.98 + 1.96 * i / 49.0);
        const double fd = (m.f_eps(eps, y + h) - m.f_eps(eps, y - h)) / (2 * h);
        const double d = m.f_eps_prime(eps, y);
        EXPECT_NEAR(d, fd, 1e-6 * std::abs(d) + 1e-6) << "y = " << y;
    }
    const double total =
        testing::gk_pieces([&](double y) { return m.f_eps_prime(eps, y); }, -e, e, {0.0}, 1e-14);
    EXPECT_NEAR(total, 0.0, 1e-8);
}

TEST_P(MollifierShapes, ScalingIdentityIsExact) {
    const Mollifier m(GetParam());
    const Epsilon one(1.0);
    for (double e : {0.5, 0.25, 0.125}) {
        for (double y = -0.6; y <= 0.6; y += 0.07)
            EXPECT_EQ(m.f_eps(Epsilon(e), y), m.f_eps(one, y / e) / e);
    }
}

TEST_P(MollifierShapes, SmoothedGreenOutsideWindowAndNearZero) {
    const Mollifier m(GetParam());
    const double e = 0.05;
    const Epsilon eps(e);
    EXPECT_NEAR(m.g_eps(eps, 2 * e) / green_g(2 * e), m.g_eps(eps, 3 * e) / green_g(3 * e), 1e-9);
    EXPECT_NEAR(m.g_eps(eps, -2 * e) / green_g(2 * e), m.g_eps(eps, -3 * e) / green_g(3 * e), 1e-9);
    for (double x : {0.0, 1.0}) EXPECT_LE(std::abs(m.g_eps(eps, x) - green_g(x)), e);
    // g_eps is C^1 at 0: its second difference quotient stays bounded as the step shrinks,
    // while that of g blows up like 2/h.
    for (double h : {1e-2, 1e-3, 1e-4}) {
        const double second = (m.g_eps(eps, h) - 2 * m.g_eps(eps, 0.0) + m.g_eps(eps, -h)) / (h * h);
        EXPECT_LT(std::abs(second), 2.0 * m.normalization() / e) << "h = " << h;
    }
}

INSTANTIATE_TEST_SUITE_P(Both, MollifierShapes,
                         ::testing::Values(MollifierShape::smooth_bump, MollifierShape::quartic_bump),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Mollifier, SmoothBumpMoments) {
    const Mollifier m;
    const double abs_moment =
        testing::gk_pieces([&](double u) { return std::abs(u) * m.base(u); }, -1, 1, {0.0}, 1e-14);
    EXPECT_NEAR(abs_moment, 0.33445399771, 1e-10);
    const Mollifier q(MollifierShape::quartic_bump);
    const double q_abs = testing::gk_pieces([&](double u) { return std::abs(u) * q.base(u); }, -1, 1, {0.0}, 1e-14);
    EXPECT_NEAR(q_abs, 0.3125, 1e-13);
}

TEST(Epsilon, RejectsNonPositive) {
    EXPECT_THROW(Epsilon(0.0), std::invalid_argument);
    EXPECT_THROW(Epsilon(-0.1), std::invalid_argument);
    EXPECT_THROW(Epsilon(std::nan("")), std::invalid_argument);
    EXPECT_THROW(Epsilon(std::numeric_limits<double>::infinity()), std::invalid_argument);
    EXPECT_EQ(Epsilon(0.25).value(), 0.25);
}

TEST(MollifierShape, ParseRoundTrip) {
    for (auto s : {MollifierShape::smooth_bump, MollifierShape::quartic_bump})
        EXPECT_EQ(parse_mollifier_shape(to_string(s)), s);
    EXPECT_THROW(parse_mollifier_shape("gaussian"), std::invalid_argument);
}

}  // namespace
}  // namespace ilt
