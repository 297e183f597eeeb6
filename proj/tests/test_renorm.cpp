#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ilt/renorm.hpp"
#include "ilt/rng.hpp"
#include "support/oracles.hpp"

namespace ilt {
namespace {

SubsetTable random_table(int order, std::uint64_t seed) {
    Xoshiro256pp gen(seed);
    SubsetTable t(order);
    for (std::uint32_t b = 0; b <= t.full_mask(); ++b) t.set(b, 4.0 * gen.uniform01() - 2.0);
    return t;
}

TEST(Green, ValuesAndDerivative) {
    EXPECT_EQ(green_g(0.0), 1.0);
    EXPECT_DOUBLE_EQ(green_g(-2.0), std::exp(-2.0));
    EXPECT_EQ(green_g_prime(0.0), 0.0);
    EXPECT_DOUBLE_EQ(green_g_prime(0.5), -std::exp(-0.5));
    EXPECT_DOUBLE_EQ(green_g_prime(-0.5), std::exp(-0.5));
}

TEST(SubsetTable, MissingEntriesThrow) {
    SubsetTable t(3);
    EXPECT_EQ(t.size(), 4u);
    EXPECT_EQ(t.full_mask(), 3u);
    EXPECT_THROW((void)t.at(1), std::out_of_range);
    t.set(1, 2.5);
    EXPECT_TRUE(t.contains(1));
    EXPECT_EQ(t.at(1), 2.5);
    EXPECT_THROW(t.set(4, 1.0), std::out_of_range);
    EXPECT_THROW(SubsetTable(0), std::invalid_argument);
}

TEST(Renormalize, RoundTripsForEveryOrder) {
    for (int k = 1; k <= 6; ++k) {
        const auto alphas = random_table(k, 100 + static_cast<std::uint64_t>(k));
        std::vector<double> g;
        for (int j = 2; j <= k; ++j) g.push_back(std::exp(-0.3 * j));
        const auto gammas = renormalize(alphas, g);
        const auto back = unrenormalize(gammas, g);
        for (std::uint32_t b = 0; b <= alphas.full_mask(); ++b) {
            EXPECT_NEAR(back.at(b), alphas.at(b), 1e-13) << "k = " << k << ", B = " << b;
            EXPECT_NEAR(renormalize(back, g).at(b), gammas.at(b), 1e-13);
        }
        EXPECT_NEAR(gamma_from_alpha(alphas, g), gammas.at(alphas.full_mask()), 1e-15);
        EXPECT_NEAR(alpha_from_gamma(gammas, g), alphas.at(alphas.full_mask()), 1e-13);
    }
}

TEST(Renormalize, OrderThreeByHand) {
    SubsetTable a(3);
    a.set(0b00, 1.5);   // alpha_1
    a.set(0b01, 0.7);   // alpha_2(x_2)
    a.set(0b10, 0.4);   // alpha_2(x_3)
    a.set(0b11, 0.25);  // alpha_3(x_2, x_3)
    const std::vector<double> g{0.6, 0.3};
    const double expected = 0.25 - 0.6 * 0.4 - 0.3 * 0.7 + 0.6 * 0.3 * 1.5;
    EXPECT_NEAR(gamma_from_alpha(a, g), expected, 1e-15);
    EXPECT_THROW((void)gamma_from_alpha(a, std::vector<double>{0.6}), std::invalid_argument);
}

TEST(GammaProfile, OrderTwoAssembly) {
    const auto path = sample_path({21, 0}, TimeGrid(1e-3, 700), false);
    const Mollifier m;
    const Epsilon eps(0.05);
    const OffsetVector x{0.03};
    const auto gamma = gamma_eps_profile(path, m, eps, x);
    const auto a2 = alpha_profile_windowed(path, m, eps, x);
    const auto a1 = alpha_profile_windowed(path, m, eps, {});
    const double g = m.g_eps(eps, 0.03);
    for (std::size_t i = 0; i < gamma.values.size(); ++i)
        EXPECT_NEAR(gamma.values[i], a2.values[i] - g * a1.values[i], 1e-14);

    const auto exact = gamma_eps_profile(path, m, eps, x, GreenWeights::exact);
    EXPECT_NEAR(exact.final_value(), a2.final_value() - green_g(0.03) * a1.final_value(), 1e-14);
}

TEST(GammaProfile, OrderThreeMatchesSubsetExpansion) {
    const auto path = sample_path({22, 0}, TimeGrid(1e-3, 500), false);
    const Mollifier m;
    const Epsilon eps(0.05);
    const OffsetVector x{0.01, -0.02};
    SubsetTable t(3);
    for (std::uint32_t b = 0; b <= 3; ++b) t.set(b, alpha_profile_naive(path, m, eps, x.subset(b)).final_value());
    const std::vector<double> g{m.g_eps(eps, 0.01), m.g_eps(eps, -0.02)};
    const double gamma = gamma_eps_profile(path, m, eps, x).final_value();
    EXPECT_NEAR(gamma, gamma_from_alpha(t, g), 1e-12 * std::max(1.0, std::abs(gamma)));
}

TEST(GammaProfile, FarOffsetLeavesOnlyCounterterm) {
    // The path never moves by 50, so alpha_2(50) vanishes and gamma_2 = -g_eps(50) * t.
    const auto path = sample_path({23, 0}, TimeGrid(1e-3, 300), false);
    const Mollifier m;
    const Epsilon eps(0.05);
    const auto gamma = gamma_eps_profile(path, m, eps, {50.0});
    EXPECT_NEAR(gamma.final_value(), -m.g_eps(eps, 50.0) * 0.3, 1e-30);
}

TEST(GammaProfile, KilledMeanVanishes) {
    // E alpha_{2,eps}(x; zeta) = 2 g_eps(x) and E zeta = 2, so E gamma_{2,eps}(x; zeta) = 0.
    const Mollifier m;
    const Epsilon eps(0.1);
    const TimeGrid grid(2e-3, 10'000);
    constexpr int n = 1000;
    for (double x : {0.0, 0.4}) {
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto path = sample_path({303, static_cast<std::uint64_t>(i)}, grid, true);
            const double v = gamma_eps_profile(path, m, eps, {x}).final_value();
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum2 / n - mean * mean) / n);
        EXPECT_LT(std::abs(mean), 4.0 * se + 0.05) << "x = " << x << ", se = " << se;
    }
}

TEST(DgammaProfile, MatchesFiniteDifference) {
    const auto path = sample_path({24, 0}, TimeGrid(1e-3, 600), false);
    const Mollifier m;
    const Epsilon eps(0.05);
    const OffsetVector x{0.02, -0.015};
    const SimplexDp dp(path, m, eps);
    const double h = 1e-5;
    for (int l = 2; l <= 3; ++l) {
        const double d = dgamma_dxl_profile(dp, m, eps, x, l).final_value();
        const double up = gamma_eps_profile(dp, m, eps, x.with(l, x.at(l) + h)).final_value();
        const double dn = gamma_eps_profile(dp, m, eps, x.with(l, x.at(l) - h)).final_value();
        const double fd = (up - dn) / (2 * h);
        EXPECT_NEAR(d, fd, 1e-5 * std::max(1.0, std::abs(fd))) << "l = " << l;
    }
    EXPECT_THROW(dgamma_dxl_profile(dp, m, eps, x, 1), std::out_of_range);
}

TEST(DgammaProfile, IntegratesBackToGamma) {
    const auto path = sample_path({25, 0}, TimeGrid(1e-3, 400), false);
    const Mollifier m;
    const Epsilon eps(0.05);
    const SimplexDp dp(path, m, eps);
    const double a = -0.1, b = 0.15;
    const int n = 200;  // Simpson panels
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + (b - a) * i / n;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * dgamma_dxl_profile(dp, m, eps, {x}, 2).final_value();
    }
    s *= (b - a) / (3.0 * n);
    const double diff = gamma_eps_profile(dp, m, eps, {b}).final_value() - gamma_eps_profile(dp, m, eps, {a}).final_value();
    EXPECT_NEAR(s, diff, 1e-6 * std::max(1.0, std::abs(diff)));
}

TEST(Green, IsTheHalfPotentialDensity) {
    const double x = 0.7;
    const double v = testing::gk_pieces(
        [x](double t) {
            if (t <= 0.0) return 0.0;
            return std::exp(-t / 2.0 - x * x / (2.0 * t)) / std::sqrt(2.0 * M_PI * t);
        },
        0.0, 200.0, {0.5, 2.0, 10.0}, 1e-13);
    EXPECT_NEAR(v, std::exp(-0.7), 1e-8);
    EXPECT_DOUBLE_EQ(green_g(1.0), std::exp(-1.0));
    EXPECT_EQ(green_g(1.0), green_g(-1.0));
}

TEST(Green, LipschitzBound) {
    Xoshiro256pp gen(2718);
    for (int i = 0; i < 10'000; ++i) {
        const double x = 10.0 * gen.uniform01() - 5.0, y = 10.0 * gen.uniform01() - 5.0;
        EXPECT_LE(std::abs(green_g(x) - green_g(y)), std::abs(x - y) * (green_g(x) + green_g(y)) + 1e-15);
    }
}

TEST(Renormalize, DegenerateWeights) {
    const auto a = random_table(4, 9);
    const std::vector<double> zeros(3, 0.0);
    const auto g = renormalize(a, zeros);
    for (std::uint32_t b = 0; b <= a.full_mask(); ++b) EXPECT_EQ(g.at(b), a.at(b));

    SubsetTable two(2);
    two.set(0, 1.25);
    two.set(1, 0.8);
    const std::vector<double> gv{0.375};
    EXPECT_EQ(renormalize(two, gv).at(1), 0.8 - 0.375 * 1.25);
    EXPECT_EQ(unrenormalize(renormalize(two, gv), gv).at(1), 0.8);
}

TEST(GammaProfile, DistantOffsetsDecouple) {
    const auto path = sample_path({26, 0}, TimeGrid(1e-3, 400), false);
    const Mollifier m;
    const Epsilon eps(0.05);
    // A path squeezed to a width below eps, jumping by +20 and then by -20, so that
    // alpha_3(20, -20) is far from zero while every g_eps(+-20) is negligible.
    std::vector<double> w(path.values().begin(), path.values().end());
    for (double& v : w) v *= 0.02;
    for (std::size_t i = 134; i < w.size(); ++i) w[i] += 20.0;
    for (std::size_t i = 267; i < w.size(); ++i) w[i] -= 20.0;
    const BrownianPath jumpy(path.grid(), w);
    const OffsetVector x{20.0, -20.0};
    const double a = alpha_profile_windowed(jumpy, m, eps, x).final_value();
    const double g = gamma_eps_profile(jumpy, m, eps, x).final_value();
    ASSERT_GT(a, 0.0);
    EXPECT_NEAR(g, a, 1e-6 * a);

    const OffsetVector x2{20.0};
    const double da = dalpha_dxl_profile(jumpy, m, eps, x2, 2).final_value();
    const double dg = dgamma_dxl_profile(jumpy, m, eps, x2, 2).final_value();
    EXPECT_NEAR(dg, da, 1e-6 * std::max(1.0, std::abs(da)));
}

}  // namespace
}  // namespace ilt
