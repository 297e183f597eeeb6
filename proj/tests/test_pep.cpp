#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ilt/pep.hpp"
#include "support/oracles.hpp"

namespace ilt {
namespace {

TEST(PiecewiseExpPoly, SingleAbsExpIntegratesToTwo) {
    const auto p = PiecewiseExpPoly::constant(1.0).mul_abs_exp(0.3);
    EXPECT_NEAR(p.integrate_line(), 2.0, 1e-15);
    EXPECT_NEAR(p.evaluate(1.3), std::exp(-1.0), 1e-15);
}

TEST(PiecewiseExpPoly, TwoAbsExpOverlap) {
    const auto p = pep_mul_abs_exp(pep_mul_abs_exp(PiecewiseExpPoly::constant(1.0), 0.0), 1.0);
    EXPECT_NEAR(pep_integrate_line(p), 2.0 / std::exp(1.0), 1e-15);
    // Coincident centres: integral of exp(-2|z|) is 1.
    const auto q = PiecewiseExpPoly::constant(1.0).mul_abs_exp(0.5).mul_abs_exp(0.5);
    EXPECT_NEAR(q.integrate_line(), 1.0, 1e-15);
}

TEST(PiecewiseExpPoly, ConstantIsNotIntegrable) {
    EXPECT_THROW((void)PiecewiseExpPoly::constant(2.0).integrate_line(), NonIntegrableError);
    EXPECT_NO_THROW((void)PiecewiseExpPoly::constant(0.0).integrate_line());
}

TEST(PiecewiseExpPoly, FiniteIntervalIntegral) {
    const auto p = PiecewiseExpPoly::constant(1.0).mul_abs_exp(0.0);
    EXPECT_NEAR(p.integrate(-1.0, 2.0), 2.0 - std::exp(-1.0) - std::exp(-2.0), 1e-15);
    EXPECT_NEAR(p.integrate(0.5, 0.5), 0.0, 1e-300);
    EXPECT_NEAR(PiecewiseExpPoly::constant(3.0).integrate(1.0, 2.5), 4.5, 1e-15);
}

TEST(PiecewiseExpPoly, ProductMatchesPointwise) {
    const auto p = PiecewiseExpPoly::constant(2.0).mul_abs_exp(-0.4).mul_abs_exp(0.9);
    const auto q = PiecewiseExpPoly::constant(0.5).mul_abs_exp(0.1);
    const auto pq = p * q;
    for (double z = -3.0; z <= 3.0; z += 0.173)
        EXPECT_NEAR(pq.evaluate(z), p.evaluate(z) * q.evaluate(z), 1e-15) << "z = " << z;
    const double direct = testing::gk_pieces(
        [&](double z) { return p.evaluate(z) * q.evaluate(z); }, -40.0, 40.0, {-0.4, 0.1, 0.9}, 1e-14);
    EXPECT_NEAR(pq.integrate_line(), direct, 1e-13);
}

TEST(PiecewiseExpPoly, PolynomialTermsIntegrate) {
    // z * exp(-|z|) on the right half plus exp(z) on the left: pieces with powers.
    const PiecewiseExpPoly p({0.0}, {{{1.0, 0, 1.0}}, {{1.0, 1, -1.0}, {0.5, 2, -2.0}}});
    // integral_{-inf}^0 e^z + integral_0^inf (z e^{-z} + z^2 e^{-2z}/2) = 1 + 1 + 1/8
    EXPECT_NEAR(p.integrate_line(), 2.125, 1e-15);
}

TEST(IntegrateAbsExpProduct, MatchesQuadrature) {
    const std::vector<std::vector<ShiftedCenter>> cases{
        {{0.0, 0.0}},
        {{0.0, 0.0}, {0.5, 1.0}},
        {{0.2, 1.0}, {-0.3, 1.0}},
        {{0.0, 0.0}, {0.5, 1.0}, {1.0, 1.0}, {-0.3, 0.0}},
        {{0.7, 0.0}, {0.7, 0.0}, {-0.1, 1.0}},
    };
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& centers = cases[k];
        const auto pep = integrate_abs_exp_product(centers);
        for (double s : {-1.7, -0.4, 0.0, 0.25, 0.6, 2.2}) {
            std::vector<double> kinks;
            for (const auto& c : centers) kinks.push_back(c.offset + c.slope * s);
            const double direct = testing::gk_pieces(
                [&](double t) {
                    double prod = 1.0;
                    for (double c : kinks) prod *= std::exp(-std::abs(t - c));
                    return prod;
                },
                -60.0, 60.0, kinks, 1e-14);
            EXPECT_NEAR(pep.evaluate(s), direct, 1e-13) << "case " << k << ", s = " << s;
        }
    }
    EXPECT_THROW((void)integrate_abs_exp_product({}), std::invalid_argument);
}

TEST(PiecewiseExpPoly, OddIntegrandVanishes) {
    const PiecewiseExpPoly p({0.0}, {{{1.0, 1, 1.0}}, {{1.0, 1, -1.0}}});
    EXPECT_NEAR(p.integrate_line(), 0.0, 1e-15);
}

TEST(PiecewiseExpPoly, ShiftedPairMatchesQuadrature) {
    const auto p = PiecewiseExpPoly::constant(1.0).mul_abs_exp(0.0).mul_abs_exp(1.0);
    const double oracle = testing::gk_pieces(
        [](double z) { return std::exp(-std::abs(z) - std::abs(z - 1.0)); }, -50.0, 51.0, {0.0, 1.0}, 1e-15);
    EXPECT_NEAR(p.integrate_line(), oracle, 1e-12);
    EXPECT_NEAR(p.integrate_line(), 0.735758882342884643, 1e-15);
}

}  // namespace
}  // namespace ilt
