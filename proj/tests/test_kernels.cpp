#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ilt/kernels.hpp"
#include "ilt/rng.hpp"
#include "ilt/simplex.hpp"

namespace ilt::kernels {
namespace {

struct Batch {
    std::vector<double> pos, weights;
};

Batch random_batch(std::uint64_t seed, std::size_t n, double spread) {
    Xoshiro256pp gen(seed);
    Batch b;
    for (std::size_t i = 0; i < n; ++i) {
        b.pos.push_back(spread * (2.0 * gen.uniform01() - 1.0));
        b.weights.push_back(gen.uniform01());
    }
    return b;
}

class KernelEquivalence : public ::testing::TestWithParam<std::tuple<MollifierShape, bool>> {};

TEST_P(KernelEquivalence, Avx2MatchesScalar) {
    if (!isa_available(Isa::avx2)) GTEST_SKIP() << "AVX2 not available";
#if defined(ILT_HAVE_AVX2)
    const auto [shape, derivative] = GetParam();
    const KernelSpec spec = KernelSpec::of(Mollifier(shape), derivative);
    // Lengths cover the vector body, the tail, and the empty batch.
    for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 9u, 16u, 31u, 100u, 1001u}) {
        const auto b = random_batch(n + 17, n, 1.2);
        for (double center : {0.0, 0.3, -0.9}) {
            const double s = weighted_sum_scalar(spec, b.pos, b.weights, center, 1.0);
            const double v = weighted_sum_avx2(spec, b.pos, b.weights, center, 1.0);
            double mag = 0.0;
            for (double w : b.weights) mag += w;
            EXPECT_NEAR(v, s, 1e-13 * (1.0 + mag) * spec.normalization * (derivative ? 50.0 : 1.0))
                << "n = " << n << ", center = " << center;
        }
    }
#endif
}

INSTANTIATE_TEST_SUITE_P(All, KernelEquivalence,
                         ::testing::Combine(::testing::Values(MollifierShape::smooth_bump,
                                                              MollifierShape::quartic_bump),
                                            ::testing::Bool()));

TEST(KernelEquivalence, Avx2HandlesSupportEdges) {
    if (!isa_available(Isa::avx2)) GTEST_SKIP() << "AVX2 not available";
#if defined(ILT_HAVE_AVX2)
    const KernelSpec spec = KernelSpec::of(Mollifier(), false);
    // Arguments at and just inside |u| = 1, where exp(-1/(1-u^2)) underflows.
    std::vector<double> pos{1.0, -1.0, 0.9999999, -0.9999999, 0.999, 1.0000001, 0.0, 0.5};
    std::vector<double> w(pos.size(), 1.0);
    EXPECT_NEAR(weighted_sum_avx2(spec, pos, w, 0.0, 1.0), weighted_sum_scalar(spec, pos, w, 0.0, 1.0), 1e-15);
#endif
}

TEST(Dispatch, OverrideSelectsVariant) {
    const KernelSpec spec = KernelSpec::of(Mollifier(), false);
    const auto b = random_batch(5, 50, 1.0);
    set_isa_override(Isa::scalar);
    EXPECT_EQ(active_isa(), Isa::scalar);
    EXPECT_EQ(weighted_sum(spec, b.pos, b.weights, 0.1, 1.0),
              weighted_sum_scalar(spec, b.pos, b.weights, 0.1, 1.0));
    set_isa_override(std::nullopt);
    EXPECT_EQ(active_isa(), isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar);
    EXPECT_TRUE(isa_available(Isa::scalar));
}

TEST(Dispatch, ProfilesAgreeAcrossVariants) {
    if (!isa_available(Isa::avx2)) GTEST_SKIP() << "AVX2 not available";
    const auto path = sample_path({4, 4}, TimeGrid(1e-3, 1000), false);
    const OffsetVector x{0.02, -0.01};
    set_isa_override(Isa::scalar);
    const auto a = alpha_profile_windowed(path, Mollifier(), Epsilon(0.05), x);
    set_isa_override(Isa::avx2);
    const auto b = alpha_profile_windowed(path, Mollifier(), Epsilon(0.05), x);
    set_isa_override(std::nullopt);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t m = 0; m < a.values.size(); ++m)
        EXPECT_NEAR(b.values[m], a.values[m], 1e-12 * (1.0 + std::abs(a.values[m])));
}

}  // namespace
}  // namespace ilt::kernels
