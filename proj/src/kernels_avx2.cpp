// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.
#include <immintrin.h>

#include <cmath>

#include "ilt/kernels.hpp"

namespace ilt::kernels {

namespace {

// exp(x) for x <= 0, relative error ~2 ulp; underflows to exactly 0 below -708.
inline __m256d exp_nonpositive(__m256d x) {
    const __m256d lo = _mm256_set1_pd(-708.0);
    const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    x = _mm256_max_pd(x, lo);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634074)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125e-1), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);

    // Taylor series to degree 13 on |r| <= ln(2)/2.
    __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    __m256i e = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
    e = _mm256_slli_epi64(_mm256_add_epi64(e, _mm256_set1_epi64x(1023)), 52);
    const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(e));
    return _mm256_andnot_pd(under, result);
}

template <MollifierShape Shape, bool Derivative>
inline __m256d phi4(__m256d d, __m256d inv_eps, __m256d norm) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d u = _mm256_mul_pd(d, inv_eps);
    const __m256d t = _mm256_fnmadd_pd(u, u, one);
    const __m256d inside = _mm256_cmp_pd(t, _mm256_setzero_pd(), _CMP_GT_OQ);
    __m256d v;
    if constexpr (Shape == MollifierShape::smooth_bump) {
        const __m256d ts = _mm256_blendv_pd(one, t, inside);
        v = _mm256_mul_pd(norm, exp_nonpositive(_mm256_div_pd(_mm256_set1_pd(-1.0), ts)));
        if constexpr (Derivative)
            v = _mm256_mul_pd(v, _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), u), _mm256_mul_pd(ts, ts)));
    } else {
        if constexpr (Derivative)
            v = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(-4.0), norm), _mm256_mul_pd(u, t));
        else
            v = _mm256_mul_pd(norm, _mm256_mul_pd(t, t));
    }
    return _mm256_and_pd(v, inside);
}

template <MollifierShape Shape, bool Derivative>
double run(const KernelSpec& spec, std::span<const double> pos, std::span<const double> w, double center,
           double inv_eps) noexcept {
    const std::size_t n = pos.size();
    const __m256d c = _mm256_set1_pd(center);
    const __m256d ie = _mm256_set1_pd(inv_eps);
    const __m256d norm = _mm256_set1_pd(spec.normalization);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(c, _mm256_loadu_pd(pos.data() + i));
        const __m256d d1 = _mm256_sub_pd(c, _mm256_loadu_pd(pos.data() + i + 4));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i), phi4<Shape, Derivative>(d0, ie, norm), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i + 4), phi4<Shape, Derivative>(d1, ie, norm), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d d0 = _mm256_sub_pd(c, _mm256_loadu_pd(pos.data() + i));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i), phi4<Shape, Derivative>(d0, ie, norm), acc0);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc0);
    double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    if (i < n) acc += weighted_sum_scalar(spec, pos.subspan(i), w.subspan(i), center, inv_eps);
    return acc;
}

}  // namespace

double weighted_sum_avx2(const KernelSpec& spec, std::span<const double> pos, std::span<const double> weights,
                         double center, double inv_eps) noexcept {
    if (spec.shape == MollifierShape::smooth_bump) {
        return spec.derivative ? run<MollifierShape::smooth_bump, true>(spec, pos, weights, center, inv_eps)
                               : run<MollifierShape::smooth_bump, false>(spec, pos, weights, center, inv_eps);
    }
    return spec.derivative ? run<MollifierShape::quartic_bump, true>(spec, pos, weights, center, inv_eps)
                           : run<MollifierShape::quartic_bump, false>(spec, pos, weights, center, inv_eps);
}

}  // namespace ilt::kernels
