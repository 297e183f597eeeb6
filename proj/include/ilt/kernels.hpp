#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "ilt/mollifier.hpp"

// Inner loop of every simplex DP level:
//
//     sum_i  w_i * phi((center - pos_i) * inv_eps)
//
// where phi is the normalized base mollifier f or its derivative f'. The scalar
// variant is the reference; the AVX2 variant must agree with it to rounding.
namespace ilt::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelSpec {
    MollifierShape shape = MollifierShape::smooth_bump;
    bool derivative = false;
    double normalization = kSmoothBumpNormalization;

    static KernelSpec of(const Mollifier& m, bool derivative) noexcept {
        return {m.shape(), derivative, m.normalization()};
    }
};

double weighted_sum_scalar(const KernelSpec& spec, std::span<const double> pos,
                           std::span<const double> weights, double center, double inv_eps) noexcept;

#if defined(ILT_HAVE_AVX2)
double weighted_sum_avx2(const KernelSpec& spec, std::span<const double> pos,
                         std::span<const double> weights, double center, double inv_eps) noexcept;
#endif

/// True when the variant was compiled in and the CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Best available variant, unless overridden.
Isa active_isa() noexcept;

/// Pins the dispatched variant (tests, benchmarks). nullopt restores auto-selection.
/// Requesting an unavailable variant falls back to scalar.
void set_isa_override(std::optional<Isa> isa) noexcept;

/// Dispatched entry point.
double weighted_sum(const KernelSpec& spec, std::span<const double> pos, std::span<const double> weights,
                    double center, double inv_eps) noexcept;

}  // namespace ilt::kernels
