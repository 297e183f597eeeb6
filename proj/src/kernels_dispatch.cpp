#include <atomic>
#include <cstdlib>

#include "ilt/kernels.hpp"

namespace ilt::kernels {

namespace {

// -1: automatic; otherwise static_cast<int>(Isa).
std::atomic<int> g_override{-1};

bool cpu_has_avx2() noexcept {
#if defined(ILT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

bool scalar_forced() noexcept {
    static const bool forced = [] {
        const char* env = std::getenv("ILT_FORCE_SCALAR");
        return env && *env && *env != '0';
    }();
    return forced;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) noexcept {
    return isa == Isa::scalar || cpu_has_avx2();
}

Isa active_isa() noexcept {
    const int o = g_override.load(std::memory_order_relaxed);
    if (o >= 0) {
        const auto isa = static_cast<Isa>(o);
        return isa_available(isa) ? isa : Isa::scalar;
    }
    return cpu_has_avx2() && !scalar_forced() ? Isa::avx2 : Isa::scalar;
}

void set_isa_override(std::optional<Isa> isa) noexcept {
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

double weighted_sum(const KernelSpec& spec, std::span<const double> pos, std::span<const double> weights,
                    double center, double inv_eps) noexcept {
#if defined(ILT_HAVE_AVX2)
    if (active_isa() == Isa::avx2) return weighted_sum_avx2(spec, pos, weights, center, inv_eps);
#endif
    return weighted_sum_scalar(spec, pos, weights, center, inv_eps);
}

}  // namespace ilt::kernels
