#include "ilt/mollifier.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ilt/quadrature.hpp"

namespace ilt {

namespace {

struct CacheKey {
    int shape;
    int derivative;
    std::uint64_t eps_bits;
    std::uint64_t x_bits;
    bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const noexcept {
        std::uint64_t h = k.eps_bits * 0x9e3779b97f4a7c15ULL;
        h ^= k.x_bits + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::uint64_t>(k.shape * 2 + k.derivative) * 0xbf58476d1ce4e5b9ULL;
        return static_cast<std::size_t>(h);
    }
};

// Shared across threads; values are pure functions of the key.
class GreenCache {
public:
    template <typename Compute>
    double get(const CacheKey& key, Compute&& compute) {
        {
            std::lock_guard lock(mutex_);
            if (auto it = map_.find(key); it != map_.end()) return it->second;
        }
        const double v = compute();
        std::lock_guard lock(mutex_);
        map_.emplace(key, v);
        return v;
    }

private:
    std::mutex mutex_;
    std::unordered_map<CacheKey, double, CacheKeyHash> map_;
};

GreenCache& green_cache() {
    static GreenCache cache;
    return cache;
}

double green(double x) { return std::exp(-std::abs(x)); }
double green_prime(double x) {
    if (x > 0.0) return -std::exp(-x);
    if (x < 0.0) return std::exp(x);
    return 0.0;
}

}  // namespace

std::string_view to_string(MollifierShape shape) noexcept {
    switch (shape) {
        case MollifierShape::smooth_bump: return "smooth_bump";
        case MollifierShape::quartic_bump: return "quartic_bump";
    }
    return "unknown";
}

MollifierShape parse_mollifier_shape(std::string_view name) {
    if (name == "smooth_bump") return MollifierShape::smooth_bump;
    if (name == "quartic_bump") return MollifierShape::quartic_bump;
    throw std::invalid_argument("unknown mollifier shape: " + std::string(name));
}

Epsilon::Epsilon(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument("epsilon must be positive and finite");
}

Mollifier::Mollifier(MollifierShape shape) noexcept
    : shape_(shape),
      normalization_(shape == MollifierShape::smooth_bump ? kSmoothBumpNormalization
                                                          : kQuarticBumpNormalization) {}

double Mollifier::base(double u) const noexcept {
    const double t = 1.0 - u * u;
    if (!(t > 0.0)) return 0.0;
    if (shape_ == MollifierShape::smooth_bump) return normalization_ * std::exp(-1.0 / t);
    return normalization_ * t * t;
}

double Mollifier::base_prime(double u) const noexcept {
    const double t = 1.0 - u * u;
    if (!(t > 0.0)) return 0.0;
    if (shape_ == MollifierShape::smooth_bump)
        return normalization_ * std::exp(-1.0 / t) * (-2.0 * u / (t * t));
    return -4.0 * normalization_ * u * t;
}

double Mollifier::g_eps(Epsilon eps, double x) const {
    const CacheKey key{static_cast<int>(shape_), 0, std::bit_cast<std::uint64_t>(eps.value()),
                       std::bit_cast<std::uint64_t>(x)};
    return green_cache().get(key, [&] {
        const double e = eps.value();
        // In u = y/eps the integrand is f(u) exp(-|x - eps u|), kinked at u = x/eps.
        const std::vector<double> kink{x / e};
        return quad::integrate_pieces([&](double u) { return base(u) * green(x - e * u); }, -1.0, 1.0,
                                      kink, 1e-14)
            .value;
    });
}

double Mollifier::g_eps_prime(Epsilon eps, double x) const {
    const CacheKey key{static_cast<int>(shape_), 1, std::bit_cast<std::uint64_t>(eps.value()),
                       std::bit_cast<std::uint64_t>(x)};
    return green_cache().get(key, [&] {
        const double e = eps.value();
        const std::vector<double> jump{x / e};
        return quad::integrate_pieces([&](double u) { return base(u) * green_prime(x - e * u); }, -1.0,
                                      1.0, jump, 1e-14)
            .value;
    });
}

}  // namespace ilt
