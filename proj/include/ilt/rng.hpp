#pragma once

#include <array>
#include <cstdint>

namespace ilt {

// SplitMix64 step. Used for seeding and for hashing (master, index) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic, well-mixed combination of two 64-bit words.
constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t s = a;
    std::uint64_t h = splitmix64(s);
    s = h ^ (b + 0x632be59bd9b4e019ULL);
    return splitmix64(s);
}

/// Seed of one replica: the stream is a pure function of (master, replica_index).
struct RandomSeed {
    std::uint64_t master = 0;
    std::uint64_t replica_index = 0;

    constexpr std::uint64_t replica_seed() const noexcept {
        return hash_combine(master, replica_index);
    }
    /// Sub-stream for an independent use of the same replica (increments, killing time, ...).
    constexpr std::uint64_t stream(std::uint64_t tag) const noexcept {
        return hash_combine(replica_seed(), tag);
    }

    friend constexpr bool operator==(const RandomSeed&, const RandomSeed&) = default;
};

// xoshiro256++ (Blackman & Vigna), seeded through SplitMix64.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::array<std::uint64_t, 4> s_{};
};

// Box-Muller standard normals; the second variate of each pair is cached.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) noexcept : gen_(seed) {}

    double operator()() noexcept;
    Xoshiro256pp& engine() noexcept { return gen_; }

private:
    Xoshiro256pp gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ilt
