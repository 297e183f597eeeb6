#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "ilt/kernels.hpp"
#include "ilt/mollifier.hpp"
#include "ilt/path.hpp"

namespace ilt {

/// Spatial offsets (x_2, ..., x_k) of a k-fold intersection local time; empty for k = 1.
class OffsetVector {
public:
    OffsetVector() = default;
    explicit OffsetVector(std::vector<double> components) : c_(std::move(components)) {}
    OffsetVector(std::initializer_list<double> components) : c_(components) {}

    int order() const noexcept { return static_cast<int>(c_.size()) + 1; }
    std::span<const double> components() const noexcept { return c_; }

    /// x_j for 2 <= j <= order().
    double at(int j) const;

    /// x_B for the index set B given as a bitmask (bit j-2 selects x_j), in increasing order.
    OffsetVector subset(std::uint32_t mask) const;

    /// Copy with x_j replaced.
    OffsetVector with(int j, double value) const;

    friend bool operator==(const OffsetVector&, const OffsetVector&) = default;
    friend auto operator<=>(const OffsetVector&, const OffsetVector&) = default;

private:
    std::vector<double> c_;
};

/// Cumulative-in-time values of alpha_{k,eps}(x; tau_m) (or of d/dx_l) on the path grid,
/// for every grid index up to the path's effective horizon.
struct IltProfile {
    int order = 1;
    double eps = 0.0;
    OffsetVector x;
    double dt = 0.0;
    std::vector<double> values;
    std::optional<int> derivative_index;

    double final_value() const { return values.back(); }
};

/// Level-by-level time-simplex dynamic program on one path:
///
///   C_1(m) = dt,   C_j(m) = dt * sum_{m' < m} C_{j-1}(m') * f_eps(W_m - W_{m'} - x_j)
///
/// and alpha(tau_M) = sum_{m <= M} C_k(m). The naive strategy scans every m' < m with the
/// scalar reference kernel; the windowed strategy keeps the grid points sorted by position
/// and only visits |W_{m'} - (W_m - x_j)| < eps, through the dispatched (SIMD) kernel.
class SimplexDp {
public:
    enum class Strategy { naive, windowed };

    SimplexDp(const BrownianPath& path, const Mollifier& mollifier, Epsilon eps,
              Strategy strategy = Strategy::windowed);

    std::size_t size() const noexcept { return w_.size(); }
    double dt() const noexcept { return dt_; }
    Strategy strategy() const noexcept { return strategy_; }

    std::vector<double> first_level() const;

    /// One level of the recurrence. With `derivative` the kernel is -(f_eps)'.
    std::vector<double> next_level(std::span<const double> prev, double offset, bool derivative = false) const;

    /// Full profile; derivative_index = l replaces f_eps by -(f_eps)' at level l only.
    IltProfile profile(const OffsetVector& x, std::optional<int> derivative_index = std::nullopt) const;

private:
    std::vector<double> next_level_naive(std::span<const double> prev, double offset, bool derivative) const;
    std::vector<double> next_level_windowed(std::span<const double> prev, double offset, bool derivative) const;

    std::span<const double> w_;
    double dt_;
    Mollifier mollifier_;
    Epsilon eps_;
    Strategy strategy_;
    std::vector<double> sorted_w_;
    std::vector<std::uint32_t> rank_;  // grid index -> position in sorted_w_
};

IltProfile alpha_profile_naive(const BrownianPath& path, const Mollifier& m, Epsilon eps,
                               const OffsetVector& x);

IltProfile alpha_profile_windowed(const BrownianPath& path, const Mollifier& m, Epsilon eps,
                                  const OffsetVector& x);

/// d/dx_l alpha_{k,eps}(x; .), 2 <= l <= k.
IltProfile dalpha_dxl_profile(const BrownianPath& path, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                              int l, SimplexDp::Strategy strategy = SimplexDp::Strategy::windowed);

}  // namespace ilt
