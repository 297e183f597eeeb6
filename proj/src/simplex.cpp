#include "ilt/simplex.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ilt {

double OffsetVector::at(int j) const {
    if (j < 2 || j > order()) throw std::out_of_range("OffsetVector: index " + std::to_string(j) + " out of range");
    return c_[static_cast<std::size_t>(j - 2)];
}

OffsetVector OffsetVector::subset(std::uint32_t mask) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (mask & (1u << i)) out.push_back(c_[i]);
    return OffsetVector(std::move(out));
}

OffsetVector OffsetVector::with(int j, double value) const {
    OffsetVector copy = *this;
    if (j < 2 || j > order()) throw std::out_of_range("OffsetVector: index " + std::to_string(j) + " out of range");
    copy.c_[static_cast<std::size_t>(j - 2)] = value;
    return copy;
}

SimplexDp::SimplexDp(const BrownianPath& path, const Mollifier& mollifier, Epsilon eps, Strategy strategy)
    : w_(path.effective_values()), dt_(path.dt()), mollifier_(mollifier), eps_(eps), strategy_(strategy) {
    if (w_.empty()) throw std::invalid_argument("SimplexDp: empty path");
    if (strategy_ == Strategy::windowed) {
        std::vector<std::uint32_t> order(w_.size());
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w_[a] < w_[b]; });
        sorted_w_.resize(w_.size());
        rank_.resize(w_.size());
        for (std::uint32_t r = 0; r < order.size(); ++r) {
            sorted_w_[r] = w_[order[r]];
            rank_[order[r]] = r;
        }
    }
}

std::vector<double> SimplexDp::first_level() const { return std::vector<double>(w_.size(), dt_); }

std::vector<double> SimplexDp::next_level(std::span<const double> prev, double offset, bool derivative) const {
    if (prev.size() != w_.size()) throw std::invalid_argument("SimplexDp: level size mismatch");
    return strategy_ == Strategy::naive ? next_level_naive(prev, offset, derivative)
                                        : next_level_windowed(prev, offset, derivative);
}

std::vector<double> SimplexDp::next_level_naive(std::span<const double> prev, double offset,
                                                bool derivative) const {
    const double e = eps_.value();
    const double inv = 1.0 / e;
    const double scale = derivative ? -dt_ * inv * inv : dt_ * inv;
    const auto spec = kernels::KernelSpec::of(mollifier_, derivative);
    std::vector<double> out(w_.size(), 0.0);
    for (std::size_t m = 1; m < w_.size(); ++m)
        out[m] = scale * kernels::weighted_sum_scalar(spec, w_.first(m), prev.first(m), w_[m] - offset, inv);
    return out;
}

std::vector<double> SimplexDp::next_level_windowed(std::span<const double> prev, double offset,
                                                   bool derivative) const {
    const double e = eps_.value();
    const double inv = 1.0 / e;
    const double scale = derivative ? -dt_ * inv * inv : dt_ * inv;
    const auto spec = kernels::KernelSpec::of(mollifier_, derivative);
    // Weights of points not yet visited stay zero, so each window sum only sees m' < m.
    std::vector<double> active(w_.size(), 0.0);
    std::vector<double> out(w_.size(), 0.0);
    const std::span<const double> sorted(sorted_w_);
    for (std::size_t m = 0; m < w_.size(); ++m) {
        const double center = w_[m] - offset;
        const auto lo = std::upper_bound(sorted_w_.begin(), sorted_w_.end(), center - e);
        const auto hi = std::lower_bound(lo, sorted_w_.end(), center + e);
        const auto first = static_cast<std::size_t>(lo - sorted_w_.begin());
        const auto count = static_cast<std::size_t>(hi - lo);
        if (count > 0)
            out[m] = scale * kernels::weighted_sum(spec, sorted.subspan(first, count),
                                                   std::span<const double>(active).subspan(first, count),
                                                   center, inv);
        active[rank_[m]] = prev[m];
    }
    return out;
}

IltProfile SimplexDp::profile(const OffsetVector& x, std::optional<int> derivative_index) const {
    const int k = x.order();
    if (derivative_index && (*derivative_index < 2 || *derivative_index > k))
        throw std::out_of_range("derivative index out of range for order " + std::to_string(k));

    IltProfile p;
    p.order = k;
    p.eps = eps_.value();
    p.x = x;
    p.dt = dt_;
    p.derivative_index = derivative_index;
    p.values.resize(w_.size());

    if (k == 1) {
        for (std::size_t m = 0; m < w_.size(); ++m) p.values[m] = dt_ * static_cast<double>(m);
        return p;
    }
    std::vector<double> level = first_level();
    for (int j = 2; j <= k; ++j) level = next_level(level, x.at(j), derivative_index == j);
    double acc = 0.0;
    for (std::size_t m = 0; m < w_.size(); ++m) {
        acc += level[m];
        p.values[m] = acc;
    }
    return p;
}

IltProfile alpha_profile_naive(const BrownianPath& path, const Mollifier& m, Epsilon eps, const OffsetVector& x) {
    return SimplexDp(path, m, eps, SimplexDp::Strategy::naive).profile(x);
}

IltProfile alpha_profile_windowed(const BrownianPath& path, const Mollifier& m, Epsilon eps,
                                  const OffsetVector& x) {
    return SimplexDp(path, m, eps, SimplexDp::Strategy::windowed).profile(x);
}

IltProfile dalpha_dxl_profile(const BrownianPath& path, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                              int l, SimplexDp::Strategy strategy) {
    if (l < 2 || l > x.order())
        throw std::out_of_range("dalpha_dxl_profile: l must satisfy 2 <= l <= k");
    return SimplexDp(path, m, eps, strategy).profile(x, l);
}

}  // namespace ilt
