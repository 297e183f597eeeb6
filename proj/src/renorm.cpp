#include "ilt/renorm.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace ilt {

double green_g(double x) noexcept { return std::exp(-std::abs(x)); }

double green_g_prime(double x) noexcept {
    if (x > 0.0) return -std::exp(-x);
    if (x < 0.0) return std::exp(x);
    return 0.0;
}

SubsetTable::SubsetTable(int order) : order_(order) {
    if (order < 1 || order > 31) throw std::invalid_argument("SubsetTable: order must be in [1, 31]");
    entries_.resize(std::size_t{1} << (order - 1));
}

void SubsetTable::set(std::uint32_t mask, double value) {
    if (mask > full_mask()) throw std::out_of_range("SubsetTable: mask outside {2..k}");
    entries_[mask] = value;
}

bool SubsetTable::contains(std::uint32_t mask) const { return mask <= full_mask() && entries_[mask].has_value(); }

double SubsetTable::at(std::uint32_t mask) const {
    if (!contains(mask)) throw std::out_of_range("SubsetTable: missing entry for mask " + std::to_string(mask));
    return *entries_[mask];
}

namespace {

void check_gvals(const SubsetTable& t, std::span<const double> gvals) {
    if (static_cast<int>(gvals.size()) != t.order() - 1)
        throw std::invalid_argument("expected one Green value per offset");
}

double product_over(std::uint32_t mask, std::span<const double> gvals) {
    double p = 1.0;
    for (std::size_t i = 0; i < gvals.size(); ++i)
        if (mask & (1u << i)) p *= gvals[i];
    return p;
}

// sum over A subset B of sign^{|A|} prod_A g * table[B \ A]
double subset_sum(const SubsetTable& t, std::uint32_t b, std::span<const double> gvals, double sign) {
    double acc = 0.0;
    // Enumerate all submasks a of b, including 0.
    for (std::uint32_t a = b;; a = (a - 1) & b) {
        const double s = (sign < 0.0 && (std::popcount(a) & 1)) ? -1.0 : 1.0;
        acc += s * product_over(a, gvals) * t.at(b & ~a);
        if (a == 0) break;
    }
    return acc;
}

SubsetTable transform(const SubsetTable& in, std::span<const double> gvals, double sign) {
    check_gvals(in, gvals);
    SubsetTable out(in.order());
    for (std::uint32_t b = 0; b <= in.full_mask(); ++b) out.set(b, subset_sum(in, b, gvals, sign));
    return out;
}

}  // namespace

SubsetTable renormalize(const SubsetTable& alphas, std::span<const double> gvals) {
    return transform(alphas, gvals, -1.0);
}

SubsetTable unrenormalize(const SubsetTable& gammas, std::span<const double> gvals) {
    return transform(gammas, gvals, +1.0);
}

double gamma_from_alpha(const SubsetTable& alphas, std::span<const double> gvals) {
    check_gvals(alphas, gvals);
    return subset_sum(alphas, alphas.full_mask(), gvals, -1.0);
}

double alpha_from_gamma(const SubsetTable& gammas, std::span<const double> gvals) {
    check_gvals(gammas, gvals);
    return subset_sum(gammas, gammas.full_mask(), gvals, +1.0);
}

namespace {

std::vector<double> green_values(const Mollifier& m, Epsilon eps, const OffsetVector& x, GreenWeights w) {
    std::vector<double> g;
    for (double xj : x.components()) g.push_back(w == GreenWeights::smoothed ? m.g_eps(eps, xj) : green_g(xj));
    return g;
}

GammaProfile empty_gamma(const SimplexDp& dp, Epsilon eps, const OffsetVector& x) {
    GammaProfile out;
    out.order = x.order();
    out.eps = eps.value();
    out.x = x;
    out.dt = dp.dt();
    out.values.assign(dp.size(), 0.0);
    return out;
}

void axpy(std::vector<double>& acc, double a, const std::vector<double>& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a * v[i];
}

}  // namespace

GammaProfile gamma_eps_profile(const SimplexDp& dp, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                               GreenWeights weights) {
    const int k = x.order();
    if (k < 1) throw std::invalid_argument("gamma_eps_profile: order must be >= 1");
    const auto g = green_values(m, eps, x, weights);
    const std::uint32_t full = (1u << (k - 1)) - 1u;

    // Complements with equal content share one DP run.
    std::map<OffsetVector, std::vector<double>> alpha_cache;
    auto alpha_of = [&](const OffsetVector& sub) -> const std::vector<double>& {
        auto it = alpha_cache.find(sub);
        if (it == alpha_cache.end()) it = alpha_cache.emplace(sub, dp.profile(sub).values).first;
        return it->second;
    };

    GammaProfile out = empty_gamma(dp, eps, x);
    for (std::uint32_t a = 0; a <= full; ++a) {
        const double sign = (std::popcount(a) & 1) ? -1.0 : 1.0;
        axpy(out.values, sign * product_over(a, g), alpha_of(x.subset(full & ~a)));
    }
    return out;
}

GammaProfile gamma_eps_profile(const BrownianPath& path, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                               GreenWeights weights) {
    return gamma_eps_profile(SimplexDp(path, m, eps), m, eps, x, weights);
}

GammaProfile dgamma_dxl_profile(const SimplexDp& dp, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                                int l) {
    const int k = x.order();
    if (l < 2 || l > k) throw std::out_of_range("dgamma_dxl_profile: l must satisfy 2 <= l <= k");
    const auto g = green_values(m, eps, x, GreenWeights::smoothed);
    const std::uint32_t full = (1u << (k - 1)) - 1u;
    const std::uint32_t lbit = 1u << (l - 2);

    std::map<OffsetVector, std::vector<double>> alpha_cache;
    std::map<std::pair<OffsetVector, int>, std::vector<double>> dalpha_cache;

    GammaProfile out = empty_gamma(dp, eps, x);
    out.derivative_index = l;
    for (std::uint32_t a = 0; a <= full; ++a) {
        const double sign = (std::popcount(a) & 1) ? -1.0 : 1.0;
        const std::uint32_t keep = full & ~a;
        const OffsetVector sub = x.subset(keep);
        if (a & lbit) {
            // d/dx_l hits g_eps(x_l).
            const double coef = sign * product_over(a & ~lbit, g) * m.g_eps_prime(eps, x.at(l));
            auto it = alpha_cache.find(sub);
            if (it == alpha_cache.end()) it = alpha_cache.emplace(sub, dp.profile(sub).values).first;
            axpy(out.values, coef, it->second);
        } else {
            // d/dx_l hits alpha at the position of x_l inside x_{A^c}.
            const int pos = 2 + std::popcount(keep & (lbit - 1u));
            auto key = std::make_pair(sub, pos);
            auto it = dalpha_cache.find(key);
            if (it == dalpha_cache.end()) it = dalpha_cache.emplace(key, dp.profile(sub, pos).values).first;
            axpy(out.values, sign * product_over(a, g), it->second);
        }
    }
    return out;
}

GammaProfile dgamma_dxl_profile(const BrownianPath& path, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                                int l) {
    return dgamma_dxl_profile(SimplexDp(path, m, eps), m, eps, x, l);
}

}  // namespace ilt
