#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ilt/mollifier.hpp"
#include "ilt/path.hpp"
#include "ilt/simplex.hpp"

namespace ilt {

/// g(x) = exp(-|x|), the 1/2-potential density of Brownian motion.
double green_g(double x) noexcept;
/// g'(x) = -sign(x) exp(-|x|), with g'(0) = 0.
double green_g_prime(double x) noexcept;

/// Values indexed by subsets B of {2, ..., k}, as bitmasks (bit j-2 selects j).
/// Entry B holds a quantity of order |B| + 1 evaluated at x_B.
class SubsetTable {
public:
    explicit SubsetTable(int order);

    int order() const noexcept { return order_; }
    std::uint32_t full_mask() const noexcept { return (1u << (order_ - 1)) - 1u; }
    std::size_t size() const noexcept { return entries_.size(); }

    void set(std::uint32_t mask, double value);
    bool contains(std::uint32_t mask) const;
    /// Throws std::out_of_range when the entry was never set.
    double at(std::uint32_t mask) const;

private:
    int order_;
    std::vector<std::optional<double>> entries_;
};

/// For every B: gamma[B] = sum_{A subset B} (-1)^{|A|} prod_{j in A} g_j * alpha[B \ A].
/// `gvals[j-2]` holds g(x_j) (or g_eps(x_j)).
SubsetTable renormalize(const SubsetTable& alphas, std::span<const double> gvals);
/// For every B: alpha[B] = sum_{A subset B} prod_{j in A} g_j * gamma[B \ A].
SubsetTable unrenormalize(const SubsetTable& gammas, std::span<const double> gvals);

/// Inclusion-exclusion value of gamma_k(x) from the alpha table (full index set).
double gamma_from_alpha(const SubsetTable& alphas, std::span<const double> gvals);
/// Inverse combination: alpha_k(x) from the gamma table.
double alpha_from_gamma(const SubsetTable& gammas, std::span<const double> gvals);

/// Which Green weights multiply the lower-order terms.
enum class GreenWeights {
    smoothed,  // g_eps = f_eps * g, the approximate renormalization
    exact,     // g itself, used when approximating the eps -> 0 object from eps-level alphas
};

struct GammaProfile {
    int order = 1;
    double eps = 0.0;
    OffsetVector x;
    double dt = 0.0;
    std::vector<double> values;
    std::optional<int> derivative_index;

    double final_value() const { return values.back(); }
};

/// gamma_{k,eps}(x; .) on the path grid. One alpha evaluation per distinct sub-vector x_{A^c}.
GammaProfile gamma_eps_profile(const BrownianPath& path, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                               GreenWeights weights = GreenWeights::smoothed);
GammaProfile gamma_eps_profile(const SimplexDp& dp, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                               GreenWeights weights = GreenWeights::smoothed);

/// d/dx_l gamma_{k,eps}(x; .), by the product rule over the subset expansion.
GammaProfile dgamma_dxl_profile(const BrownianPath& path, const Mollifier& m, Epsilon eps,
                                const OffsetVector& x, int l);
GammaProfile dgamma_dxl_profile(const SimplexDp& dp, const Mollifier& m, Epsilon eps, const OffsetVector& x,
                                int l);

}  // namespace ilt
