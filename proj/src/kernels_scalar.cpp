#include <cmath>

#include "ilt/kernels.hpp"

namespace ilt::kernels {

double weighted_sum_scalar(const KernelSpec& spec, std::span<const double> pos,
                           std::span<const double> weights, double center, double inv_eps) noexcept {
    const double norm = spec.normalization;
    double acc = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double u = (center - pos[i]) * inv_eps;
        const double t = 1.0 - u * u;
        if (!(t > 0.0)) continue;
        double phi;
        if (spec.shape == MollifierShape::smooth_bump) {
            phi = norm * std::exp(-1.0 / t);
            if (spec.derivative) phi *= -2.0 * u / (t * t);
        } else {
            phi = spec.derivative ? -4.0 * norm * u * t : norm * t * t;
        }
        acc += weights[i] * phi;
    }
    return acc;
}

}  // namespace ilt::kernels
