#pragma once

#include <functional>
#include <span>

namespace ilt::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a, b]; either end may be infinite.
QuadResult integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12,
                     unsigned max_depth = 18);

/// Same, split at every break point strictly inside (a, b). Use it at kinks.
QuadResult integrate_pieces(const Integrand& f, double a, double b, std::span<const double> breaks,
                            double rel_tol = 1e-12, unsigned max_depth = 18);

}  // namespace ilt::quad
