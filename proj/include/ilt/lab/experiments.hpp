#pragma once

#include <span>
#include <vector>

#include "ilt/lab/config.hpp"
#include "ilt/lab/manifest.hpp"
#include "ilt/path.hpp"

namespace ilt::lab {

/// Dispatches on config.kind. Exceptions from the numerics are caught and reported as a
/// failed metric instead of escaping.
std::vector<MetricRecord> run_metrics(const ExperimentConfig& config, unsigned threads);

/// The path of replica i: W on [0, horizon], killed when the horizon mode says so.
BrownianPath replica_path(const ExperimentConfig& config, std::size_t replica);

/// psi = phi_sigma * f_eps, the mollified Gaussian, by composite Gauss-Legendre over [-eps, eps].
double mollified_gaussian(const Mollifier& m, Epsilon eps, double sigma, double u);

/// One-sided difference quotients across x_l = 0 (l = scan_index) on one path, and the
/// jump the kink law predicts from the lower-order gammas.
struct KinkJumps {
    double alpha = 0.0;
    double gamma = 0.0;
    double predicted = 0.0;
};

KinkJumps kink_jumps(const BrownianPath& path, const ExperimentConfig& config);

struct OccupationSides {
    double lhs = 0.0;  // x-integral of Phi(x) alpha_{k,eps}(x; T) on the grid
    double rhs = 0.0;  // time-simplex sum of (Phi * F_eps) on the increments
    double relative_discrepancy() const;
};

/// Both sides of the occupation identity for a product Gaussian Phi of width sigma, k in {2, 3}.
OccupationSides occupation_sides(const BrownianPath& path, const Mollifier& m, Epsilon eps, int k, double sigma,
                                 double x_step);

}  // namespace ilt::lab
