#pragma once

#include <span>
#include <vector>

#include "ilt/simplex.hpp"

namespace ilt {

/// One order assignment s : {1..k} -> {1..n} with |s^{-1}(i)| = k_i. Stored 0-based:
/// s[p] in [0, n), c[p] = |{u <= p : s[u] = s[p]}| in [1, k_{s[p]}], and `bad` lists the
/// positions p >= 1 with s[p] == s[p-1] (position 0 follows the origin and is never bad).
struct MappingS {
    std::vector<int> s;
    std::vector<int> c;
    std::vector<int> bad;
    friend bool operator==(const MappingS&, const MappingS&) = default;
};

/// All interleavings for multiplicities k_1..k_n, in lexicographic order of s.
std::vector<MappingS> enumerate_mappings(std::span<const int> orders);

enum class MomentMethod {
    automatic,   // exact for n <= 3 factors, quadrature beyond
    exact,       // piecewise exp-poly elimination; n <= 3 only
    quadrature,  // nested adaptive Gauss-Kronrod over the difference variables
};

struct MomentResult {
    double value = 0.0;
    double error_bound = 0.0;  // zero for the exact route
    MomentMethod method = MomentMethod::exact;
    bool converged = true;
};

struct MomentOptions {
    MomentMethod method = MomentMethod::automatic;
    double quadrature_rel_tol = 1e-10;
    /// The quadrature route reports converged only if error_bound <= this * |value|.
    double acceptance_rel_error = 1e-7;
};

/// E[prod_i alpha_{k_i}(x^i; zeta)] in the eps -> 0 limit, zeta a mean-2 exponential time
/// independent of W. Each factor is given by its offsets; its order is offsets.order().
MomentResult exact_alpha_moment(std::span<const OffsetVector> factors, const MomentOptions& options = {});

/// E[prod_i gamma_{k_i}(x^i; zeta)], by expanding each gamma into alphas.
MomentResult exact_gamma_moment(std::span<const OffsetVector> factors, const MomentOptions& options = {});

}  // namespace ilt
