#pragma once

// Test-only reference computations. They deliberately avoid the library's DP, kernels and
// moment engine so they can serve as independent checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace ilt::testing {

inline double smooth_bump_unnormalized(double u) {
    const double t = 1.0 - u * u;
    return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

/// 1 / integral of exp(-1/(1-u^2)) over [-1, 1], by tanh-sinh quadrature.
inline double smooth_bump_normalization_oracle() {
    boost::math::quadrature::tanh_sinh<double> ts;
    return 1.0 / ts.integrate(smooth_bump_unnormalized, -1.0, 1.0, 1e-15);
}

/// dt^2 * sum_{0 <= m' < m <= M} f_eps(W_m - W_{m'} - x) with the smooth bump, written out directly.
inline double brute_force_alpha2(std::span<const double> w, double dt, double eps, double x) {
    const double norm = smooth_bump_normalization_oracle();
    double total = 0.0;
    for (std::size_t m = 1; m < w.size(); ++m)
        for (std::size_t mp = 0; mp < m; ++mp)
            total += norm * smooth_bump_unnormalized((w[m] - w[mp] - x) / eps) / eps;
    return total * dt * dt;
}

/// Adaptive Gauss-Kronrod over [a, b], split at the given interior points.
inline double gk_pieces(const std::function<double(double)>& f, double a, double b, std::vector<double> breaks,
                        double tol = 1e-12) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i] < a || breaks[i + 1] > b) continue;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, breaks[i], breaks[i + 1], 12, tol);
    }
    return total;
}

/// E[alpha_{k1}(x1; zeta) alpha_{k2}(x2; zeta)] for two factors by direct 2-D quadrature over
/// the absolute positions (z1, z2): sum over interleavings s of the product of
/// exp(-|pos_p - pos_{p-1}|), pos_{-1} = 0, pos_p = z_{s(p)} + x^{s(p)}_2 + ... + x^{s(p)}_{c(p)}.
inline double two_factor_moment_quadrature(const std::vector<double>& x1, const std::vector<double>& x2) {
    const std::vector<const std::vector<double>*> xs{&x1, &x2};
    std::vector<int> seq(x1.size() + 1, 0);
    seq.insert(seq.end(), x2.size() + 1, 1);
    double total = 0.0;
    do {
        // pos_p = z_{s(p)} + shift[p]
        std::vector<double> shift(seq.size());
        std::vector<int> count(2, 0);
        for (std::size_t p = 0; p < seq.size(); ++p) {
            const int i = seq[p];
            const int c = ++count[static_cast<std::size_t>(i)];
            double b = 0.0;
            for (int j = 0; j < c - 1; ++j) b += (*xs[static_cast<std::size_t>(i)])[static_cast<std::size_t>(j)];
            shift[p] = b;
        }
        auto integrand = [&](double z1, double z2) {
            const double z[2] = {z1, z2};
            double prev = 0.0, prod = 1.0;
            for (std::size_t p = 0; p < seq.size(); ++p) {
                const double pos = z[seq[p]] + shift[p];
                prod *= std::exp(-std::abs(pos - prev));
                prev = pos;
            }
            return prod;
        };
        // Kinks in z2 at fixed z1, and kinks in z1 of the inner integral.
        std::vector<double> c2;  // z2 = z1 + c2[i]
        std::vector<double> k2abs;  // z2 = const
        std::vector<double> k1abs;  // z1 = const
        for (std::size_t p = 0; p < seq.size(); ++p) {
            const int cur = seq[p];
            const int prv = p == 0 ? -1 : seq[p - 1];
            const double sp = p == 0 ? 0.0 : shift[p - 1];
            if (prv == -1) (cur == 0 ? k1abs : k2abs).push_back(-shift[p]);
            else if (cur != prv) c2.push_back(cur == 1 ? sp - shift[p] : shift[p] - sp);
        }
        for (double a : c2)
            for (double b : k2abs) k1abs.push_back(b - a);
        // Beyond 40 units past the outermost kink the integrand is below e^-40.
        auto inner = [&](double z1) {
            std::vector<double> br(k2abs);
            for (double a : c2) br.push_back(z1 + a);
            const auto [lo, hi] = std::minmax_element(br.begin(), br.end());
            return gk_pieces([&](double z2) { return integrand(z1, z2); }, *lo - 40.0, *hi + 40.0, br, 1e-12);
        };
        std::vector<double> br1(k1abs);
        if (br1.empty()) br1.push_back(0.0);
        const auto [lo1, hi1] = std::minmax_element(br1.begin(), br1.end());
        const double acc = gk_pieces(inner, *lo1 - 40.0, *hi1 + 40.0, br1, 1e-11);
        total += acc;
    } while (std::next_permutation(seq.begin(), seq.end()));
    return total;
}

}  // namespace ilt::testing
