#include "ilt/quadrature.hpp"

#include <algorithm>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ilt::quad {

QuadResult integrate(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth) {
    if (a == b) return {};
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, max_depth, rel_tol, &error);
    return {value, error};
}

QuadResult integrate_pieces(const Integrand& f, double a, double b, std::span<const double> breaks,
                            double rel_tol, unsigned max_depth) {
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin() + 1, pts.end() - 1);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    QuadResult total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto r = integrate(f, pts[i], pts[i + 1], rel_tol, max_depth);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

}  // namespace ilt::quad
