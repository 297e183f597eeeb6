#include "ilt/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "ilt/pep.hpp"
#include "ilt/quadrature.hpp"
#include "ilt/renorm.hpp"

namespace ilt {

std::vector<MappingS> enumerate_mappings(std::span<const int> orders) {
    if (orders.empty()) throw std::invalid_argument("enumerate_mappings: no factors");
    std::vector<int> seq;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 1) throw std::invalid_argument("enumerate_mappings: orders must be >= 1");
        seq.insert(seq.end(), static_cast<std::size_t>(orders[i]), static_cast<int>(i));
    }
    std::vector<MappingS> out;
    do {
        MappingS m;
        m.s = seq;
        m.c.resize(seq.size());
        std::vector<int> seen(orders.size(), 0);
        for (std::size_t p = 0; p < seq.size(); ++p) {
            m.c[p] = ++seen[static_cast<std::size_t>(seq[p])];
            if (p > 0 && seq[p] == seq[p - 1]) m.bad.push_back(static_cast<int>(p));
        }
        out.push_back(std::move(m));
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

namespace {

// g(z_i - z_j + shift)
struct CrossFactor {
    int i;
    int j;
    double shift;
};

// One mapping term: 2 * constant * integral over the difference variables of the cross factors.
// The first factor g(z_{s(0)}) is integrated out against the base variable, giving the 2.
struct MappingIntegrand {
    int base = 0;
    double constant = 1.0;
    std::vector<CrossFactor> cross;
};

MappingIntegrand build_integrand(const MappingS& m, std::span<const OffsetVector> factors) {
    // prefix[i][c] = sum_{j=2}^{c} x^i_j
    std::vector<std::vector<double>> prefix(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto comps = factors[i].components();
        prefix[i].assign(comps.size() + 2, 0.0);
        for (std::size_t j = 0; j < comps.size(); ++j) prefix[i][j + 2] = prefix[i][j + 1] + comps[j];
    }
    auto b = [&](std::size_t p) {
        return prefix[static_cast<std::size_t>(m.s[p])][static_cast<std::size_t>(m.c[p])];
    };

    MappingIntegrand out;
    out.base = m.s[0];
    for (std::size_t p = 1; p < m.s.size(); ++p) {
        const double shift = b(p) - b(p - 1);
        if (m.s[p] == m.s[p - 1]) out.constant *= green_g(shift);
        else out.cross.push_back({m.s[p], m.s[p - 1], shift});
    }
    return out;
}

std::vector<int> free_variables(const MappingIntegrand& f, int n) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i)
        if (i != f.base) v.push_back(i);
    return v;
}

double exact_mapping(const MappingIntegrand& f, int n) {
    const auto vars = free_variables(f, n);
    if (vars.empty()) return 2.0 * f.constant;

    const int u = vars[0];
    // Factors between u and the base, in the variable d_u = z_u - z_base.
    auto apply_base_u = [&](PiecewiseExpPoly p) {
        for (const auto& c : f.cross) {
            if (c.i == u && c.j == f.base) p = p.mul_abs_exp(-c.shift);
            else if (c.i == f.base && c.j == u) p = p.mul_abs_exp(c.shift);
        }
        return p;
    };

    if (vars.size() == 1) return 2.0 * f.constant * apply_base_u(PiecewiseExpPoly::constant(1.0)).integrate_line();

    if (vars.size() != 2) throw std::invalid_argument("exact moment route supports at most 3 factors");
    const int v = vars[1];
    // Eliminate d_v: every factor touching v is exp(-|d_v - center(d_u)|).
    std::vector<ShiftedCenter> centers;
    for (const auto& c : f.cross) {
        if (c.i == v) centers.push_back({-c.shift, c.j == u ? 1.0 : 0.0});
        else if (c.j == v) centers.push_back({c.shift, c.i == u ? 1.0 : 0.0});
    }
    if (centers.empty()) throw std::logic_error("exact_mapping: variable without factors");
    const PiecewiseExpPoly inner = integrate_abs_exp_product(centers);
    return 2.0 * f.constant * apply_base_u(inner).integrate_line();
}

struct QuadTotals {
    double value = 0.0;
    double error = 0.0;
};

QuadTotals quadrature_mapping(const MappingIntegrand& f, int n, double rel_tol) {
    const auto vars = free_variables(f, n);
    if (vars.empty()) return {2.0 * f.constant, 0.0};

    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<char> known(static_cast<std::size_t>(n), 0);
    known[static_cast<std::size_t>(f.base)] = 1;
    // Every integrand is a product of exp(-|.|) factors, so past the kinks plus the total shift
    // it decays at least like exp(-|t|) times a polynomial; truncate where that is negligible.
    double reach = 60.0;
    for (const auto& c : f.cross) reach += std::abs(c.shift);
    double outer_error = 0.0;
    double inner_error = 0.0;  // largest estimate seen at any nested level

    std::function<double(std::size_t)> level = [&](std::size_t r) -> double {
        if (r == vars.size()) {
            double prod = 1.0;
            for (const auto& c : f.cross)
                prod *= green_g(d[static_cast<std::size_t>(c.i)] - d[static_cast<std::size_t>(c.j)] + c.shift);
            return prod;
        }
        const auto cur = static_cast<std::size_t>(vars[r]);
        if (r + 1 == vars.size() && vars.size() >= 3) {
            // Innermost variable in closed form: every factor touching it is exp(-|d_cur - c|).
            // Only for n >= 4, so that for n <= 3 this route stays independent of the exact one.
            double prod = 1.0;
            std::vector<ShiftedCenter> centers;
            for (const auto& c : f.cross) {
                const auto ui = static_cast<std::size_t>(c.i);
                const auto uj = static_cast<std::size_t>(c.j);
                if (ui == cur) centers.push_back({d[uj] - c.shift, 0.0});
                else if (uj == cur) centers.push_back({d[ui] + c.shift, 0.0});
                else prod *= green_g(d[ui] - d[uj] + c.shift);
            }
            if (centers.empty()) throw std::logic_error("quadrature_mapping: variable without factors");
            return prod * integrate_abs_exp_product(centers).evaluate(0.0);
        }
        known[cur] = 1;
        // Kinks of factors whose other variable is already fixed.
        std::vector<double> kinks;
        for (const auto& c : f.cross) {
            const auto ui = static_cast<std::size_t>(c.i);
            const auto uj = static_cast<std::size_t>(c.j);
            if (!known[ui] || !known[uj]) continue;
            if (ui == cur) kinks.push_back(d[uj] - c.shift);
            else if (uj == cur) kinks.push_back(d[ui] + c.shift);
        }
        if (kinks.empty()) kinks.push_back(0.0);
        const auto [lo, hi] = std::minmax_element(kinks.begin(), kinks.end());
        const auto res = quad::integrate_pieces(
            [&](double t) {
                d[cur] = t;
                return level(r + 1);
            },
            *lo - reach, *hi + reach, kinks, rel_tol, 15);
        known[cur] = 0;
        if (r == 0) outer_error = res.error;
        else inner_error = std::max(inner_error, res.error);
        return res.value;
    };

    const double value = level(0);
    // Heuristic bound: the worst inner estimate, weighted by the mass of one exp(-|d|) factor
    // per enclosing quadrature level. The innermost variable is exact.
    const double levels = static_cast<double>(vars.size() >= 3 ? vars.size() - 2 : vars.size() - 1);
    const double inner_weight = std::pow(2.0, levels);
    const double scale = 2.0 * f.constant;
    return {scale * value, scale * (outer_error + inner_weight * inner_error)};
}

}  // namespace

MomentResult exact_alpha_moment(std::span<const OffsetVector> factors, const MomentOptions& options) {
    if (factors.empty()) throw std::invalid_argument("exact_alpha_moment: no factors");
    // Canonical factor order: the result is then exactly invariant under relabeling.
    std::vector<OffsetVector> sorted(factors.begin(), factors.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> orders;
    for (const auto& x : sorted) orders.push_back(x.order());
    const int n = static_cast<int>(sorted.size());

    MomentMethod method = options.method;
    if (method == MomentMethod::automatic) method = n <= 3 ? MomentMethod::exact : MomentMethod::quadrature;
    if (method == MomentMethod::exact && n > 3)
        throw std::invalid_argument("exact_alpha_moment: exact route supports at most 3 factors");

    MomentResult result;
    result.method = method;
    for (const auto& m : enumerate_mappings(orders)) {
        const auto integrand = build_integrand(m, sorted);
        if (method == MomentMethod::exact) {
            result.value += exact_mapping(integrand, n);
        } else {
            const auto q = quadrature_mapping(integrand, n, options.quadrature_rel_tol);
            result.value += q.value;
            result.error_bound += q.error;
        }
    }
    if (method == MomentMethod::quadrature)
        result.converged = std::isfinite(result.value) &&
                           result.error_bound <= options.acceptance_rel_error * std::abs(result.value);
    return result;
}

MomentResult exact_gamma_moment(std::span<const OffsetVector> factors, const MomentOptions& options) {
    if (factors.empty()) throw std::invalid_argument("exact_gamma_moment: no factors");
    const std::size_t n = factors.size();
    std::vector<std::uint32_t> full(n);
    for (std::size_t i = 0; i < n; ++i) full[i] = (1u << (factors[i].order() - 1)) - 1u;

    MomentResult total;
    std::vector<std::uint32_t> removed(n, 0);  // A_i for each factor
    std::vector<OffsetVector> subs(n);
    while (true) {
        double coef = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto comps = factors[i].components();
            for (std::size_t j = 0; j < comps.size(); ++j)
                if (removed[i] & (1u << j)) coef *= -green_g(comps[j]);
            subs[i] = factors[i].subset(full[i] & ~removed[i]);
        }
        const auto r = exact_alpha_moment(subs, options);
        total.method = r.method;
        total.value += coef * r.value;
        total.error_bound += std::abs(coef) * r.error_bound;
        total.converged = total.converged && r.converged;

        // Odometer over the subset tuple.
        std::size_t i = 0;
        while (i < n && removed[i] == full[i]) removed[i++] = 0;
        if (i == n) break;
        ++removed[i];
    }
    return total;
}

}  // namespace ilt
