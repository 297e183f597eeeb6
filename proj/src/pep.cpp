#include "ilt/pep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ilt {

namespace {

void add_term(PiecewiseExpPoly::Terms& terms, ExpPolyTerm t) {
    if (t.coef == 0.0) return;
    for (auto& e : terms) {
        if (e.power == t.power && e.rate == t.rate) {
            e.coef += t.coef;
            return;
        }
    }
    terms.push_back(t);
}

// Antiderivative of z^m e^{lambda z}.
double antiderivative(int m, double lambda, double z) {
    if (lambda == 0.0) return std::pow(z, m + 1) / (m + 1);
    double sum = 0.0;
    double falling = 1.0;  // m! / (m-j)!
    double lam_pow = lambda;
    for (int j = 0; j <= m; ++j) {
        const double sign = (j & 1) ? -1.0 : 1.0;
        sum += sign * falling * std::pow(z, m - j) / lam_pow;
        falling *= (m - j);
        lam_pow *= lambda;
    }
    return std::exp(lambda * z) * sum;
}

double integrate_terms(const PiecewiseExpPoly::Terms& terms, double lo, double hi, bool left_open,
                       bool right_open) {
    double acc = 0.0;
    for (const auto& t : terms) {
        if (t.coef == 0.0) continue;
        if ((left_open && !(t.rate > 0.0)) || (right_open && !(t.rate < 0.0)))
            throw NonIntegrableError("piecewise exp-poly: term does not decay on an unbounded piece");
        const double upper = right_open ? 0.0 : antiderivative(t.power, t.rate, hi);
        const double lower = left_open ? 0.0 : antiderivative(t.power, t.rate, lo);
        acc += t.coef * (upper - lower);
    }
    return acc;
}

}  // namespace

PiecewiseExpPoly::PiecewiseExpPoly(std::vector<double> breaks, std::vector<Terms> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
    if (pieces_.size() != breaks_.size() + 1)
        throw std::invalid_argument("PiecewiseExpPoly: need one more piece than breakpoints");
    if (!std::is_sorted(breaks_.begin(), breaks_.end()) ||
        std::adjacent_find(breaks_.begin(), breaks_.end()) != breaks_.end())
        throw std::invalid_argument("PiecewiseExpPoly: breakpoints must be strictly increasing");
}

PiecewiseExpPoly PiecewiseExpPoly::constant(double c) {
    PiecewiseExpPoly p;
    add_term(p.pieces_[0], {c, 0, 0.0});
    return p;
}

PiecewiseExpPoly PiecewiseExpPoly::with_break(double a) const {
    const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), a);
    if (it != breaks_.end() && *it == a) return *this;
    const auto idx = static_cast<std::size_t>(it - breaks_.begin());
    PiecewiseExpPoly out = *this;
    out.breaks_.insert(out.breaks_.begin() + static_cast<std::ptrdiff_t>(idx), a);
    out.pieces_.insert(out.pieces_.begin() + static_cast<std::ptrdiff_t>(idx), pieces_[idx]);
    return out;
}

PiecewiseExpPoly PiecewiseExpPoly::mul_abs_exp(double a) const {
    PiecewiseExpPoly out = with_break(a);
    const auto split = static_cast<std::size_t>(std::lower_bound(out.breaks_.begin(), out.breaks_.end(), a) -
                                                out.breaks_.begin());
    const double left_scale = std::exp(-a);
    const double right_scale = std::exp(a);
    // Pieces 0..split lie left of a, the rest to the right.
    for (std::size_t i = 0; i < out.pieces_.size(); ++i) {
        const bool left = i <= split;
        Terms next;
        for (const auto& t : out.pieces_[i]) {
            add_term(next, left ? ExpPolyTerm{t.coef * left_scale, t.power, t.rate + 1.0}
                                : ExpPolyTerm{t.coef * right_scale, t.power, t.rate - 1.0});
        }
        out.pieces_[i] = std::move(next);
    }
    return out;
}

PiecewiseExpPoly operator*(const PiecewiseExpPoly& p, const PiecewiseExpPoly& q) {
    std::vector<double> breaks;
    std::set_union(p.breaks_.begin(), p.breaks_.end(), q.breaks_.begin(), q.breaks_.end(),
                   std::back_inserter(breaks));
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    // Piece of `b` containing the merged piece that starts at lo_edge.
    auto piece_of = [](const std::vector<double>& b, double lo_edge) {
        return static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), lo_edge) - b.begin());
    };

    std::vector<PiecewiseExpPoly::Terms> pieces(breaks.size() + 1);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double lo_edge = i == 0 ? -std::numeric_limits<double>::infinity() : breaks[i - 1];
        const auto& pt = p.pieces_[piece_of(p.breaks_, lo_edge)];
        const auto& qt = q.pieces_[piece_of(q.breaks_, lo_edge)];
        for (const auto& a : pt)
            for (const auto& b : qt) add_term(pieces[i], {a.coef * b.coef, a.power + b.power, a.rate + b.rate});
    }
    return PiecewiseExpPoly(std::move(breaks), std::move(pieces));
}

double PiecewiseExpPoly::evaluate(double z) const {
    const auto idx = static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), z) - breaks_.begin());
    double acc = 0.0;
    for (const auto& t : pieces_[idx]) acc += t.coef * std::pow(z, t.power) * std::exp(t.rate * z);
    return acc;
}

double PiecewiseExpPoly::integrate_line() const {
    const double inf = std::numeric_limits<double>::infinity();
    if (breaks_.empty()) {
        for (const auto& t : pieces_[0])
            if (t.coef != 0.0) throw NonIntegrableError("piecewise exp-poly: nonzero function on the whole line");
        return 0.0;
    }
    double acc = integrate_terms(pieces_.front(), -inf, breaks_.front(), true, false);
    for (std::size_t i = 1; i + 1 < pieces_.size(); ++i)
        acc += integrate_terms(pieces_[i], breaks_[i - 1], breaks_[i], false, false);
    acc += integrate_terms(pieces_.back(), breaks_.back(), inf, false, true);
    return acc;
}

double PiecewiseExpPoly::integrate(double a, double b) const {
    if (!(std::isfinite(a) && std::isfinite(b)) || a > b)
        throw std::invalid_argument("PiecewiseExpPoly::integrate: need finite a <= b");
    double acc = 0.0;
    double lo = a;
    for (std::size_t i = 0; i < pieces_.size() && lo < b; ++i) {
        const double edge = i < breaks_.size() ? breaks_[i] : std::numeric_limits<double>::infinity();
        if (edge <= lo) continue;
        const double hi = std::min(edge, b);
        acc += integrate_terms(pieces_[i], lo, hi, false, false);
        lo = hi;
    }
    return acc;
}

PiecewiseExpPoly pep_mul_abs_exp(const PiecewiseExpPoly& p, double a) { return p.mul_abs_exp(a); }

double pep_integrate_line(const PiecewiseExpPoly& p) { return p.integrate_line(); }

PiecewiseExpPoly integrate_abs_exp_product(std::span<const ShiftedCenter> centers) {
    if (centers.empty()) throw std::invalid_argument("integrate_abs_exp_product: no factors");
    const std::size_t q = centers.size();
    const double qd = static_cast<double>(q);

    std::vector<double> breaks;
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i + 1; j < q; ++j)
            if (centers[i].slope != centers[j].slope)
                breaks.push_back((centers[j].offset - centers[i].offset) / (centers[i].slope - centers[j].slope));
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<PiecewiseExpPoly::Terms> pieces(breaks.size() + 1);
    std::vector<ShiftedCenter> c(centers.begin(), centers.end());
    for (std::size_t piece = 0; piece < pieces.size(); ++piece) {
        double s;
        if (breaks.empty()) s = 0.0;
        else if (piece == 0) s = breaks.front() - 1.0;
        else if (piece == breaks.size()) s = breaks.back() + 1.0;
        else s = 0.5 * (breaks[piece - 1] + breaks[piece]);
        std::sort(c.begin(), c.end(), [s](const ShiftedCenter& a, const ShiftedCenter& b) {
            return a.offset + a.slope * s < b.offset + b.slope * s;
        });

        // Affine forms in s are (offset, slope) pairs.
        double sum_o = 0.0, sum_sl = 0.0;
        for (const auto& x : c) {
            sum_o += x.offset;
            sum_sl += x.slope;
        }
        auto& terms = pieces[piece];
        auto exp_term = [&](double scale, double off, double slope, int power = 0) {
            add_term(terms, {scale * std::exp(off), power, slope});
        };

        // Tails.
        exp_term(1.0 / qd, qd * c.front().offset - sum_o, qd * c.front().slope - sum_sl);
        exp_term(1.0 / qd, sum_o - qd * c.back().offset, sum_sl - qd * c.back().slope);

        // Segments between consecutive centers.
        double below_o = 0.0, below_sl = 0.0;
        for (std::size_t i = 1; i < q; ++i) {
            below_o += c[i - 1].offset;
            below_sl += c[i - 1].slope;
            const double mu_o = below_o - (sum_o - below_o);
            const double mu_sl = below_sl - (sum_sl - below_sl);
            const double lambda = qd - 2.0 * static_cast<double>(i);
            const auto& lo = c[i - 1];
            const auto& hi = c[i];
            if (lambda != 0.0) {
                exp_term(1.0 / lambda, lambda * hi.offset + mu_o, lambda * hi.slope + mu_sl);
                exp_term(-1.0 / lambda, lambda * lo.offset + mu_o, lambda * lo.slope + mu_sl);
            } else {
                exp_term(hi.offset - lo.offset, mu_o, mu_sl, 0);
                exp_term(hi.slope - lo.slope, mu_o, mu_sl, 1);
            }
        }
    }
    return PiecewiseExpPoly(std::move(breaks), std::move(pieces));
}

}  // namespace ilt
