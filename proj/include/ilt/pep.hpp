#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace ilt {

/// c * z^power * exp(rate * z)
struct ExpPolyTerm {
    double coef = 0.0;
    int power = 0;
    double rate = 0.0;
    friend bool operator==(const ExpPolyTerm&, const ExpPolyTerm&) = default;
};

/// Raised when a full-line integral would diverge on an unbounded piece.
class NonIntegrableError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Function of one real variable: sorted breakpoints t_0 < ... < t_{r-1} split the line
/// into r + 1 pieces (-inf, t_0], [t_0, t_1], ..., [t_{r-1}, +inf), each carrying a sum of
/// ExpPolyTerms. Closed under multiplication by exp(-|z - a|) and under products, and
/// integrable in closed form.
class PiecewiseExpPoly {
public:
    using Terms = std::vector<ExpPolyTerm>;

    PiecewiseExpPoly() : pieces_(1) {}
    PiecewiseExpPoly(std::vector<double> breaks, std::vector<Terms> pieces);

    static PiecewiseExpPoly constant(double c);

    std::span<const double> breaks() const noexcept { return breaks_; }
    std::span<const Terms> pieces() const noexcept { return pieces_; }

    /// this(z) * exp(-|z - a|)
    PiecewiseExpPoly mul_abs_exp(double a) const;

    friend PiecewiseExpPoly operator*(const PiecewiseExpPoly& p, const PiecewiseExpPoly& q);

    double evaluate(double z) const;

    /// Exact integral over the real line. Throws NonIntegrableError when a nonzero term on an
    /// unbounded piece does not decay toward that end.
    double integrate_line() const;

    /// Exact integral over [a, b] with finite a <= b.
    double integrate(double a, double b) const;

private:
    PiecewiseExpPoly with_break(double a) const;

    std::vector<double> breaks_;
    std::vector<Terms> pieces_;
};

PiecewiseExpPoly pep_mul_abs_exp(const PiecewiseExpPoly& p, double a);
double pep_integrate_line(const PiecewiseExpPoly& p);

/// Center offset + slope * s of one exp(-|t - center(s)|) factor.
struct ShiftedCenter {
    double offset = 0.0;
    double slope = 0.0;
};

/// s -> integral over t of prod_q exp(-|t - (offset_q + slope_q s)|), as a PiecewiseExpPoly in s.
/// Requires at least one center.
PiecewiseExpPoly integrate_abs_exp_product(std::span<const ShiftedCenter> centers);

}  // namespace ilt
