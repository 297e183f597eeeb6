#pragma once

#include <string_view>

namespace ilt {

enum class MollifierShape {
    smooth_bump,   // exp(-1/(1-u^2)) on (-1, 1), C-infinity
    quartic_bump,  // (1-u^2)^2 on [-1, 1], only C^1
};

std::string_view to_string(MollifierShape shape) noexcept;
MollifierShape parse_mollifier_shape(std::string_view name);

/// 1 / integral_{-1}^{1} exp(-1/(1-u^2)) du.
inline constexpr double kSmoothBumpNormalization = 2.2522836210435810105;
/// 1 / integral_{-1}^{1} (1-u^2)^2 du = 15/16.
inline constexpr double kQuarticBumpNormalization = 15.0 / 16.0;

/// Mollification scale; always strictly positive.
class Epsilon {
public:
    explicit Epsilon(double value);
    double value() const noexcept { return value_; }
    friend bool operator==(const Epsilon&, const Epsilon&) = default;

private:
    double value_;
};

/// Approximate delta function f (unit mass, support [-1, 1], even, nonnegative) and
/// its scaled family f_eps(y) = f(y/eps)/eps.
class Mollifier {
public:
    explicit Mollifier(MollifierShape shape = MollifierShape::smooth_bump) noexcept;

    MollifierShape shape() const noexcept { return shape_; }
    double normalization() const noexcept { return normalization_; }

    double base(double u) const noexcept;
    double base_prime(double u) const noexcept;

    double f_eps(Epsilon eps, double y) const noexcept { return base(y / eps.value()) / eps.value(); }
    double f_eps_prime(Epsilon eps, double y) const noexcept {
        const double e = eps.value();
        return base_prime(y / e) / (e * e);
    }

    /// g_eps(x) = (f_eps * g)(x) with g(x) = exp(-|x|), by adaptive quadrature (memoized).
    double g_eps(Epsilon eps, double x) const;
    /// g_eps'(x) = (f_eps * g')(x) with g'(0) = 0 (memoized).
    double g_eps_prime(Epsilon eps, double x) const;

    friend bool operator==(const Mollifier&, const Mollifier&) = default;

private:
    MollifierShape shape_;
    double normalization_;
};

}  // namespace ilt
