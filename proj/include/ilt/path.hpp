#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ilt/rng.hpp"

namespace ilt {

/// Uniform time grid 0, dt, 2dt, ..., n_steps*dt.
class TimeGrid {
public:
    TimeGrid(double dt, std::size_t n_steps);

    /// Grid with n_steps = round(horizon / dt).
    static TimeGrid from_horizon(double horizon, double dt);

    double dt() const noexcept { return dt_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    double horizon() const noexcept { return dt_ * static_cast<double>(n_steps_); }
    double time(std::size_t m) const noexcept { return dt_ * static_cast<double>(m); }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double dt_;
    std::size_t n_steps_;
};

/// Discretized one-dimensional Brownian path W_0 = 0, W_1, ..., W_N, optionally killed.
///
/// When killed_at = K is present the path is only meaningful on [0, K*dt]; all
/// path functionals stop at index K.
class BrownianPath {
public:
    BrownianPath(TimeGrid grid, std::vector<double> values,
                 std::optional<std::size_t> killed_at = std::nullopt,
                 std::optional<double> killing_time = std::nullopt);

    const TimeGrid& grid() const noexcept { return grid_; }
    double dt() const noexcept { return grid_.dt(); }
    std::span<const double> values() const noexcept { return values_; }
    std::optional<std::size_t> killed_at() const noexcept { return killed_at_; }
    /// The raw exponential time the path was killed at (before grid rounding), if any.
    std::optional<double> killing_time() const noexcept { return killing_time_; }

    /// Last index the functionals use: K when killed, N otherwise.
    std::size_t last_index() const noexcept { return killed_at_.value_or(grid_.n_steps()); }
    /// The grid time of last_index().
    double effective_horizon() const noexcept { return grid_.time(last_index()); }
    /// W_0 .. W_{last_index()}.
    std::span<const double> effective_values() const noexcept {
        return std::span<const double>(values_).first(last_index() + 1);
    }

    friend bool operator==(const BrownianPath&, const BrownianPath&) = default;

private:
    TimeGrid grid_;
    std::vector<double> values_;
    std::optional<std::size_t> killed_at_;
    std::optional<double> killing_time_;
};

/// Mean-2 exponential time, density (1/2) exp(-t/2), independent of the increments stream.
double sample_killing_time(const RandomSeed& seed);

/// Brownian path on `grid`. With `kill` set, killed_at = min(ceil(zeta/dt), n_steps).
BrownianPath sample_path(const RandomSeed& seed, const TimeGrid& grid, bool kill);

/// Halves dt by inserting Brownian-bridge midpoints; the original points are kept.
BrownianPath refine_path(const BrownianPath& path, const RandomSeed& seed);

// Binary archive: "ILTPATH1", f64 dt, u64 n_steps, i64 killed_at (-1 if none),
// f64 killing time (NaN if none), then n_steps + 1 f64 values. Little-endian host order.
void write_path(std::ostream& out, const BrownianPath& path);
BrownianPath read_path(std::istream& in);
void save_path(const std::filesystem::path& file, const BrownianPath& path);
BrownianPath load_path(const std::filesystem::path& file);

}  // namespace ilt
