#include "ilt/path.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ilt {

namespace {

constexpr std::uint64_t kIncrementStream = 0;
constexpr std::uint64_t kKillingStream = 1;
constexpr std::uint64_t kBridgeStream = 2;
constexpr std::array<char, 8> kMagic = {'I', 'L', 'T', 'P', 'A', 'T', 'H', '1'};

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("read_path: truncated archive");
    return v;
}

}  // namespace

TimeGrid::TimeGrid(double dt, std::size_t n_steps) : dt_(dt), n_steps_(n_steps) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("TimeGrid: dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
}

TimeGrid TimeGrid::from_horizon(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0)) throw std::invalid_argument("TimeGrid: horizon and dt must be positive");
    const double steps = std::round(horizon / dt);
    if (steps < 1.0) throw std::invalid_argument("TimeGrid: horizon shorter than one step");
    return TimeGrid(dt, static_cast<std::size_t>(steps));
}

BrownianPath::BrownianPath(TimeGrid grid, std::vector<double> values,
                           std::optional<std::size_t> killed_at, std::optional<double> killing_time)
    : grid_(grid), values_(std::move(values)), killed_at_(killed_at), killing_time_(killing_time) {
    if (values_.size() != grid_.n_steps() + 1)
        throw std::invalid_argument("BrownianPath: expected n_steps + 1 values");
    if (killed_at_ && *killed_at_ > grid_.n_steps())
        throw std::invalid_argument("BrownianPath: killed_at beyond the grid");
}

double sample_killing_time(const RandomSeed& seed) {
    Xoshiro256pp gen(seed.stream(kKillingStream));
    // Inverse CDF of the mean-2 exponential; 1 - U lies in (0, 1].
    return -2.0 * std::log(1.0 - gen.uniform01());
}

BrownianPath sample_path(const RandomSeed& seed, const TimeGrid& grid, bool kill) {
    NormalSampler normal(seed.stream(kIncrementStream));
    const double sd = std::sqrt(grid.dt());
    std::vector<double> w(grid.n_steps() + 1);
    w[0] = 0.0;
    for (std::size_t m = 1; m < w.size(); ++m) w[m] = w[m - 1] + sd * normal();

    if (!kill) return BrownianPath(grid, std::move(w));

    const double zeta = sample_killing_time(seed);
    const double steps = std::ceil(zeta / grid.dt());
    const auto n = static_cast<double>(grid.n_steps());
    const auto k = static_cast<std::size_t>(std::min(steps, n));
    return BrownianPath(grid, std::move(w), k, zeta);
}

BrownianPath refine_path(const BrownianPath& path, const RandomSeed& seed) {
    NormalSampler normal(seed.stream(kBridgeStream));
    const TimeGrid fine(path.dt() / 2.0, path.grid().n_steps() * 2);
    // Midpoint of a bridge over dt has variance dt/4.
    const double sd = std::sqrt(path.dt()) / 2.0;
    const auto coarse = path.values();
    std::vector<double> w(fine.n_steps() + 1);
    for (std::size_t m = 0; m + 1 < coarse.size(); ++m) {
        w[2 * m] = coarse[m];
        w[2 * m + 1] = 0.5 * (coarse[m] + coarse[m + 1]) + sd * normal();
    }
    w.back() = coarse.back();
    std::optional<std::size_t> killed;
    if (path.killed_at()) killed = *path.killed_at() * 2;
    return BrownianPath(fine, std::move(w), killed, path.killing_time());
}

void write_path(std::ostream& out, const BrownianPath& path) {
    out.write(kMagic.data(), kMagic.size());
    put<double>(out, path.dt());
    put<std::uint64_t>(out, path.grid().n_steps());
    put<std::int64_t>(out, path.killed_at() ? static_cast<std::int64_t>(*path.killed_at()) : -1);
    put<double>(out, path.killing_time().value_or(std::numeric_limits<double>::quiet_NaN()));
    const auto v = path.values();
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
    if (!out) throw std::runtime_error("write_path: stream failure");
}

BrownianPath read_path(std::istream& in) {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error("read_path: not a path archive");
    const auto dt = get<double>(in);
    const auto n = get<std::uint64_t>(in);
    const auto killed = get<std::int64_t>(in);
    const auto zeta = get<double>(in);
    std::vector<double> values(n + 1);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_path: truncated archive");
    std::optional<std::size_t> k;
    if (killed >= 0) k = static_cast<std::size_t>(killed);
    std::optional<double> z;
    if (!std::isnan(zeta)) z = zeta;
    return BrownianPath(TimeGrid(dt, n), std::move(values), k, z);
}

void save_path(const std::filesystem::path& file, const BrownianPath& path) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("save_path: cannot open " + file.string());
    write_path(out, path);
}

BrownianPath load_path(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("load_path: cannot open " + file.string());
    return read_path(in);
}

}  // namespace ilt
