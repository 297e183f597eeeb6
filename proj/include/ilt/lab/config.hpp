#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ilt/mollifier.hpp"
#include "ilt/simplex.hpp"

namespace ilt::lab {

enum class ExperimentKind {
    mc_mean,
    occupation_check,
    kink_scan,
    eps_ladder,
    mollifier_invariance,
    moment_verify,
    derivative_continuity,
    inversion_check,
    dp_equivalence,
};

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);

enum class HorizonMode { fixed, killed };
enum class Functional { alpha, gamma };

/// Raised for any malformed or inconsistent configuration; `what()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One product moment E[prod_i F(x^i)]: its factors' offsets.
using MomentCase = std::vector<OffsetVector>;

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::mc_mean;
    std::string name;
    int k = 2;
    std::vector<MomentCase> cases;  // key "x"
    Functional functional = Functional::alpha;
    double eps = 0.05;
    std::vector<double> eps_ladder;
    double dt = 1e-3;
    HorizonMode horizon_mode = HorizonMode::fixed;
    double horizon = 1.0;  // T for fixed; the clamp on zeta for killed
    std::size_t replicas = 1;
    std::uint64_t seed = 1;
    std::vector<MollifierShape> mollifiers{MollifierShape::smooth_bump};
    std::filesystem::path output_dir = ".";
    double h = 0.05;
    double phi_sigma = 0.5;
    std::optional<double> x_step;  // defaults to eps / 5
    std::vector<double> x_fixed;
    int scan_index = 2;
    double x_span = 0.5;
    int x_points = 21;
    std::size_t trials = 100;
    double bias_rel = 0.0;
    double bias_abs = 0.0;
    std::optional<double> tolerance;

    /// Canonical `key = value` text of every setting that influences results (not output_dir).
    std::string canonical_text() const;
    /// 16 hex digits of FNV-1a over canonical_text().
    std::string hash() const;
    /// The settings as strings, for the manifest.
    std::map<std::string, std::string> settings() const;

    double effective_x_step() const { return x_step.value_or(eps / 5.0); }
    const Mollifier primary_mollifier() const { return Mollifier(mollifiers.front()); }
};

/// Parses the flat `key = value` format: one setting per line, '#' starts a comment, unknown
/// keys and keys that do not apply to the chosen kind are rejected, then validate() runs.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Throws ConfigError when a value is out of range for the kind.
void validate(const ExperimentConfig& config);

/// "(0) (0.5, 0.1) ()" -> three offset vectors; '|' separates moment cases.
std::vector<MomentCase> parse_cases(std::string_view text);
std::string format_cases(const std::vector<MomentCase>& cases);
std::string format_offsets(const OffsetVector& x);

}  // namespace ilt::lab
