#include "ilt/lab/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ilt::lab {

namespace {

using K = ExperimentKind;

constexpr std::array kAllKinds{K::mc_mean,         K::occupation_check, K::kink_scan,
                               K::eps_ladder,      K::mollifier_invariance, K::moment_verify,
                               K::derivative_continuity, K::inversion_check, K::dp_equivalence};

struct KeySpec {
    std::string_view key;
    std::vector<K> kinds;  // empty: every kind
};

const std::vector<K> kPathKinds{K::mc_mean,       K::occupation_check, K::kink_scan,
                                K::eps_ladder,    K::mollifier_invariance, K::moment_verify,
                                K::derivative_continuity, K::dp_equivalence};

// Order here is the order of the canonical text.
const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table{
        {"kind", {}},
        {"name", {}},
        {"seed", {}},
        {"k", {K::occupation_check, K::kink_scan, K::eps_ladder, K::derivative_continuity, K::inversion_check,
               K::dp_equivalence}},
        {"x", {K::mc_mean, K::moment_verify, K::mollifier_invariance}},
        {"functional", {K::mc_mean, K::moment_verify}},
        {"eps", {K::mc_mean, K::occupation_check, K::kink_scan, K::mollifier_invariance, K::moment_verify,
                 K::derivative_continuity}},
        {"eps_ladder", {K::eps_ladder}},
        {"dt", kPathKinds},
        {"horizon_mode", {K::mc_mean, K::moment_verify}},
        {"horizon", kPathKinds},
        {"replicas", {K::mc_mean, K::occupation_check, K::kink_scan, K::eps_ladder, K::mollifier_invariance,
                      K::moment_verify, K::derivative_continuity}},
        {"mollifier", {K::mc_mean, K::occupation_check, K::kink_scan, K::eps_ladder, K::mollifier_invariance,
                       K::moment_verify, K::derivative_continuity, K::dp_equivalence}},
        {"h", {K::kink_scan, K::derivative_continuity}},
        {"phi_sigma", {K::occupation_check}},
        {"x_step", {K::occupation_check}},
        {"x_fixed", {K::kink_scan, K::derivative_continuity, K::eps_ladder}},
        {"scan_index", {K::kink_scan, K::derivative_continuity}},
        {"x_span", {K::eps_ladder}},
        {"x_points", {K::eps_ladder}},
        {"trials", {K::inversion_check, K::dp_equivalence}},
        {"bias_rel", {K::mc_mean, K::moment_verify}},
        {"bias_abs", {K::mc_mean, K::moment_verify}},
        {"tolerance", {}},
        {"output_dir", {}},
    };
    return table;
}

const KeySpec* find_key(std::string_view key) {
    for (const auto& spec : key_table())
        if (spec.key == key) return &spec;
    return nullptr;
}

bool applies(const KeySpec& spec, K kind) {
    return spec.kinds.empty() || std::find(spec.kinds.begin(), spec.kinds.end(), kind) != spec.kinds.end();
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

ConfigError bad_value(std::string_view key, std::string_view value, std::string_view why) {
    return ConfigError("config key '" + std::string(key) + "': " + std::string(why) + " (got '" +
                       std::string(value) + "')");
}

double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw bad_value(key, text, "expected a finite number");
    return v;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
    Int v{};
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) throw bad_value(key, text, "expected an integer");
    return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    for (auto w : split_words(text)) out.push_back(parse_double(key, w));
    return out;
}

std::string fmt(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + fmt(v[i]);
    return out;
}

void require(bool ok, std::string_view key, std::string_view why) {
    if (!ok) throw ConfigError("config key '" + std::string(key) + "': " + std::string(why));
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
        case K::mc_mean: return "mc-mean";
        case K::occupation_check: return "occupation-check";
        case K::kink_scan: return "kink-scan";
        case K::eps_ladder: return "eps-ladder";
        case K::mollifier_invariance: return "mollifier-invariance";
        case K::moment_verify: return "moment-verify";
        case K::derivative_continuity: return "derivative-continuity";
        case K::inversion_check: return "inversion-check";
        case K::dp_equivalence: return "dp-equivalence";
    }
    return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
    for (K k : kAllKinds)
        if (to_string(k) == name) return k;
    throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

std::string format_offsets(const OffsetVector& x) {
    std::string out = "(";
    const auto c = x.components();
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + fmt(c[i]);
    return out + ")";
}

std::string format_cases(const std::vector<MomentCase>& cases) {
    std::string out;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (i) out += " | ";
        for (std::size_t j = 0; j < cases[i].size(); ++j) out += (j ? " " : "") + format_offsets(cases[i][j]);
    }
    return out;
}

std::vector<MomentCase> parse_cases(std::string_view text) {
    std::vector<MomentCase> cases(1);
    std::size_t i = 0;
    while (i < text.size()) {
        const char ch = text[i];
        if (ch == ' ' || ch == '\t') {
            ++i;
        } else if (ch == '|') {
            if (cases.back().empty()) throw bad_value("x", text, "empty case before '|'");
            cases.emplace_back();
            ++i;
        } else if (ch == '(') {
            const auto close = text.find(')', i);
            if (close == std::string_view::npos) throw bad_value("x", text, "unbalanced '('");
            const auto inner = text.substr(i + 1, close - i - 1);
            if (inner.find('(') != std::string_view::npos) throw bad_value("x", text, "nested '('");
            cases.back().emplace_back(parse_list("x", inner));
            i = close + 1;
        } else {
            throw bad_value("x", text, "offset vectors are written as (x_2, ..., x_k)");
        }
    }
    if (cases.back().empty()) throw bad_value("x", text, "no offset vectors");
    return cases;
}

std::string ExperimentConfig::canonical_text() const {
    const auto all = settings();
    std::string out;
    for (const auto& spec : key_table()) {
        if (spec.key == "output_dir" || !applies(spec, kind)) continue;
        const auto it = all.find(std::string(spec.key));
        if (it == all.end()) continue;
        out += std::string(spec.key) + " = " + it->second + "\n";
    }
    return out;
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::map<std::string, std::string> ExperimentConfig::settings() const {
    std::map<std::string, std::string> all{
        {"kind", std::string(to_string(kind))},
        {"name", name},
        {"seed", std::to_string(seed)},
        {"k", std::to_string(k)},
        {"x", format_cases(cases)},
        {"functional", functional == Functional::alpha ? "alpha" : "gamma"},
        {"eps", fmt(eps)},
        {"eps_ladder", fmt_list(eps_ladder)},
        {"dt", fmt(dt)},
        {"horizon_mode", horizon_mode == HorizonMode::fixed ? "fixed" : "killed"},
        {"horizon", fmt(horizon)},
        {"replicas", std::to_string(replicas)},
        {"h", fmt(h)},
        {"phi_sigma", fmt(phi_sigma)},
        {"x_step", fmt(effective_x_step())},
        {"x_fixed", fmt_list(x_fixed)},
        {"scan_index", std::to_string(scan_index)},
        {"x_span", fmt(x_span)},
        {"x_points", std::to_string(x_points)},
        {"trials", std::to_string(trials)},
        {"bias_rel", fmt(bias_rel)},
        {"bias_abs", fmt(bias_abs)},
        {"output_dir", output_dir.string()},
    };
    std::string shapes;
    for (std::size_t i = 0; i < mollifiers.size(); ++i) shapes += (i ? " " : "") + std::string(to_string(mollifiers[i]));
    all["mollifier"] = shapes;
    if (tolerance) all["tolerance"] = fmt(*tolerance);
    std::map<std::string, std::string> out;
    for (const auto& spec : key_table()) {
        if (!applies(spec, kind)) continue;
        const auto it = all.find(std::string(spec.key));
        if (it != all.end()) out.insert(*it);
    }
    return out;
}

ExperimentConfig parse_config(std::string_view text) {
    std::map<std::string, std::string, std::less<>> raw;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v(line);
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key(trim(v.substr(0, eq)));
        const std::string value(trim(v.substr(eq + 1)));
        if (!find_key(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!raw.emplace(key, value).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    const auto kind_it = raw.find("kind");
    if (kind_it == raw.end()) throw ConfigError("config key 'kind' is required");

    ExperimentConfig c;
    c.kind = parse_experiment_kind(kind_it->second);
    c.name = std::string(to_string(c.kind));
    for (const auto& [key, value] : raw) {
        const KeySpec* spec = find_key(key);
        if (!applies(*spec, c.kind))
            throw ConfigError("config key '" + key + "' does not apply to kind " + std::string(to_string(c.kind)));
        if (key == "kind") continue;
        if (key == "name") {
            require(!value.empty() && value.find_first_of(",\"/\\") == std::string::npos, key,
                    "must be nonempty, without commas, quotes or slashes");
            c.name = value;
        } else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, value);
        else if (key == "k") c.k = parse_int<int>(key, value);
        else if (key == "x") c.cases = parse_cases(value);
        else if (key == "functional") {
            if (value == "alpha") c.functional = Functional::alpha;
            else if (value == "gamma") c.functional = Functional::gamma;
            else throw bad_value(key, value, "expected alpha or gamma");
        } else if (key == "eps") c.eps = parse_double(key, value);
        else if (key == "eps_ladder") c.eps_ladder = parse_list(key, value);
        else if (key == "dt") c.dt = parse_double(key, value);
        else if (key == "horizon_mode") {
            if (value == "fixed") c.horizon_mode = HorizonMode::fixed;
            else if (value == "killed") c.horizon_mode = HorizonMode::killed;
            else throw bad_value(key, value, "expected fixed or killed");
        } else if (key == "horizon") c.horizon = parse_double(key, value);
        else if (key == "replicas") c.replicas = parse_int<std::size_t>(key, value);
        else if (key == "mollifier") {
            c.mollifiers.clear();
            for (auto w : split_words(value)) {
                try {
                    c.mollifiers.push_back(parse_mollifier_shape(w));
                } catch (const std::invalid_argument&) {
                    throw bad_value(key, value, "expected smooth_bump and/or quartic_bump");
                }
            }
        } else if (key == "output_dir") c.output_dir = value;
        else if (key == "h") c.h = parse_double(key, value);
        else if (key == "phi_sigma") c.phi_sigma = parse_double(key, value);
        else if (key == "x_step") c.x_step = parse_double(key, value);
        else if (key == "x_fixed") c.x_fixed = parse_list(key, value);
        else if (key == "scan_index") c.scan_index = parse_int<int>(key, value);
        else if (key == "x_span") c.x_span = parse_double(key, value);
        else if (key == "x_points") c.x_points = parse_int<int>(key, value);
        else if (key == "trials") c.trials = parse_int<std::size_t>(key, value);
        else if (key == "bias_rel") c.bias_rel = parse_double(key, value);
        else if (key == "bias_abs") c.bias_abs = parse_double(key, value);
        else if (key == "tolerance") c.tolerance = parse_double(key, value);
    }
    // Kind-specific defaults that differ from the struct defaults.
    if (c.kind == K::mc_mean && !raw.contains("bias_rel") && !raw.contains("bias_abs")) {
        if (c.functional == Functional::alpha) c.bias_rel = 0.05;
        else c.bias_abs = 0.02;
    }
    // A killed horizon clamps zeta at 20 time units unless told otherwise.
    if (c.horizon_mode == HorizonMode::killed && !raw.contains("horizon")) c.horizon = 20.0;
    if (c.kind == K::mollifier_invariance && !raw.contains("mollifier"))
        c.mollifiers = {MollifierShape::smooth_bump, MollifierShape::quartic_bump};
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const ExperimentConfig& c) {
    const bool path_kind = std::find(kPathKinds.begin(), kPathKinds.end(), c.kind) != kPathKinds.end();
    if (path_kind) {
        require(c.dt > 0.0 && c.dt < 1.0, "dt", "must lie in (0, 1)");
        require(c.horizon > 0.0, "horizon", "must be positive");
        const double steps = std::round(c.horizon / c.dt);
        require(steps >= 1.0 && steps <= 5e7, "horizon", "horizon / dt must be between 1 and 5e7 steps");
        require(!c.mollifiers.empty(), "mollifier", "at least one shape is required");
    }
    require(c.replicas >= 1, "replicas", "must be at least 1");
    if (c.tolerance) require(*c.tolerance > 0.0, "tolerance", "must be positive");

    auto require_eps = [&] { require(c.eps > 0.0, "eps", "must be positive"); };
    auto require_cases = [&](bool single_factor) {
        require(!c.cases.empty(), "x", "at least one offset vector is required");
        for (const auto& cs : c.cases) {
            require(!single_factor || cs.size() == 1, "x", "each case must be a single offset vector");
            require(cs.size() <= 4, "x", "at most 4 factors per moment");
        }
    };
    auto require_scan = [&] {
        require(c.k >= 2 && c.k <= 6, "k", "must lie in [2, 6]");
        require(c.scan_index >= 2 && c.scan_index <= c.k, "scan_index", "must lie in [2, k]");
        require(static_cast<int>(c.x_fixed.size()) == c.k - 2, "x_fixed", "needs exactly k - 2 values");
    };

    switch (c.kind) {
        case K::mc_mean:
        case K::moment_verify:
            require_eps();
            require_cases(false);
            require(c.replicas >= 2, "replicas", "a standard error needs at least 2 replicas");
            require(c.bias_rel >= 0.0 && c.bias_abs >= 0.0, "bias_rel", "bias budgets must be nonnegative");
            break;
        case K::occupation_check:
            require_eps();
            require(c.k == 2 || c.k == 3, "k", "must be 2 or 3");
            require(c.phi_sigma > 0.0, "phi_sigma", "must be positive");
            require(c.effective_x_step() > 0.0, "x_step", "must be positive");
            break;
        case K::kink_scan:
        case K::derivative_continuity:
            require_eps();
            require_scan();
            require(c.h > c.eps, "h", "must exceed eps; the kink is invisible below the mollification scale");
            break;
        case K::eps_ladder:
            require(c.eps_ladder.size() >= 3, "eps_ladder", "needs at least 3 values");
            for (std::size_t i = 0; i < c.eps_ladder.size(); ++i) {
                require(c.eps_ladder[i] > 0.0, "eps_ladder", "values must be positive");
                require(i == 0 || c.eps_ladder[i] < c.eps_ladder[i - 1], "eps_ladder", "values must decrease");
            }
            require(c.k >= 2 && c.k <= 4, "k", "must lie in [2, 4]");
            require(static_cast<int>(c.x_fixed.size()) == c.k - 2, "x_fixed", "needs exactly k - 2 values");
            require(c.x_span >= 0.0, "x_span", "must be nonnegative");
            require(c.x_points >= 1, "x_points", "must be at least 1");
            break;
        case K::mollifier_invariance:
            require_eps();
            require_cases(true);
            require(c.mollifiers.size() == 2 && c.mollifiers[0] != c.mollifiers[1], "mollifier",
                    "needs two different shapes");
            break;
        case K::inversion_check:
            require(c.k >= 2 && c.k <= 20, "k", "must lie in [2, 20]");
            require(c.trials >= 1, "trials", "must be at least 1");
            break;
        case K::dp_equivalence:
            require(c.k >= 1 && c.k <= 4, "k", "must lie in [1, 4]");
            require(c.trials >= 1, "trials", "must be at least 1");
            break;
    }
}

}  // namespace ilt::lab
