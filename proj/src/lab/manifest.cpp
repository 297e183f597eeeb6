#include "ilt/lab/manifest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#ifndef ILT_VERSION
#define ILT_VERSION "0.0.0"
#endif

namespace ilt::lab {

using nlohmann::json;

MCEstimate MCEstimate::from(std::vector<double> values) {
    MCEstimate e;
    e.n = values.size();
    if (e.n == 0) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / static_cast<double>(e.n);
    if (e.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        e.stderr_ = std::sqrt(ss / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
    }
    e.values = std::move(values);
    return e;
}

bool ResultManifest::passed() const {
    if (metrics.empty()) return false;  // nothing was checked
    for (const auto& m : metrics)
        if (!m.pass) return false;
    return true;
}

std::string code_version() { return "ilt-lab " ILT_VERSION; }

namespace {

// JSON has no NaN or infinity; such values travel as strings.
json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double to_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw std::runtime_error("manifest: expected a number, got '" + s + "'");
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::optional<double> to_optional(const json& j) {
    if (j.is_null()) return std::nullopt;
    return to_number(j);
}

std::string csv_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(file.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory " + file.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace

std::string manifest_to_json(const ResultManifest& m) {
    json metrics = json::array();
    for (const auto& r : m.metrics) {
        json values = json::array();
        for (double v : r.replica_values) values.push_back(number(v));
        metrics.push_back({{"name", r.name},
                           {"value", number(r.value)},
                           {"target", optional_number(r.target)},
                           {"stderr", optional_number(r.stderr_)},
                           {"tolerance", number(r.tolerance)},
                           {"pass", r.pass},
                           {"provenance", r.provenance},
                           {"note", r.note},
                           {"replica_values", values}});
    }
    const json j{{"experiment", m.experiment},     {"kind", m.kind},       {"config_hash", m.config_hash},
                 {"code_version", m.code_version}, {"seed", m.seed},       {"wall_time_s", m.wall_time_s},
                 {"config", m.config},             {"metrics", metrics}, {"passed", m.passed()}};
    return j.dump(2) + "\n";
}

ResultManifest manifest_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        ResultManifest m;
        m.experiment = j.at("experiment").get<std::string>();
        m.kind = j.at("kind").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::string>();
        m.code_version = j.at("code_version").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.wall_time_s = j.at("wall_time_s").get<double>();
        m.config = j.at("config").get<std::map<std::string, std::string>>();
        for (const auto& r : j.at("metrics")) {
            MetricRecord rec;
            rec.name = r.at("name").get<std::string>();
            rec.value = to_number(r.at("value"));
            rec.target = to_optional(r.at("target"));
            rec.stderr_ = to_optional(r.at("stderr"));
            rec.tolerance = to_number(r.at("tolerance"));
            rec.pass = r.at("pass").get<bool>();
            rec.provenance = r.at("provenance").get<std::string>();
            rec.note = r.at("note").get<std::string>();
            for (const auto& v : r.at("replica_values")) rec.replica_values.push_back(to_number(v));
            m.metrics.push_back(std::move(rec));
        }
        return m;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed manifest: ") + e.what());
    }
}

std::string manifest_to_csv(const ResultManifest& m) {
    std::ostringstream out;
    out << "experiment,metric,value,stderr,tolerance,pass,seed,config_hash\n";
    for (const auto& r : m.metrics) {
        out << csv_field(m.experiment) << ',' << csv_field(r.name) << ',' << csv_number(r.value) << ','
            << (r.stderr_ ? csv_number(*r.stderr_) : "") << ',' << csv_number(r.tolerance) << ','
            << (r.pass ? "true" : "false") << ',' << m.seed << ',' << m.config_hash << '\n';
    }
    return out.str();
}

void write_manifest(const std::filesystem::path& file, const ResultManifest& manifest) {
    write_text(file, manifest_to_json(manifest));
}

ResultManifest read_manifest(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return manifest_from_json(ss.str());
}

void export_table(const ResultManifest& manifest, TableFormat format, const std::filesystem::path& file) {
    write_text(file, format == TableFormat::csv ? manifest_to_csv(manifest) : manifest_to_json(manifest));
}

}  // namespace ilt::lab
