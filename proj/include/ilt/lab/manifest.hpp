#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ilt::lab {

/// Monte Carlo summary: stderr = sample sd / sqrt(n), present only for n >= 2.
struct MCEstimate {
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> stderr_;
    std::vector<double> values;

    static MCEstimate from(std::vector<double> values);
    friend bool operator==(const MCEstimate&, const MCEstimate&) = default;
};

struct MetricRecord {
    std::string name;
    double value = 0.0;
    std::optional<double> target;
    std::optional<double> stderr_;
    double tolerance = 0.0;
    bool pass = false;
    std::string provenance;  // which identity or property the metric witnesses
    std::string note;        // free text: failure reasons, auxiliary numbers
    std::vector<double> replica_values;

    friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

struct ResultManifest {
    std::string experiment;
    std::string kind;
    std::string config_hash;
    std::string code_version;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    std::map<std::string, std::string> config;
    std::vector<MetricRecord> metrics;

    bool passed() const;
    friend bool operator==(const ResultManifest&, const ResultManifest&) = default;
};

std::string code_version();

std::string manifest_to_json(const ResultManifest& manifest);
/// Throws std::runtime_error on malformed input.
ResultManifest manifest_from_json(const std::string& text);

std::string manifest_to_csv(const ResultManifest& manifest);

void write_manifest(const std::filesystem::path& file, const ResultManifest& manifest);
ResultManifest read_manifest(const std::filesystem::path& file);

enum class TableFormat { csv, json };

/// Writes the manifest as CSV or JSON; I/O failures throw std::runtime_error.
void export_table(const ResultManifest& manifest, TableFormat format, const std::filesystem::path& file);

}  // namespace ilt::lab
