#include "ilt/lab/runner.hpp"

#include <chrono>
#include <cstdlib>

#include "ilt/lab/experiments.hpp"

namespace ilt::lab {

unsigned resolve_threads(unsigned requested) noexcept {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

ResultManifest run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    ResultManifest m;
    m.experiment = config.name;
    m.kind = std::string(to_string(config.kind));
    m.config_hash = config.hash();
    m.code_version = code_version();
    m.seed = config.seed;
    m.config = config.settings();
    m.config.erase("output_dir");
    m.metrics = run_metrics(config, resolve_threads(options.threads));
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return m;
}

std::filesystem::path output_root() {
    if (const char* env = std::getenv("ILT_LAB_OUTPUT_ROOT"); env && *env) return env;
    return std::filesystem::current_path();
}

WrittenFiles write_outputs(const ResultManifest& manifest, const ExperimentConfig& config,
                           const std::filesystem::path& root) {
    const auto dir = config.output_dir.is_absolute() ? config.output_dir : root / config.output_dir;
    WrittenFiles files{dir / (config.name + ".manifest.json"), dir / (config.name + ".csv")};
    write_manifest(files.manifest, manifest);
    export_table(manifest, TableFormat::csv, files.table);
    return files;
}

}  // namespace ilt::lab
