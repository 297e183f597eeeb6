#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "ilt/lab/acceptance_matrix.hpp"
#include "ilt/lab/runner.hpp"

namespace fs = std::filesystem;
using namespace ilt::lab;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfigError = 2;
constexpr int kIoError = 3;

void print_manifest(const ResultManifest& m) {
    std::cout << m.experiment << " [" << m.kind << "] hash " << m.config_hash << ", " << m.wall_time_s << " s\n";
    for (const auto& r : m.metrics) {
        std::cout << "  " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << " = " << r.value;
        if (r.target) std::cout << " (target " << *r.target << ", tolerance " << r.tolerance << ")";
        else std::cout << " (tolerance " << r.tolerance << ")";
        std::cout << "\n";
        if (!r.pass && !r.note.empty()) std::cout << "        " << r.note << "\n";
    }
}

int run_command(const fs::path& file, const RunOptions& options) {
    if (!fs::exists(file)) {
        std::cerr << "ilt-lab: config file not found: " << file << "\n";
        return kIoError;
    }
    const auto config = load_config(file);
    const auto manifest = run_experiment(config, options);
    const auto written = write_outputs(manifest, config, output_root());
    print_manifest(manifest);
    std::cout << "wrote " << written.manifest.string() << " and " << written.table.string() << "\n";
    return manifest.passed() ? kPass : kFail;
}

int verify_all(const std::set<int>& only, bool write, const RunOptions& options) {
    bool all = true;
    for (const auto& criterion : acceptance_matrix()) {
        if (!only.empty() && !only.contains(criterion.id)) continue;
        const auto outcome = run_criterion(criterion, options);
        std::cout << format_outcome(outcome) << std::endl;
        if (write)
            for (std::size_t i = 0; i < outcome.manifests.size(); ++i)
                write_outputs(outcome.manifests[i], criterion.experiments[i], output_root());
        all = all && outcome.pass;
    }
    return all ? kPass : kFail;
}

int export_command(const fs::path& file, const std::string& format, const std::string& output) {
    const auto manifest = read_manifest(file);
    const auto fmt = format == "csv" ? TableFormat::csv : TableFormat::json;
    if (output.empty() || output == "-") {
        std::cout << (fmt == TableFormat::csv ? manifest_to_csv(manifest) : manifest_to_json(manifest));
        return kPass;
    }
    export_table(manifest, fmt, output);
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intersection local time laboratory"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: all cores)");

    auto* run = app.add_subcommand("run", "Run one experiment from a config file");
    std::string config_file;
    run->add_option("config", config_file, "Experiment config file")->required();

    auto* verify = app.add_subcommand("verify-all", "Run the acceptance matrix");
    std::vector<int> only;
    bool write = false;
    verify->add_option("--only", only, "Criterion ids to run (default: all)");
    verify->add_flag("--write", write, "Write every manifest under the output root");

    auto* exp = app.add_subcommand("export", "Export a manifest as CSV or JSON");
    std::string manifest_file, format = "csv", output;
    exp->add_option("manifest", manifest_file, "Manifest JSON file")->required();
    exp->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    exp->add_option("-o,--output", output, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kConfigError;
    }

    const RunOptions options{threads};
    try {
        if (*run) return run_command(config_file, options);
        if (*verify) return verify_all({only.begin(), only.end()}, write, options);
        if (*exp) {
            if (!fs::exists(manifest_file)) {
                std::cerr << "ilt-lab: manifest not found: " << manifest_file << "\n";
                return kIoError;
            }
            return export_command(manifest_file, format, output);
        }
    } catch (const ConfigError& e) {
        std::cerr << "ilt-lab: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "ilt-lab: " << e.what() << "\n";
        return kIoError;
    }
    return kConfigError;
}
