#pragma once

#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>
#include <vector>

#include "ilt/lab/config.hpp"
#include "ilt/lab/manifest.hpp"

namespace ilt::lab {

struct RunOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

unsigned resolve_threads(unsigned requested) noexcept;

/// Evaluates fn(0..n-1) on a pool of workers that pull indices from a shared counter.
/// Results are stored by index, so the output never depends on scheduling.
template <class F>
auto parallel_map(std::size_t n, unsigned threads, F&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(n)));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return out;
}

/// Runs the experiment and fills every metric. Oracle failures become failed metrics.
ResultManifest run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Output root: $ILT_LAB_OUTPUT_ROOT if set, else the current directory.
std::filesystem::path output_root();

struct WrittenFiles {
    std::filesystem::path manifest;
    std::filesystem::path table;
};

/// Writes <root>/<output_dir>/<name>.manifest.json and <name>.csv.
WrittenFiles write_outputs(const ResultManifest& manifest, const ExperimentConfig& config,
                           const std::filesystem::path& root);

}  // namespace ilt::lab
