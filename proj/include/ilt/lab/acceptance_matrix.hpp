#pragma once

#include <string>
#include <vector>

#include "ilt/lab/config.hpp"
#include "ilt/lab/manifest.hpp"
#include "ilt/lab/runner.hpp"

namespace ilt::lab {

/// One acceptance criterion: the experiments that witness it and its wall-time budget.
struct Criterion {
    int id = 0;
    std::string title;
    std::vector<ExperimentConfig> experiments;
    double time_limit_s = 0.0;
};

/// The pinned acceptance matrix, criteria 1..8.
std::vector<Criterion> acceptance_matrix();

struct CriterionOutcome {
    int id = 0;
    std::string title;
    bool pass = false;
    double wall_time_s = 0.0;
    double time_limit_s = 0.0;
    std::vector<ResultManifest> manifests;
    std::vector<std::string> failures;  // failing metrics and budget overruns
};

/// Runs every experiment of the criterion; it passes when every metric passes within budget.
CriterionOutcome run_criterion(const Criterion& criterion, const RunOptions& options = {});

/// "PASS  criterion 3: ... (12.4 s, budget 600 s)", plus indented failure lines.
std::string format_outcome(const CriterionOutcome& outcome);

}  // namespace ilt::lab
