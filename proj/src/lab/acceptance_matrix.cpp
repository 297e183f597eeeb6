#include "ilt/lab/acceptance_matrix.hpp"

#include <chrono>
#include <cstdio>

namespace ilt::lab {

namespace {

ExperimentConfig base(ExperimentKind kind, std::string name) {
    ExperimentConfig c;
    c.kind = kind;
    c.name = std::move(name);
    c.output_dir = "acceptance";
    c.seed = 20240601;
    return c;
}

ExperimentConfig first_moment(Functional fn, int k) {
    const bool alpha = fn == Functional::alpha;
    auto c = base(ExperimentKind::mc_mean, std::string(alpha ? "alpha" : "gamma") + "-mean-k" + std::to_string(k));
    c.k = k;
    c.functional = fn;
    c.horizon_mode = HorizonMode::killed;
    c.horizon = 20.0;
    c.dt = 1e-3;
    c.eps = 0.05;
    c.replicas = 5000;
    for (double x : {0.0, 0.5, 1.0})
        c.cases.push_back({k == 2 ? OffsetVector{x} : OffsetVector{x, x}});
    if (alpha) c.bias_rel = 0.05;
    else c.bias_abs = 0.02;
    return c;
}

ExperimentConfig occupation(int k) {
    auto c = base(ExperimentKind::occupation_check, "occupation-k" + std::to_string(k));
    c.k = k;
    c.dt = 1e-3;
    c.eps = 0.05;
    c.replicas = 10;
    c.horizon = k == 2 ? 1.0 : 0.25;
    c.phi_sigma = k == 2 ? 0.5 : 0.2;
    return c;
}

}  // namespace

std::vector<Criterion> acceptance_matrix() {
    std::vector<Criterion> out;

    {
        auto c = base(ExperimentKind::inversion_check, "inversion");
        c.k = 6;
        c.trials = 100;
        out.push_back({1, "renormalization inversion roundtrip", {c}, 1.0});
    }
    {
        auto c = base(ExperimentKind::dp_equivalence, "dp-equivalence");
        c.k = 3;
        c.trials = 20;
        c.dt = 1e-3;
        c.horizon = 2.0;  // N = 2000
        out.push_back({2, "windowed simplex DP equals naive", {c}, 60.0});
    }
    out.push_back({3, "first-moment law for alpha", {first_moment(Functional::alpha, 2), first_moment(Functional::alpha, 3)},
                   600.0});
    out.push_back({4, "zero mean of gamma", {first_moment(Functional::gamma, 2), first_moment(Functional::gamma, 3)},
                   600.0});
    out.push_back({5, "occupation density identity", {occupation(2), occupation(3)}, 300.0});
    {
        auto c = base(ExperimentKind::moment_verify, "second-moment");
        c.k = 2;
        c.horizon_mode = HorizonMode::killed;
        c.horizon = 20.0;
        c.dt = 1e-3;
        c.eps = 0.05;
        c.replicas = 5000;
        for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}, {1.0, -0.5}, {0.3, 1.2}})
            c.cases.push_back({OffsetVector{a}, OffsetVector{b}});
        // No bias budget: MC agreement within 4 stderr only.
        out.push_back({6, "second-moment oracle", {c}, 900.0});
    }
    {
        auto c = base(ExperimentKind::kink_scan, "kink-scan");
        c.k = 2;
        c.horizon = 1.0;
        c.dt = 1e-5;
        c.eps = 1e-3;
        c.h = 0.05;
        c.replicas = 50;
        out.push_back({7, "kink law for alpha and C1 for gamma", {c}, 600.0});
    }
    {
        auto ladder = base(ExperimentKind::eps_ladder, "eps-ladder");
        ladder.k = 2;
        ladder.horizon = 0.1;
        ladder.dt = 1e-5;
        ladder.eps_ladder = {0.4, 0.2, 0.1, 0.05, 0.025, 0.0125};
        ladder.eps = ladder.eps_ladder.back();
        ladder.replicas = 4;
        ladder.x_span = 0.2;
        ladder.x_points = 21;
        auto inv = base(ExperimentKind::mollifier_invariance, "mollifier-invariance");
        inv.k = 2;
        inv.horizon = 0.1;
        inv.dt = 1e-6;
        inv.eps = 0.01;
        inv.replicas = 4;
        inv.mollifiers = {MollifierShape::smooth_bump, MollifierShape::quartic_bump};
        inv.cases = {{OffsetVector{0.0}}, {OffsetVector{0.05}}};
        out.push_back({8, "eps-ladder contraction and mollifier invariance", {ladder, inv}, 300.0});
    }
    return out;
}

CriterionOutcome run_criterion(const Criterion& criterion, const RunOptions& options) {
    CriterionOutcome out;
    out.id = criterion.id;
    out.title = criterion.title;
    out.time_limit_s = criterion.time_limit_s;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& config : criterion.experiments) {
        auto manifest = run_experiment(config, options);
        for (const auto& m : manifest.metrics)
            if (!m.pass) out.failures.push_back(manifest.experiment + ": " + m.name + " = " + std::to_string(m.value) +
                                                (m.note.empty() ? "" : " (" + m.note + ")"));
        out.manifests.push_back(std::move(manifest));
    }
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.wall_time_s > out.time_limit_s)
        out.failures.push_back("wall time " + std::to_string(out.wall_time_s) + " s exceeds budget");
    out.pass = out.failures.empty();
    return out;
}

std::string format_outcome(const CriterionOutcome& o) {
    char head[256];
    std::snprintf(head, sizeof head, "%s  criterion %d: %s (%.1f s, budget %.0f s)", o.pass ? "PASS" : "FAIL", o.id,
                  o.title.c_str(), o.wall_time_s, o.time_limit_s);
    std::string s = head;
    for (const auto& f : o.failures) s += "\n      " + f;
    return s;
}

}  // namespace ilt::lab
