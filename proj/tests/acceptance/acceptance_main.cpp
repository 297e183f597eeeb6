#include <cmath>
#include <cstdio>
#include <iostream>

#include "ilt/lab/acceptance_matrix.hpp"
#include "ilt/moments.hpp"
#include "support/oracles.hpp"

using namespace ilt;
using namespace ilt::lab;

namespace {

// Exact two-factor moments against the independent quadrature over absolute positions.
std::vector<std::string> independent_second_moment_check(const Criterion& c) {
    std::vector<std::string> failures;
    for (const auto& cs : c.experiments.front().cases) {
        const auto a = cs[0].components(), b = cs[1].components();
        const double exact = exact_alpha_moment(cs).value;
        const double oracle = testing::two_factor_moment_quadrature({a.begin(), a.end()}, {b.begin(), b.end()});
        const double rel = std::abs(exact - oracle) / std::abs(oracle);
        if (!(rel <= 1e-6)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "independent oracle: %s %s exact %.12g vs %.12g (rel %.3g)",
                          format_offsets(cs[0]).c_str(), format_offsets(cs[1]).c_str(), exact, oracle, rel);
            failures.push_back(buf);
        }
    }
    return failures;
}

}  // namespace

int main() {
    bool all = true;
    for (const auto& criterion : acceptance_matrix()) {
        auto outcome = run_criterion(criterion);
        if (criterion.id == 6) {
            for (auto& f : independent_second_moment_check(criterion)) outcome.failures.push_back(std::move(f));
            outcome.pass = outcome.failures.empty();
        }
        std::cout << format_outcome(outcome) << std::endl;
        all = all && outcome.pass;
    }
    return all ? 0 : 1;
}
