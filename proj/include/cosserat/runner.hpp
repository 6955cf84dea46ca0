#pragma once

#include <string>
#include <vector>

#include "cosserat/report.hpp"
#include "cosserat/scenario.hpp"

namespace cosserat {

/// Scenario kinds understood by the runner.
const std::vector<std::string>& scenario_kinds();

/// Check names available for a kind, in report order.
std::vector<std::string> available_checks(const std::string& kind);

struct RunOptions {
    double tol_scale = 1.0;
};

/// Full validation: known sections and keys, kind-specific required
/// fields, expressions parse, declared checks exist for the kind and grid
/// dimension. Throws ScenarioError.
void validate_scenario(const Scenario& sc);

/// Runs the scenario once at its declared grid; a convergence-study
/// scenario runs its study with the declared number of levels.
/// Numerical failures propagate as cosserat::Error.
Report run_scenario(const Scenario& sc, const RunOptions& opt = {});

/// Runs the scenario at nodes (n - 1) 2^k + 1 for k = 0 .. levels - 1 and
/// reports log2 ratios of successive residual norms for checks that measure
/// discretization error. Other checks must pass at every level.
/// Throws ScenarioError for levels < 3.
Report convergence_study(const Scenario& sc, int levels, const RunOptions& opt = {});

}  // namespace cosserat
