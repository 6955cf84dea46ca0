#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cosserat {

struct CheckResult {
    std::string name;
    double inf_norm = 0.0;
    double l2_norm = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;  // deterministic extra information
};

/// One Newton iteration of the rod solver.
struct SolverStep {
    int iteration = 0;
    double residual = 0.0;
    double step = 0.0;
};

/// One refinement level of a study.
struct StudyLevel {
    int nodes = 0;
    double spacing = 0.0;
    std::vector<CheckResult> checks;
    std::vector<SolverStep> trace;
};

/// Observed orders of one check across the levels. An order is empty when
/// both residuals are zero ("exact").
struct StudyOrders {
    std::string name;
    std::vector<std::optional<double>> orders;
    bool exact = false;
    bool monotone = true;
    bool pass = false;
};

struct Report {
    std::string source;
    std::string name;
    std::string kind;
    std::string mode = "run";  // run | study
    double tol_scale = 1.0;
    std::vector<std::pair<std::string, std::string>> echo;
    std::vector<CheckResult> checks;  // finest level for a study
    std::vector<SolverStep> trace;    // rod solver, run mode
    std::vector<StudyLevel> levels;
    std::vector<StudyOrders> orders;
    double order_min = 0.0;
    double order_max = 0.0;
    bool pass = false;
    double elapsed_ms = 0.0;
};

/// Numbers with 17 significant digits.
std::string format_number(double v);

/// Human-readable table. Everything before the "# timing" line is
/// deterministic.
void write_table(const Report& r, std::ostream& out);

/// One JSON object per line; the final "timing" record is the only one
/// carrying wall-clock content.
void write_records(const Report& r, std::ostream& out);

}  // namespace cosserat
