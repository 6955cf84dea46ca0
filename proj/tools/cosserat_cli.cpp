#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosserat/runner.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Options {
    std::string scenario;
    std::string out;
    std::string format = "table";
    double tol_scale = 1.0;
    int levels = 3;
};

void report_error(const Options& o, const std::string& type, const std::string& source, int line,
                  const std::string& field, const std::string& message) {
    std::cerr << "error: " << type << ": " << message << "\n";
    if (o.format == "records") {
        nlohmann::ordered_json j;
        j["record"] = "error";
        j["type"] = type;
        j["source"] = source;
        j["line"] = line;
        j["field"] = field;
        j["message"] = message;
        std::cout << j.dump() << "\n";
    }
}

std::filesystem::path output_path(const std::string& out) {
    std::filesystem::path p(out);
    if (const char* dir = std::getenv("COSSERAT_OUTPUT_DIR"); dir && *dir) {
        p = std::filesystem::path(dir) / p.filename();
    }
    return p;
}

int emit(const Options& o, const cosserat::Report& r) {
    std::ostringstream text;
    if (o.format == "records") {
        cosserat::write_records(r, text);
    } else {
        cosserat::write_table(r, text);
    }
    if (o.out.empty()) {
        std::cout << text.str();
    } else {
        const auto path = output_path(o.out);
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream f(path);
        if (!f) {
            report_error(o, "input", o.scenario, 0, "--out", "cannot write " + path.string());
            return kExitInput;
        }
        f << text.str();
        std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.name << "  -> " << path.string() << "\n";
    }
    return r.pass ? kExitPass : kExitFail;
}

int execute(const std::string& command, const Options& o) {
    cosserat::Scenario sc = [&] { return cosserat::Scenario::load(o.scenario); }();
    cosserat::RunOptions ro;
    ro.tol_scale = o.tol_scale;
    if (command == "validate") {
        cosserat::validate_scenario(sc);
        std::cout << "valid: " << sc.source() << " (" << sc.text("", "kind") << ")\n";
        return kExitPass;
    }
    cosserat::validate_scenario(sc);
    try {
        const cosserat::Report r =
            command == "study" ? cosserat::convergence_study(sc, o.levels, ro) : cosserat::run_scenario(sc, ro);
        return emit(o, r);
    } catch (const cosserat::ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        report_error(o, "numerical", sc.source(), 0, "", sc.source() + ": " + sc.text("", "kind") + ": " + e.what());
        return kExitFail;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cosserat media kinematics and statics checks"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("scenario", o.scenario, "Scenario file")->required();
        sub->add_option("--out", o.out, "Write the report to this path");
        sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"table", "records"}));
        sub->add_option("--tol-scale", o.tol_scale, "Multiply every declared tolerance")
            ->check(CLI::PositiveNumber);
    };
    CLI::App* run = app.add_subcommand("run", "Run a scenario");
    add_common(run);
    CLI::App* study = app.add_subcommand("study", "Run a scenario under grid refinement");
    add_common(study);
    study->add_option("--levels", o.levels, "Number of refinement levels (>= 3)")->check(CLI::Range(3, 12));
    CLI::App* validate = app.add_subcommand("validate", "Parse and validate a scenario");
    validate->add_option("scenario", o.scenario, "Scenario file")->required();
    validate->add_option("--format", o.format, "Error format")->check(CLI::IsMember({"table", "records"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInput;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return execute(command, o);
    } catch (const cosserat::ScenarioError& e) {
        report_error(o, "input", o.scenario, e.line, e.field, e.what());
        return kExitInput;
    }
}
