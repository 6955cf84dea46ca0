#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cosserat/runner.hpp"

using namespace cosserat;

namespace {

const std::string kScenarios = COSSERAT_SCENARIO_DIR;
const std::string kTool = COSSERAT_TOOL_PATH;

std::string comparable(const std::string& text, const std::string& marker) {
    const auto p = text.find(marker);
    return p == std::string::npos ? text : text.substr(0, p);
}

std::string table(const Report& r) {
    std::ostringstream s;
    write_table(r, s);
    return s.str();
}

std::string records(const Report& r) {
    std::ostringstream s;
    write_records(r, s);
    return s.str();
}

int run_tool(const std::string& args, const std::string& stdout_file = "/dev/null") {
    const std::string cmd = kTool + " " + args + " > " + stdout_file + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::filesystem::path scratch() {
    const auto p = std::filesystem::temp_directory_path() / ("cosserat_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
}

std::string write_file(const std::string& name, const std::string& text) {
    const auto p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

const char* kMinimal = R"(kind = compatibility
[grid]
dim = 2
nodes = 5
[field.chi]
translation = 1, 2, 3
rotation = 0, 0, 0.5
)";

}  // namespace

TEST_CASE("expressions") {
    const Vec3 r(0.5, -2.0, 3.0);
    CHECK(Expression::parse("1 + 2 * 3")(r) == 7.0);
    CHECK(Expression::parse("2 ^ 3 ^ 2")(r) == 512.0);
    CHECK(Expression::parse("-2^2")(r) == -4.0);
    CHECK(Expression::parse("2^-1")(r) == 0.5);
    CHECK(Expression::parse("(1 - 2) - 3")(r) == -4.0);
    CHECK(Expression::parse("8 / 4 / 2")(r) == 1.0);
    CHECK(Expression::parse("rho1 * rho2 + rho3")(r) == 2.0);
    CHECK(Expression::parse("\xCF\x81" "2 - rho2")(r) == 0.0);
    CHECK(Expression::parse("sin(pi/2) + cos(0) + exp(0) + sqrt(4)")(r) == doctest::Approx(5.0));
    CHECK(Expression::parse("1.5e-3")(r) == 1.5e-3);
    CHECK(Expression::parse("3")(r) == 3.0);
    CHECK(Expression::parse("2*pi").is_constant());
    CHECK_FALSE(Expression::parse("rho3 * 0").is_constant());

    CHECK_THROWS_AS(Expression::parse("1 +"), ExpressionError);
    CHECK_THROWS_AS(Expression::parse("rho4"), ExpressionError);
    CHECK_THROWS_AS(Expression::parse("tan(1)"), ExpressionError);
    CHECK_THROWS_AS(Expression::parse("(1 + 2"), ExpressionError);
    CHECK_THROWS_AS(Expression::parse("1 2"), ExpressionError);
    CHECK_THROWS_AS(Expression::parse(""), ExpressionError);
    try {
        Expression::parse("1 + $");
    } catch (const ExpressionError& e) {
        CHECK(e.column == 5);
    }

    const ExpressionList l = ExpressionList::parse("sin(rho1), 2, rho3", 3);
    CHECK(l.vec3(r).isApprox(Vec3(std::sin(0.5), 2.0, 3.0)));
    CHECK_THROWS_AS(ExpressionList::parse("1, 2", 3), ExpressionError);
    const Mat3 m = ExpressionList::parse("1,2,3,4,5,6,7,8,rho1", 9).mat3(r);
    CHECK(m(0, 2) == 3.0);
    CHECK(m(2, 2) == 0.5);
}

TEST_CASE("scenario parsing") {
    const Scenario sc = Scenario::parse("# header\nkind = rod-solve  # trailing\n\n[grid]\nnodes = 7\n", "t.scn");
    CHECK(sc.text("", "kind") == "rod-solve");
    CHECK(sc.integer_or("grid", "nodes", 0) == 7);
    CHECK(sc.number_or("grid", "lo", -1.0) == -1.0);
    CHECK(sc.entry("grid", "nodes").line == 5);

    auto error_of = [](const std::string& text) -> ScenarioError {
        try {
            validate_scenario(Scenario::parse(text, "bad.scn"));
        } catch (const ScenarioError& e) {
            return e;
        }
        FAIL("expected a scenario error");
        return ScenarioError("", 0, "", "");
    };
    CHECK(error_of("kind = compatibility\nkind = equilibrium\n").line == 2);
    CHECK(error_of("kind = compatibility\n[grid\n").line == 2);
    CHECK(error_of("kind = compatibility\njust text\n").line == 2);
    CHECK(error_of("kind = shells\n").field == "kind");
    CHECK(error_of("name = x\n").field == "kind");
    CHECK(error_of(std::string(kMinimal) + "[checks]\nstiffness = 1\n").field == "checks.stiffness");
    CHECK(error_of(std::string(kMinimal) + "[grid.extra]\nx = 1\n").field == "grid.extra");
    CHECK(error_of(std::string(kMinimal) + "colour = red\n").field == "field.chi.colour");
    CHECK(error_of("kind = compatibility\n[grid]\ndim = 2\nnodes = 2\n").field == "grid.nodes");
    CHECK(error_of("kind = compatibility\n[grid]\ndim = 2\n[field.chi]\ntranslation = 1, 2\nrotation = 0,0,0\n").field ==
          "field.chi.translation");
    CHECK(error_of("kind = compatibility\n[grid]\ndim = 1\n[field.chi]\ntranslation = 1,2,3\nrotation = 0,0,0\n").field ==
          "grid.dim");
    CHECK(error_of("kind = rod-solve\n[law]\nname = linear-cosserat\n[bc.start]\ntype = glued\n[bc.end]\ntype = free\n")
              .field == "bc.start.type");
    CHECK(error_of("kind = rod-solve\n[law]\nname = linear-cosserat\n[bc.start]\ntype = fixed\n").field == "bc.end.type");
    CHECK(error_of("kind = convergence-study\n[study]\nof = compatibility\nlevels = 2\n").field == "study.levels");
    CHECK_NOTHROW(validate_scenario(Scenario::parse(kMinimal, "ok.scn")));
}

TEST_CASE("runner on small scenarios") {
    const Report r = run_scenario(Scenario::parse(kMinimal, "min.scn"));
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].name == "dislocation");
    CHECK(r.checks[0].inf_norm == 0.0);
    CHECK(r.pass);

    const Scenario strict = Scenario::parse(std::string(kMinimal).replace(0, 20, "kind = compatibility") +
                                                "[field.E]\nxi1 = rho2^2, 0, 0\nxi2 = 0,0,0\nomega1 = 0,0,0\n"
                                                "omega2 = 0, 0, rho1\n",
                                            "both.scn");
    CHECK_THROWS_AS(validate_scenario(strict), ScenarioError);

    const char* incompatible = R"(kind = compatibility
[grid]
dim = 2
nodes = 5
[field.E]
xi1 = rho2^2, 0, 0
xi2 = 0, 0, 0
omega1 = 0, 0, 0
omega2 = 0, 0, rho1
[checks]
dislocation = 1e-6
disclination = 1e-6
)";
    const Report bad = run_scenario(Scenario::parse(incompatible, "inc.scn"));
    CHECK_FALSE(bad.pass);
    CHECK(bad.checks[1].inf_norm == doctest::Approx(1.0));

    RunOptions loose;
    loose.tol_scale = 1e7;
    CHECK(run_scenario(Scenario::parse(incompatible, "inc.scn"), loose).pass);
}

TEST_CASE("study reports orders and exact zeros") {
    const Report r = convergence_study(Scenario::parse(kMinimal, "min.scn"), 3);
    CHECK(r.mode == "study");
    REQUIRE(r.levels.size() == 3);
    CHECK(r.levels[2].nodes == 17);
    REQUIRE(r.orders.size() == 2);
    CHECK(r.orders[0].exact);
    CHECK(r.pass);
    CHECK(table(r).find("exact") != std::string::npos);
    CHECK_THROWS_AS(convergence_study(Scenario::parse(kMinimal, "min.scn"), 2), ScenarioError);

    const Report chain = run_scenario(Scenario::load(kScenarios + "/study_chain.scn"));
    for (const auto& o : chain.orders)
        for (const auto& v : o.orders) {
            REQUIRE(v.has_value());
            CHECK(*v >= 1.7);
            CHECK(*v <= 2.3);
        }
}

TEST_CASE("non-monotone residuals are flagged") {
    // a residual that grows under refinement
    const char* text = R"(kind = deformation-check
[grid]
dim = 1
nodes = 3
[field.chi]
translation = 0, 0, 0
rotation = 0, 0, exp(40*rho1)
[checks]
spencer = 1e9
)";
    const Report r = convergence_study(Scenario::parse(text, "grow.scn"), 3);
    REQUIRE(r.orders.size() == 1);
    if (!r.orders[0].monotone) {
        CHECK_FALSE(r.pass);
        CHECK(table(r).find("non-monotone") != std::string::npos);
    }
}

TEST_CASE("bundled scenarios pass and reports are deterministic") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
        if (entry.path().extension() != ".scn") continue;
        ++count;
        CAPTURE(entry.path().string());
        const Scenario sc = Scenario::load(entry.path().string());
        const Report a = run_scenario(sc);
        const Report b = run_scenario(sc);
        CHECK(a.pass);
        CHECK(comparable(table(a), "# timing") == comparable(table(b), "# timing"));
        CHECK(comparable(records(a), "{\"record\":\"timing\"") == comparable(records(b), "{\"record\":\"timing\""));
        for (const auto& c : a.checks)
            if (c.name == "iterations") CHECK(c.inf_norm <= 10);
    }
    CHECK(count >= 8);
}

TEST_CASE("records are one JSON object per line") {
    const Report r = run_scenario(Scenario::parse(kMinimal, "min.scn"));
    std::istringstream in(records(r));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
        ++n;
    }
    CHECK(n == static_cast<int>(1 + r.echo.size() + r.checks.size() + 2));
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-0.0) == "0");
}

TEST_CASE("command line exit codes") {
    const auto dir = scratch();
    CHECK(run_tool("run " + kScenarios + "/rigid_kernel.scn") == 0);
    CHECK(run_tool("validate " + kScenarios + "/rod_manufactured.scn") == 0);
    CHECK(run_tool("study " + kScenarios + "/chain_level1.scn --levels 3") == 0);
    CHECK(run_tool("run " + kScenarios + "/chain_level1.scn --tol-scale 0.5") == 1);
    CHECK(run_tool("run " + (dir / "missing.scn").string()) == 2);
    CHECK(run_tool("run") == 2);
    CHECK(run_tool("frobnicate x") == 2);
    CHECK(run_tool("run " + kScenarios + "/rigid_kernel.scn --format xml") == 2);
    CHECK(run_tool("study " + kScenarios + "/rigid_kernel.scn --levels 2") == 2);

    const std::string bad = write_file("bad.scn", std::string(kMinimal) + "[checks]\nstiffness = 1\n");
    const std::string out = (dir / "err.jsonl").string();
    CHECK(run_tool("run " + bad + " --format records", out) == 2);
    const std::string err = slurp(out);
    CHECK(err.find("\"record\":\"error\"") != std::string::npos);
    CHECK(err.find("\"field\":\"checks.stiffness\"") != std::string::npos);
    CHECK(err.find("\"line\":9") != std::string::npos);

    const std::string fail = write_file("fail.scn", R"(kind = rod-solve
[grid]
nodes = 5
[law]
name = linear-cosserat
torsion = 0
[bc.start]
type = fixed
[bc.end]
type = free
couple = 0.1, 0, 0
)");
    CHECK(run_tool("run " + fail) == 1);
}

TEST_CASE("command line output files and determinism") {
    const auto dir = scratch();
    const std::string a = (dir / "a.txt").string();
    const std::string b = (dir / "b.txt").string();
    for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
        if (entry.path().extension() != ".scn") continue;
        CAPTURE(entry.path().string());
        for (const char* fmt : {"table", "records"}) {
            const std::string args = "run " + entry.path().string() + " --format " + fmt + " --out ";
            CHECK(run_tool(args + a) == 0);
            CHECK(run_tool(args + b) == 0);
            const std::string marker = std::string(fmt) == "table" ? "# timing" : "{\"record\":\"timing\"";
            const std::string ta = slurp(a), tb = slurp(b);
            CHECK(!ta.empty());
            CHECK(comparable(ta, marker) == comparable(tb, marker));
        }
    }

    const auto other = dir / "elsewhere";
    const std::string cmd = "COSSERAT_OUTPUT_DIR=" + other.string() + " " + kTool + " run " + kScenarios +
                            "/rigid_kernel.scn --out nested/report.txt > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(std::filesystem::exists(other / "report.txt"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("tabulated fields") {
    const ExpressionList t = ExpressionList::parse("table 1, 2, 3; 4, 5, 6; 2*pi, 0, -1", 3);
    CHECK(t.is_table());
    CHECK_FALSE(t.is_constant());
    CHECK(t.rows() == 3);
    CHECK_THROWS_AS(ExpressionList::parse("table 1, 2; 3, 4, 5", 3), ExpressionError);
    CHECK_THROWS_AS(ExpressionList::parse("table 1, 2, rho1", 3), ExpressionError);

    ExpressionList bound = t;
    CHECK_THROWS_AS(bound.bind(1, 4, 0.0, 1.0), std::invalid_argument);
    bound.bind(1, 3, 0.0, 2.0);
    CHECK(bound.vec3(Vec3(1.0, 0.0, 0.0)) == Vec3(4.0, 5.0, 6.0));
    CHECK(bound.vec3(Vec3(2.0, 0.0, 0.0)).x() == doctest::Approx(2.0 * M_PI));
    CHECK_THROWS_AS(bound.vec3(Vec3(0.5, 0.0, 0.0)), std::invalid_argument);

    // a constant motion written node by node on a 3 x 3 grid
    std::string rows, zeros;
    for (int i = 0; i < 9; ++i) {
        rows += std::string(i ? "; " : "") + "1, -2, 0.5";
        zeros += std::string(i ? "; " : "") + "0.1, 0.2, 0.3";
    }
    const std::string text = "kind = deformation-check\n[grid]\ndim = 2\nnodes = 3\n[field.chi]\ntranslation = table " +
                             rows + "\nrotation = table " + zeros + "\n";
    const Report r = run_scenario(Scenario::parse(text, "tab.scn"));
    CHECK(r.pass);
    CHECK(r.checks.front().inf_norm == 0.0);

    auto field_of = [](const std::string& s) {
        try {
            validate_scenario(Scenario::parse(s, "tab.scn"));
        } catch (const ScenarioError& e) {
            return e.field;
        }
        return std::string("none");
    };
    std::string short_text = text;
    short_text.replace(short_text.find("nodes = 3"), 9, "nodes = 5");
    CHECK(field_of(short_text) == "field.chi.translation");
    CHECK(field_of("kind = convergence-study\n[study]\nof = deformation-check\n" + text.substr(text.find("[grid]"))) ==
          "field.chi.translation");
}
