#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cosserat/rod.hpp"
#include "test_support.hpp"

using namespace cosserat;
using namespace test_support;

namespace {

const LinearCosseratModuli kModuli{10.0, 8.0, 2.0, 3.0};

RigidMotion exact_motion(double s) {
    return {Vec3(0.05 * std::sin(2.0 * s), 0.1 * s * s, 0.05 * s * s * s),
            Rotation::exp(Vec3(0.2 * s, 0.3 * std::sin(s), 0.1 * s * s))};
}

RodProblem manufactured_problem(int nodes) {
    const ConstitutiveLaw law = linear_cosserat_law(kModuli);
    const auto [n, m] = rod_stress_resultants(law, exact_motion, 1.0);
    return {law, {RodEnd::fixed(exact_motion(0.0)), RodEnd::free(n, m)}, ParameterGrid::uniform(1, nodes),
            manufactured_loads(law, exact_motion)};
}

double position_error(const RodSolveReport& rep) {
    double e = 0.0;
    const auto& g = rep.field.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const RigidMotion ref = exact_motion(g.coords(i).x());
        const Vec3 x = rep.field.chi[i].a + rep.field.chi[i].r * g.coords(i);
        const Vec3 xr = ref.a + ref.r * g.coords(i);
        e = std::max(e, (x - xr).norm());
    }
    return e;
}

}  // namespace

TEST_CASE("unloaded rod stays put") {
    const RodProblem pb{linear_cosserat_law(kModuli), {RodEnd::fixed(), RodEnd::free()}, ParameterGrid::uniform(1, 9), {}};
    const RodSolveReport rep = solve_rod(pb);
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    CHECK(rep.residual == 0.0);
    for (const auto& g : rep.field.chi) CHECK(distance(g, RigidMotion{}) == 0.0);
    CHECK(rep.field.grid.kind(0) == NodeKind::fixed_boundary);
    CHECK(rep.field.grid.kind(8) == NodeKind::free_boundary);
}

TEST_CASE("rigid placements of a free rod are in equilibrium") {
    const RodProblem pb{linear_cosserat_law(kModuli), {RodEnd::free(), RodEnd::free()}, ParameterGrid::uniform(1, 7), {}};
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<RigidMotion> chi(7, random_motion());
        CHECK(rod_residual(pb, chi).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("end couple bends the rod linearly") {
    const double L = 2.0;
    std::vector<double> angles;
    const double couples[4] = {0.01, 0.02, 0.03, 0.04};
    for (double c : couples) {
        const RodProblem pb{linear_cosserat_law(kModuli),
                            {RodEnd::fixed(), RodEnd::free(Vec3::Zero(), Vec3(0, 0, c))},
                            ParameterGrid::uniform(1, 21, 0.0, L),
                            {}};
        const RodSolveReport rep = solve_rod(pb);
        REQUIRE(rep.converged);
        angles.push_back(rep.field.chi.back().r.log().z());
    }
    for (int k = 0; k < 4; ++k) {
        CHECK(angles[k] == doctest::Approx(couples[k] * L / kModuli.bending).epsilon(0.01));
        CHECK(angles[k] / couples[k] == doctest::Approx(angles[0] / couples[0]).epsilon(0.01));
    }
}

TEST_CASE("small tip force matches shear-flexible beam theory") {
    const double P = 1e-4;
    const RodProblem pb{linear_cosserat_law(kModuli),
                        {RodEnd::fixed(), RodEnd::free(Vec3(0, P, 0), Vec3::Zero())},
                        ParameterGrid::uniform(1, 41),
                        {}};
    const RodSolveReport rep = solve_rod(pb);
    REQUIRE(rep.converged);
    const double expected = P / (3.0 * kModuli.bending) + P / kModuli.shear;
    CHECK(rep.field.chi.back().a.y() == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("manufactured solution is recovered at second order") {
    std::vector<double> err;
    for (int nodes : {17, 33, 65}) {
        const RodSolveReport rep = solve_rod(manufactured_problem(nodes));
        REQUIRE(rep.converged);
        CHECK(rep.iterations <= 10);
        CHECK(rep.residual <= kSolveTol);
        err.push_back(position_error(rep));
    }
    CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(std::log2(err[1] / err[2]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("solver limits and errors") {
    RodSolveOptions opt;
    opt.max_iter = 1;
    const RodSolveReport rep = solve_rod(manufactured_problem(9), opt);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations == 1);
    CHECK(rep.trace.size() == 2);
    CHECK(rep.residual < rep.trace.front().residual);

    RodProblem plane = manufactured_problem(9);
    plane.grid = ParameterGrid::uniform(2, 5);
    CHECK_THROWS_AS(solve_rod(plane), std::invalid_argument);

    RodProblem floppy{linear_cosserat_law({1.0, 1.0, 0.0, 1.0}), {RodEnd::fixed(), RodEnd::free()},
                      ParameterGrid::uniform(1, 5), {}};
    floppy.bc.end.couple = Vec3(0.1, 0.0, 0.0);
    CHECK_THROWS_AS(solve_rod(floppy), NumericalError);
}
