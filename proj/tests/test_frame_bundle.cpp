#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cosserat/frame_bundle.hpp"
#include "test_support.hpp"

using namespace cosserat;
using namespace test_support;

TEST_CASE("frame coordinates round trip") {
    const AffineFrame ref{random_vec(), random_rotation().matrix()};

    const FrameCoordinates own = frame_from_group(RigidMotion::identity(), ref);
    CHECK((own.x - ref.origin).norm() == 0.0);
    CHECK((own.f.matrix() - ref.basis).norm() < 1e-15);

    const Vec3 a = random_vec();
    const FrameCoordinates shifted = frame_from_group(RigidMotion::translation(a), ref);
    CHECK((shifted.f.matrix() - ref.basis).norm() < 1e-15);
    CHECK((shifted.x - (ref.origin + ref.basis * a)).norm() < 1e-15);

    for (int k = 0; k < 100; ++k) {
        const RigidMotion g = random_motion();
        CHECK(distance(group_from_frame(frame_from_group(g, ref), ref), g) < kTolGroup);
    }

    const AffineFrame bad{Vec3::Zero(), 2.0 * Mat3::Identity()};
    CHECK_THROWS_AS(frame_from_group(RigidMotion::identity(), bad), std::invalid_argument);
}

TEST_CASE("structure constants of iso(3)") {
    const StructureConstants c = structure_constants_iso3();
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 3; ++b)
            for (int d = 0; d < 3; ++d) CHECK(c(a, b, d) == 0.0);
    // translational pairs never reach the rotational slots
    for (int i = 3; i < 6; ++i)
        for (int b = 0; b < 3; ++b)
            for (int d = 0; d < 3; ++d) CHECK(c(i, b, d) == 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) CHECK(c(3 + i, 3 + j, 3 + k) == levi_civita(j, k, i));
    // rotation brackets never produce translations
    for (int a = 0; a < 3; ++a)
        for (int j = 3; j < 6; ++j)
            for (int k = 3; k < 6; ++k) CHECK(c(a, j, k) == 0.0);

    for (int b = 0; b < 6; ++b)
        for (int d = 0; d < 6; ++d) {
            const auto br = bracket(IsoAlgebraElement::basis(b), IsoAlgebraElement::basis(d)).coords();
            for (int a = 0; a < 6; ++a) CHECK(c(a, b, d) == br(a));
        }
    CHECK(c.antisymmetry_defect() == 0.0);
    CHECK(c.jacobi_defect() == 0.0);
}

TEST_CASE("Maurer-Cartan right-hand side equals minus the bracket") {
    const StructureConstants c = structure_constants_iso3();
    for (int k = 0; k < 50; ++k) {
        const IsoAlgebraElement x = random_algebra(), y = random_algebra();
        CHECK((maurer_cartan_rhs(c, x, y) + bracket(x, y)).coords().norm() < 1e-14);
    }
}

TEST_CASE("Maurer-Cartan residual on one-parameter families") {
    const Family constant = [](double) { return RigidMotion{Vec3(1, 2, 3), Rotation::exp(Vec3(0.1, 0.2, 0.3))}; };
    const auto fixed = maurer_cartan_residual(constant, constant, 1e-2);
    CHECK(fixed.exact);
    CHECK(fixed.residual == 0.0);

    const Family tx = [](double s) { return RigidMotion::translation(Vec3(s, 0, 0)); };
    const Family ty = [](double t) { return RigidMotion::translation(Vec3(0, t * t, 0)); };
    const auto abelian = maurer_cartan_residual(tx, ty, 1e-2);
    CHECK(abelian.exact);
    CHECK(abelian.residual < 1e-12);

    const Family rx = [](double s) { return RigidMotion::rotation(Rotation::exp(Vec3(std::sin(s), 0, 0))); };
    const Family ry = [](double t) { return RigidMotion::rotation(Rotation::exp(Vec3(0, t + t * t, 0))); };
    const auto rot = maurer_cartan_residual(rx, ry, 0.05);
    CHECK_FALSE(rot.exact);
    CHECK(rot.observed_order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Maurer-Cartan residual on a general surface") {
    const IsoAlgebraElement x = random_algebra(), y = random_algebra(), z = random_algebra();
    const Surface g = [&](double s, double t) {
        return compose(exp(x, s + 0.3 * t * t), compose(exp(y, t), exp(z, s * t)));
    };
    const auto coarse = maurer_cartan_residual(g, 0.2, -0.1, 0.04);
    const auto fine = maurer_cartan_residual(g, 0.2, -0.1, 0.02);
    CHECK(coarse.observed_order == doctest::Approx(2.0).epsilon(0.1));
    CHECK(fine.residual < coarse.residual);

    CHECK_THROWS_AS(maurer_cartan_residual(g, 0.2, -0.1, 3.0), NumericalError);
}

TEST_CASE("structure equations on basis pairs through the table") {
    // g(s, t) = exp(s E_b) exp(t E_d): at the origin d theta(d_s, d_t) = -[E_b, E_d],
    // which the table must reproduce as -c^a_{bd}
    const StructureConstants c = structure_constants_iso3();
    const double h = 1e-3;
    for (int b = 0; b < 6; ++b)
        for (int d = 0; d < 6; ++d) {
            const IsoAlgebraElement eb = IsoAlgebraElement::basis(b), ed = IsoAlgebraElement::basis(d);
            auto theta = [&](double s, double t, int dir) {
                auto g = [&](double ss, double tt) { return compose(exp(eb, ss), exp(ed, tt)); };
                const Mat4 dg = dir == 0 ? (g(s + h, t).homogeneous() - g(s - h, t).homogeneous()) / (2 * h)
                                         : (g(s, t + h).homogeneous() - g(s, t - h).homogeneous()) / (2 * h);
                return Mat4(inverse(g(s, t)).homogeneous() * dg);
            };
            const Mat4 dtheta = (theta(h, 0, 1) - theta(-h, 0, 1)) / (2 * h) -
                                (theta(0, h, 0) - theta(0, -h, 0)) / (2 * h);
            const auto lhs = algebra_from_homogeneous(dtheta);
            const auto rhs = maurer_cartan_rhs(c, eb, ed);
            CHECK((lhs.v - rhs.v).norm() < 1e-5);
            CHECK((lhs.w - rhs.w).norm() < 1e-5);
        }
}
