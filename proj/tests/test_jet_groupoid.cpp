#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cosserat/jet_groupoid.hpp"
#include "test_support.hpp"

using namespace cosserat;
using namespace test_support;

namespace {

JetElement random_jet(std::size_t rho, int p) {
    JetElement g;
    g.rho = rho;
    g.p = p;
    g.a = random_vec(2.0);
    g.r = random_rotation();
    for (int k = 0; k < p; ++k) {
        g.a_d[k] = random_vec();
        g.r_d[k] = random_mat();
    }
    return g;
}

StateNode random_node(int p) {
    StateNode s;
    s.x = random_vec(2.0);
    s.e = random_rotation();
    for (int k = 0; k < p; ++k) {
        s.x_d[k] = random_vec();
        s.e_d[k] = random_mat();
    }
    return s;
}

double jet_distance(const JetElement& g, const JetElement& h) {
    double d = std::max((g.a - h.a).cwiseAbs().maxCoeff(), (g.r.matrix() - h.r.matrix()).cwiseAbs().maxCoeff());
    for (int k = 0; k < g.p; ++k) {
        d = std::max(d, (g.a_d[k] - h.a_d[k]).cwiseAbs().maxCoeff());
        d = std::max(d, (g.r_d[k] - h.r_d[k]).cwiseAbs().maxCoeff());
    }
    return d;
}

double node_distance(const StateNode& s, const StateNode& t, int p) {
    double d = std::max((s.x - t.x).cwiseAbs().maxCoeff(), (s.e.matrix() - t.e.matrix()).cwiseAbs().maxCoeff());
    for (int k = 0; k < p; ++k) {
        d = std::max(d, (s.x_d[k] - t.x_d[k]).cwiseAbs().maxCoeff());
        d = std::max(d, (s.e_d[k] - t.e_d[k]).cwiseAbs().maxCoeff());
    }
    return d;
}

double variation_distance(const StateVariation& u, const StateVariation& v, int p) {
    double d = std::max((u.dx - v.dx).cwiseAbs().maxCoeff(), (u.de - v.de).cwiseAbs().maxCoeff());
    for (int k = 0; k < p; ++k) {
        d = std::max(d, (u.dx_d[k] - v.dx_d[k]).cwiseAbs().maxCoeff());
        d = std::max(d, (u.de_d[k] - v.de_d[k]).cwiseAbs().maxCoeff());
    }
    return d;
}

}  // namespace

TEST_CASE("fiberwise groupoid axioms") {
    for (int p = 1; p <= 3; ++p)
        for (int k = 0; k < 200; ++k) {
            const JetElement f = random_jet(7, p), g = random_jet(7, p), h = random_jet(7, p);
            CHECK(jet_distance(jet_compose(g, jet_identity(7, p)), g) < 1e-15);
            CHECK(jet_distance(jet_compose(jet_identity(7, p), g), g) < 1e-15);
            CHECK(jet_distance(jet_compose(g, jet_inverse(g)), jet_identity(7, p)) < kTolGroup);
            CHECK(jet_distance(jet_compose(jet_inverse(g), g), jet_identity(7, p)) < kTolGroup);
            CHECK(jet_distance(jet_compose(jet_compose(f, g), h), jet_compose(f, jet_compose(g, h))) < kTolGroup);
        }
}

TEST_CASE("multiplication across fibers is rejected") {
    const JetElement g = random_jet(1, 2), h = random_jet(2, 2);
    CHECK_THROWS_AS(jet_compose(g, h), SourceMismatch);
    try {
        jet_compose(g, h);
    } catch (const SourceMismatch& e) {
        CHECK(e.lhs_node == 1);
        CHECK(e.rhs_node == 2);
    }
    CHECK_THROWS_AS(jet_act(g, 3, StateNode{}), SourceMismatch);
    AlgebroidElement xi;
    xi.rho = 4;
    CHECK_THROWS_AS(fundamental_variation(xi, 5, StateNode{}), SourceMismatch);
}

TEST_CASE("inverse") {
    CHECK(jet_distance(jet_inverse(jet_identity(0, 3)), jet_identity(0, 3)) == 0.0);

    JetElement plain;
    plain.p = 2;
    plain.a = random_vec();
    plain.r = random_rotation();
    const JetElement inv = jet_inverse(plain);
    const RigidMotion ginv = inverse(RigidMotion{plain.a, plain.r});
    CHECK((inv.a - ginv.a).norm() < 1e-15);
    CHECK((inv.r.matrix() - ginv.r.matrix()).norm() < 1e-15);
    for (int k = 0; k < 2; ++k) {
        CHECK(inv.a_d[k].norm() == 0.0);
        CHECK(inv.r_d[k].norm() == 0.0);
    }

    // the printed slot formula a^-1_a = -R^-1_a a + R^-1 a_a fails the inverse law
    const JetElement g = random_jet(0, 1);
    JetElement printed = jet_inverse(g);
    printed.a_d[0] = -(printed.r_d[0] * g.a) + g.r.matrix().transpose() * g.a_d[0];
    CHECK(jet_distance(jet_compose(g, printed), jet_identity(0, 1)) > 1e-3);
}

TEST_CASE("coordinate count") {
    const ParameterGrid grid = ParameterGrid::uniform(3, 3);
    for (int p = 1; p <= 3; ++p) {
        CHECK(JetElement::manifold_dimension(p) == p + 6 + 6 * p);
        CHECK(static_cast<int>(random_jet(5, p).local_coordinates(grid).size()) == p + 6 + 6 * p);
    }
}

TEST_CASE("action on jets of frames") {
    const StateNode s = random_node(3);
    CHECK(node_distance(jet_act(jet_identity(0, 3), 0, s), s, 3) < 1e-15);

    JetElement plain;
    plain.p = 2;
    plain.a = random_vec();
    plain.r = random_rotation();
    StateNode bare;
    bare.x = random_vec();
    bare.e = random_rotation();
    const StateNode moved = jet_act(plain, 0, bare);
    const AffineFrame f = act_on_frame({Vec3::Zero(), Mat3::Identity()}, RigidMotion{plain.a, plain.r});
    const AffineFrame framed = act_on_frame(f, RigidMotion{bare.x, bare.e});
    CHECK((moved.x - framed.origin).norm() < 1e-14);
    CHECK((moved.e.matrix() - framed.basis).norm() < 1e-14);
    for (int k = 0; k < 2; ++k) {
        CHECK(moved.x_d[k].norm() == 0.0);
        CHECK(moved.e_d[k].norm() == 0.0);
    }

    for (int k = 0; k < 300; ++k) {
        const JetElement g = random_jet(3, 3), h = random_jet(3, 3);
        const StateNode t = random_node(3);
        CHECK(node_distance(jet_act(jet_compose(g, h), 3, t), jet_act(g, 3, jet_act(h, 3, t)), 3) < kTolGroup);
    }
}

TEST_CASE("jets of a displacement field act like displace_state") {
    const ParameterGrid grid = ParameterGrid::uniform(2, 7);
    const DisplacementField chi = DisplacementField::sample(grid, [](const Vec3& r) {
        return RigidMotion{Vec3(r.x() * r.y(), std::sin(r.y()), 1.0), Rotation::exp(Vec3(r.y(), 0.3 * r.x(), 0.0))};
    });
    const KinematicalState s0 = KinematicalState::inclusion(grid);
    const KinematicalState s = displace_state(s0, chi);
    const auto jets = jet_field(chi);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        CHECK(node_distance(jet_act(jets[n], n, s0.nodes[n]), s.nodes[n], 2) < 1e-13);
    }
}

TEST_CASE("right translation to the algebroid") {
    JetVariation shift;
    shift.da = random_vec();
    const AlgebroidElement t = to_algebroid(jet_identity(0, 1), shift);
    CHECK((t.zeta - shift.da).norm() == 0.0);
    CHECK(t.iota.norm() == 0.0);

    JetElement g = jet_identity(0, 1);
    g.a = Vec3::UnitX();
    g.r = random_rotation();
    JetVariation spin;
    spin.dR = hat(Vec3::UnitZ()) * g.r.matrix();
    const AlgebroidElement z = to_algebroid(g, spin);
    CHECK((z.iota - Vec3::UnitZ()).norm() < 1e-15);
    CHECK((z.zeta + Vec3::UnitY()).norm() < 1e-15);
}

TEST_CASE("algebroid slots of a smooth family") {
    // chi_eps(rho) = exp(eps X(rho)) chi(rho): the variation right-translates to X
    auto X = [](double r) { return IsoAlgebraElement{Vec3(std::sin(r), r * r, 1.0), Vec3(0.2 * r, std::cos(r), -r)}; };
    auto chi = [](double r) { return RigidMotion{Vec3(r, std::exp(r), 0.5), Rotation::exp(Vec3(r, -0.5 * r * r, 0.3))}; };
    auto slot_error = [&](int nodes) {
        const ParameterGrid grid = ParameterGrid::uniform(1, nodes, 0.0, 1.0);
        const auto jets = jet_field(DisplacementField::sample(grid, [&](const Vec3& r) { return chi(r.x()); }));
        std::vector<Vec3> da(grid.size());
        std::vector<Mat3> dR(grid.size());
        for (std::size_t n = 0; n < grid.size(); ++n) {
            const auto x = X(grid.coords(n).x());
            const auto c = chi(grid.coords(n).x());
            da[n] = x.v + x.w.cross(c.a);
            dR[n] = hat(x.w) * c.r.matrix();
        }
        const auto dda = differentiate(grid, da, 0);
        const auto ddR = differentiate(grid, dR, 0);
        double err = 0.0;
        for (std::size_t n = 1; n + 1 < grid.size(); ++n) {
            JetVariation v;
            v.da = da[n];
            v.dR = dR[n];
            v.da_d[0] = dda[n];
            v.dR_d[0] = ddR[n];
            const AlgebroidElement xi = to_algebroid(jets[n], v);
            const double r = grid.coords(n).x();
            const auto x = X(r);
            CHECK((xi.zeta - x.v).norm() < 1e-13);
            CHECK((xi.iota - x.w).norm() < 1e-13);
            const Vec3 dv(std::cos(r), 2 * r, 0.0);
            const Vec3 dw(0.2, -std::sin(r), -1.0);
            err = std::max(err, (xi.zeta_d[0] - dv).norm());
            err = std::max(err, (xi.iota_d[0] - hat(dw)).norm());
        }
        return err;
    };
    const double e1 = slot_error(11), e2 = slot_error(21), e3 = slot_error(41);
    CHECK(e3 < 1e-2);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("fundamental variation") {
    const StateNode s = random_node(2);
    AlgebroidElement zero;
    zero.p = 2;
    CHECK(variation_distance(fundamental_variation(zero, 0, s), StateVariation{}, 2) == 0.0);

    AlgebroidElement trans;
    trans.p = 2;
    trans.zeta = random_vec();
    trans.zeta_d[0] = random_vec();
    trans.zeta_d[1] = random_vec();
    const StateVariation t = fundamental_variation(trans, 0, s);
    CHECK((t.dx - trans.zeta).norm() == 0.0);
    CHECK(t.de.norm() == 0.0);
    CHECK((t.dx_d[0] - trans.zeta_d[0]).norm() == 0.0);
    CHECK((t.dx_d[1] - trans.zeta_d[1]).norm() == 0.0);

    // equals the derivative of the action along a path through g
    for (int k = 0; k < 50; ++k) {
        const JetElement g = random_jet(0, 2);
        const StateNode s0 = random_node(2);
        const Vec3 w = random_vec();
        JetVariation v;
        v.da = random_vec();
        v.dR = hat(w) * g.r.matrix();
        for (int q = 0; q < 2; ++q) {
            v.da_d[q] = random_vec();
            v.dR_d[q] = random_mat();
        }
        auto moved = [&](double eps) {
            JetElement ge = g;
            ge.a += eps * v.da;
            ge.r = Rotation::exp(eps * w) * g.r;
            for (int q = 0; q < 2; ++q) {
                ge.a_d[q] += eps * v.da_d[q];
                ge.r_d[q] += eps * v.dR_d[q];
            }
            return jet_act(ge, 0, s0);
        };
        const double h = 1e-5;
        const StateNode plus = moved(h), minus = moved(-h);
        StateVariation fd;
        fd.dx = (plus.x - minus.x) / (2 * h);
        fd.de = (plus.e.matrix() - minus.e.matrix()) / (2 * h);
        for (int q = 0; q < 2; ++q) {
            fd.dx_d[q] = (plus.x_d[q] - minus.x_d[q]) / (2 * h);
            fd.de_d[q] = (plus.e_d[q] - minus.e_d[q]) / (2 * h);
        }
        const StateVariation exact = fundamental_variation(to_algebroid(g, v), 0, jet_act(g, 0, s0));
        CHECK(variation_distance(exact, fd, 2) < 1e-8);
    }

    // linear in xi
    AlgebroidElement x1 = trans, x2;
    x2.p = 2;
    x2.iota = random_vec();
    x2.iota_d[0] = random_mat();
    AlgebroidElement sum = x1;
    sum.zeta = 2.0 * x1.zeta + x2.zeta;
    sum.iota = 2.0 * x1.iota + x2.iota;
    for (int q = 0; q < 2; ++q) {
        sum.zeta_d[q] = 2.0 * x1.zeta_d[q] + x2.zeta_d[q];
        sum.iota_d[q] = 2.0 * x1.iota_d[q] + x2.iota_d[q];
    }
    const StateVariation a = fundamental_variation(x1, 0, s), b = fundamental_variation(x2, 0, s);
    StateVariation lin;
    lin.dx = 2.0 * a.dx + b.dx;
    lin.de = 2.0 * a.de + b.de;
    for (int q = 0; q < 2; ++q) {
        lin.dx_d[q] = 2.0 * a.dx_d[q] + b.dx_d[q];
        lin.de_d[q] = 2.0 * a.de_d[q] + b.de_d[q];
    }
    CHECK(variation_distance(fundamental_variation(sum, 0, s), lin, 2) < 1e-13);
}

TEST_CASE("fundamental variations of constant sections follow the bracket") {
    for (int k = 0; k < 20; ++k) {
        const IsoAlgebraElement X = random_algebra(), Y = random_algebra();
        StateNode s;
        s.x = random_vec();
        s.e = random_rotation();
        auto act = [&](double a, double b) {
            const RigidMotion c = compose(compose(exp(X, a), exp(Y, b)), compose(exp(X, -a), exp(Y, -b)));
            JetElement g = jet_identity(0, 1);
            g.a = c.a;
            g.r = c.r;
            return jet_act(g, 0, s);
        };
        const double h = 1e-3;
        const Vec3 dx = (act(h, h).x - act(h, -h).x - act(-h, h).x + act(-h, -h).x) / (4 * h * h);
        const Mat3 de = (act(h, h).e.matrix() - act(h, -h).e.matrix() - act(-h, h).e.matrix() +
                         act(-h, -h).e.matrix()) / (4 * h * h);
        const IsoAlgebraElement b = bracket(X, Y);
        AlgebroidElement xi;
        xi.zeta = b.v;
        xi.iota = b.w;
        const StateVariation v = fundamental_variation(xi, 0, s);
        CHECK((v.dx - dx).norm() < 1e-5);
        CHECK((v.de - de).norm() < 1e-5);
    }
}

TEST_CASE("prolonged variations") {
    const ParameterGrid line = ParameterGrid::uniform(1, 9, 0.0, 2.0);
    const Vec3 c = random_vec();
    const Mat3 m = random_mat();
    const VariationField flat = prolong_variation(line, std::vector<Vec3>(line.size(), c), std::vector<Mat3>(line.size(), m));
    for (const auto& n : flat.nodes) {
        CHECK(n.dx_d[0].norm() == 0.0);
        CHECK(n.de_d[0].norm() == 0.0);
    }

    const Vec3 slope = random_vec();
    const Mat3 mslope = random_mat();
    std::vector<Vec3> dx(line.size());
    std::vector<Mat3> de(line.size());
    for (std::size_t n = 0; n < line.size(); ++n) {
        dx[n] = c + line.coords(n).x() * slope;
        de[n] = m + line.coords(n).x() * mslope;
    }
    const VariationField lin = prolong_variation(line, dx, de);
    for (const auto& n : lin.nodes) {
        CHECK((n.dx_d[0] - slope).norm() < 1e-14);
        CHECK((n.de_d[0] - mslope).norm() < 1e-14);
    }
    CHECK(max_variation_spencer_residual(lin) == 0.0);

    auto err = [](int nodes) {
        const ParameterGrid g = ParameterGrid::uniform(2, nodes);
        std::vector<Vec3> vx(g.size());
        std::vector<Mat3> ve(g.size());
        for (std::size_t n = 0; n < g.size(); ++n) {
            const Vec3 r = g.coords(n);
            vx[n] = Vec3(std::sin(r.x()), std::cos(r.y()), r.x() * r.y());
            ve[n] = std::exp(r.x() + r.y()) * Mat3::Identity();
        }
        const VariationField v = prolong_variation(g, vx, ve);
        double e = 0.0;
        for (std::size_t n = 0; n < g.size(); ++n) {
            const Vec3 r = g.coords(n);
            e = std::max(e, (v.nodes[n].dx_d[0] - Vec3(std::cos(r.x()), 0, r.y())).norm());
            e = std::max(e, (v.nodes[n].dx_d[1] - Vec3(0, -std::sin(r.y()), r.x())).norm());
            e = std::max(e, (v.nodes[n].de_d[1] - ve[n]).norm());
        }
        return e;
    };
    CHECK(std::log2(err(9) / err(17)) == doctest::Approx(2.0).epsilon(0.1));
}
