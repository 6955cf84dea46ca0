#include "cosserat/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace cosserat {

DisplacementField::DisplacementField(ParameterGrid g, std::vector<RigidMotion> values)
    : grid(std::move(g)), chi(std::move(values)) {
    if (chi.size() != grid.size()) throw GridMismatch("displacement field size does not match grid");
}

DisplacementField DisplacementField::constant(const ParameterGrid& g, const RigidMotion& value) {
    return DisplacementField(g, std::vector<RigidMotion>(g.size(), value));
}

DisplacementField DisplacementField::sample(const ParameterGrid& g,
                                            const std::function<RigidMotion(const Vec3&)>& f) {
    std::vector<RigidMotion> v;
    v.reserve(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) v.push_back(f(g.coords(n)));
    return DisplacementField(g, std::move(v));
}

std::vector<Vec3> DisplacementField::translations() const {
    std::vector<Vec3> out(chi.size());
    for (std::size_t n = 0; n < chi.size(); ++n) out[n] = chi[n].a;
    return out;
}

std::vector<Mat3> DisplacementField::rotations() const {
    std::vector<Mat3> out(chi.size());
    for (std::size_t n = 0; n < chi.size(); ++n) out[n] = chi[n].r.matrix();
    return out;
}

KinematicalState::KinematicalState(ParameterGrid g, std::vector<StateNode> values)
    : grid(std::move(g)), nodes(std::move(values)) {
    if (nodes.size() != grid.size()) throw GridMismatch("state size does not match grid");
}

KinematicalState KinematicalState::inclusion(const ParameterGrid& g) {
    std::vector<StateNode> nodes(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        nodes[n].x = g.coords(n);
        for (int a = 0; a < g.dim(); ++a) nodes[n].x_d[a] = Vec3::Unit(a);
    }
    return KinematicalState(g, std::move(nodes));
}

KinematicalState KinematicalState::prolong(const ParameterGrid& g,
                                           const std::function<StateNode(const Vec3&)>& f) {
    std::vector<StateNode> nodes(g.size());
    std::vector<Vec3> xs(g.size());
    std::vector<Mat3> es(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        nodes[n] = f(g.coords(n));
        xs[n] = nodes[n].x;
        es[n] = nodes[n].e.matrix();
    }
    for (int a = 0; a < g.dim(); ++a) {
        const auto dx = differentiate(g, xs, a);
        const auto de = differentiate(g, es, a);
        for (std::size_t n = 0; n < g.size(); ++n) {
            nodes[n].x_d[a] = dx[n];
            nodes[n].e_d[a] = de[n];
        }
    }
    for (int a = g.dim(); a < 3; ++a) {
        for (auto& node : nodes) {
            node.x_d[a].setZero();
            node.e_d[a].setZero();
        }
    }
    return KinematicalState(g, std::move(nodes));
}

DeformationForm::DeformationForm(ParameterGrid g)
    : grid(std::move(g)), xi(grid.size(), zero_vec_slots()), omega(grid.size(), zero_vec_slots()) {}

KinematicalState displace_state(const KinematicalState& initial, const DisplacementField& chi) {
    require_same_grid(initial.grid, chi.grid, "displace_state");
    const auto& g = chi.grid;
    const auto as = chi.translations();
    const auto rs = chi.rotations();
    std::vector<StateNode> out(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto& s0 = initial.nodes[n];
        const auto& c = chi.chi[n];
        out[n].x = c.apply(s0.x);
        out[n].e = c.r * s0.e;
    }
    for (int a = 0; a < g.dim(); ++a) {
        const auto da = differentiate(g, as, a);
        const auto dr = differentiate(g, rs, a);
        for (std::size_t n = 0; n < g.size(); ++n) {
            const auto& s0 = initial.nodes[n];
            const Mat3& r = rs[n];
            out[n].x_d[a] = da[n] + dr[n] * s0.x + r * s0.x_d[a];
            out[n].e_d[a] = dr[n] * s0.e.matrix() + r * s0.e_d[a];
        }
    }
    return KinematicalState(g, std::move(out));
}

DeformationForm deformation_of(const DisplacementField& chi) {
    const auto& g = chi.grid;
    DeformationForm E(g);
    const auto as = chi.translations();
    const auto rs = chi.rotations();
    for (int a = 0; a < g.dim(); ++a) {
        const auto da = differentiate(g, as, a);
        const auto dr = differentiate(g, rs, a);
        for (std::size_t n = 0; n < g.size(); ++n) {
            const Mat3 w = dr[n] * rs[n].transpose();
            E.symmetric_residue = std::max(E.symmetric_residue, sym(w).norm());
            const Vec3 om = vee(w);
            E.omega[n][a] = om;
            E.xi[n][a] = da[n] - om.cross(as[n]);
        }
    }
    return E;
}

std::vector<double> spencer_residual(const KinematicalState& s) {
    const auto& g = s.grid;
    std::vector<Vec3> xs(g.size());
    std::vector<Mat3> es(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        xs[n] = s.nodes[n].x;
        es[n] = s.nodes[n].e.matrix();
    }
    std::vector<double> sq(g.size(), 0.0);
    for (int a = 0; a < g.dim(); ++a) {
        const auto dx = differentiate(g, xs, a);
        const auto de = differentiate(g, es, a);
        for (std::size_t n = 0; n < g.size(); ++n) {
            sq[n] += (dx[n] - s.nodes[n].x_d[a]).squaredNorm();
            sq[n] += (de[n] - s.nodes[n].e_d[a]).squaredNorm();
        }
    }
    for (double& v : sq) v = std::sqrt(v);
    return sq;
}

double max_spencer_residual(const KinematicalState& s) {
    const auto r = spencer_residual(s);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

DeformationChain deformation_chain(const DisplacementField& chi, const KinematicalState& initial) {
    require_same_grid(initial.grid, chi.grid, "deformation_chain");
    const auto& g = chi.grid;
    const std::size_t nn = g.size();
    const auto as = chi.translations();
    const auto rs = chi.rotations();
    std::vector<Vec3> x0(nn), xs(nn), us(nn);
    for (std::size_t n = 0; n < nn; ++n) {
        x0[n] = initial.nodes[n].x;
        xs[n] = chi.chi[n].apply(x0[n]);
        us[n] = xs[n] - x0[n];
    }
    DeformationChain out;
    out.from_translation.assign(nn, zero_vec_slots());
    out.from_position.assign(nn, zero_vec_slots());
    out.from_displacement.assign(nn, zero_vec_slots());
    out.initial_frame_term.assign(nn, zero_vec_slots());
    for (int a = 0; a < g.dim(); ++a) {
        const auto da = differentiate(g, as, a);
        const auto dr = differentiate(g, rs, a);
        const auto dx = differentiate(g, xs, a);
        const auto du = differentiate(g, us, a);
        const auto dx0 = differentiate(g, x0, a);
        for (std::size_t n = 0; n < nn; ++n) {
            const Mat3 w = dr[n] * rs[n].transpose();
            out.from_translation[n][a] = da[n] - w * as[n];
            out.from_position[n][a] = dx[n] - w * xs[n];
            out.from_displacement[n][a] = du[n] - w * xs[n];
            out.initial_frame_term[n][a] = rs[n] * dx0[n];
        }
    }
    return out;
}

double StrainDecomposition::reconstruction_defect() const {
    double worst = 0.0;
    for (std::size_t n = 0; n < E.size(); ++n) {
        const Mat3 d = E[n] - 0.5 * (e[n] + theta[n]) + orbital[n];
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    return worst;
}

StrainDecomposition strain_decompose(const DisplacementField& chi, const KinematicalState& initial) {
    require_same_grid(initial.grid, chi.grid, "strain_decompose");
    const auto& g = chi.grid;
    if (g.dim() != 3) throw std::invalid_argument("strain_decompose needs a 3D parameter grid");
    const std::size_t nn = g.size();
    std::vector<Vec3> us(nn), xs(nn);
    for (std::size_t n = 0; n < nn; ++n) {
        const Vec3& x0 = initial.nodes[n].x;
        if ((x0 - g.coords(n)).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("strain_decompose needs the inclusion as initial state");
        }
        xs[n] = chi.chi[n].apply(x0);
        us[n] = xs[n] - x0;
    }
    const DeformationForm E = deformation_of(chi);
    std::vector<Mat3> grad(nn, Mat3::Zero());
    StrainDecomposition out;
    out.orbital.assign(nn, Mat3::Zero());
    for (int j = 0; j < 3; ++j) {
        const auto du = differentiate(g, us, j);
        for (std::size_t n = 0; n < nn; ++n) {
            grad[n].col(j) = du[n];
            out.orbital[n].col(j) = E.omega[n][j].cross(xs[n]);
        }
    }
    out.e.resize(nn);
    out.theta.resize(nn);
    out.E.resize(nn);
    for (std::size_t n = 0; n < nn; ++n) {
        out.e[n] = grad[n] + grad[n].transpose();
        out.theta[n] = grad[n] - grad[n].transpose();
        out.E[n] = grad[n] - out.orbital[n];
    }
    return out;
}

DisplacementField from_schaefer(const std::vector<Vec3>& phi, const std::vector<Vec3>& u,
                                const KinematicalState& initial) {
    const auto& g = initial.grid;
    if (phi.size() != g.size() || u.size() != g.size()) {
        throw GridMismatch("from_schaefer: sample counts do not match the grid");
    }
    std::vector<RigidMotion> out(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double angle = phi[n].norm();
        if (!(angle <= kSchaeferMaxAngle)) {
            throw NumericalError("from_schaefer: |phi| = " + std::to_string(angle) + " at node " +
                                 std::to_string(n) + " is too large for the polar projection");
        }
        out[n].a = u[n] - phi[n].cross(initial.nodes[n].x);
        out[n].r = Rotation::project(Mat3::Identity() + hat(phi[n]));
    }
    return DisplacementField(g, std::move(out));
}

}  // namespace cosserat
