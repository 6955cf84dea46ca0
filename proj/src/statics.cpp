#include "cosserat/statics.hpp"

#include <algorithm>
#include <cmath>

namespace cosserat {

namespace {

constexpr double kIntegrabilityTol = 1e-9;

std::vector<Vec3> sigma_slot(const FundamentalOneForm& phi, int a) {
    std::vector<Vec3> out(phi.nodes.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = phi.nodes[n].sigma[a];
    return out;
}

std::vector<Mat3> mu_slot(const FundamentalOneForm& phi, int a) {
    std::vector<Mat3> out(phi.nodes.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = phi.nodes[n].mu[a];
    return out;
}

std::vector<Vec3> positions(const KinematicalState& s) {
    std::vector<Vec3> out(s.nodes.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = s.nodes[n].x;
    return out;
}

std::vector<Mat3> frames(const KinematicalState& s) {
    std::vector<Mat3> out(s.nodes.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = s.nodes[n].e.matrix();
    return out;
}

// D_a sigma^a summed over a
std::vector<Vec3> sigma_divergence(const FundamentalOneForm& phi) {
    std::vector<Vec3> out(phi.nodes.size(), Vec3::Zero());
    for (int a = 0; a < phi.grid.dim(); ++a) {
        const auto d = differentiate(phi.grid, sigma_slot(phi, a), a);
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += d[n];
    }
    return out;
}

void require_integrable(const KinematicalState& s) {
    const auto r = spencer_residual(s);
    for (std::size_t n = 0; n < r.size(); ++n) {
        if (r[n] > kIntegrabilityTol) throw NonIntegrable("state is not integrable", n, r[n]);
    }
}

Mat3 moment_source(const PhiNode& f, const StateNode& s, int p) {
    Mat3 S = Mat3::Zero();
    for (int a = 0; a < p; ++a) S += f.sigma[a] * s.x_d[a].transpose() + f.mu[a] * s.e_d[a].transpose();
    return S;
}

double state_scale(const KinematicalState& s) {
    double m = 1.0;
    for (const auto& n : s.nodes) {
        m = std::max(m, n.x.cwiseAbs().maxCoeff());
        for (int a = 0; a < s.grid.dim(); ++a) {
            m = std::max(m, n.x_d[a].cwiseAbs().maxCoeff());
            m = std::max(m, n.e_d[a].cwiseAbs().maxCoeff());
        }
    }
    return m;
}

void require_euclidian(const FundamentalOneForm& phi, const KinematicalState& s, double tol) {
    if (!is_euclidian(phi, s, tol)) {
        const auto c = euclidian_check(phi, s);
        throw NotEuclidian("fundamental 1-form is not Euclidian (force residual " +
                           std::to_string(c.residual_F) + ", moment residual " +
                           std::to_string(c.residual_M) + ")");
    }
}

EquilibriumResidual empty_residual(const ParameterGrid& g) {
    return {g, std::vector<Vec3>(g.size(), Vec3::Zero()), std::vector<Mat3>(g.size(), Mat3::Zero())};
}

}  // namespace

FundamentalOneForm::FundamentalOneForm(ParameterGrid g, std::vector<PhiNode> values)
    : grid(std::move(g)), nodes(std::move(values)) {
    if (nodes.size() != grid.size()) throw GridMismatch("fundamental 1-form size does not match grid");
}

FundamentalOneForm FundamentalOneForm::zero(const ParameterGrid& g) {
    return FundamentalOneForm(g, std::vector<PhiNode>(g.size()));
}

double FundamentalOneForm::scale() const {
    double m = 0.0;
    for (const auto& n : nodes) {
        m = std::max({m, n.F.cwiseAbs().maxCoeff(), n.M.cwiseAbs().maxCoeff()});
        for (int a = 0; a < grid.dim(); ++a) {
            m = std::max({m, n.sigma[a].cwiseAbs().maxCoeff(), n.mu[a].cwiseAbs().maxCoeff()});
        }
    }
    return m;
}

FundamentalOneForm ConstitutiveLaw::apply(const KinematicalState& s) const {
    std::vector<PhiNode> out(s.grid.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = eval(s.grid.coords(n), s.nodes[n], s.grid.dim());
    return FundamentalOneForm(s.grid, std::move(out));
}

ConstitutiveLaw linear_cosserat_law(const LinearCosseratModuli& k) {
    ConstitutiveLaw law;
    law.name = "linear-cosserat";
    law.parameters = {{"axial", k.axial}, {"shear", k.shear}, {"torsion", k.torsion}, {"bending", k.bending}};
    law.eval = [k](const Vec3&, const StateNode& s, int p) {
        PhiNode out;
        const Mat3& e = s.e.matrix();
        for (int a = 0; a < p; ++a) {
            const Vec3 gamma = e.transpose() * s.x_d[a] - Vec3::Unit(a);
            const Vec3 kappa = vee(e.transpose() * s.e_d[a]);
            Vec3 n = k.shear * gamma;
            Vec3 m = k.bending * kappa;
            n(a) = k.axial * gamma(a);
            m(a) = k.torsion * kappa(a);
            out.sigma[a] = e * n;
            out.mu[a] = 0.5 * hat(e * m) * e;
        }
        return out;
    };
    return law;
}

double EquilibriumResidual::max_force() const {
    double m = 0.0;
    for (const auto& f : force) m = std::max(m, f.cwiseAbs().maxCoeff());
    return m;
}

double EquilibriumResidual::max_moment() const {
    double m = 0.0;
    for (const auto& f : moment) m = std::max(m, f.cwiseAbs().maxCoeff());
    return m;
}

double EquilibriumResidual::antisymmetry_defect() const {
    double m = 0.0;
    for (const auto& f : moment) m = std::max(m, (f + f.transpose()).cwiseAbs().maxCoeff());
    return m;
}

std::vector<double> virtual_work(const FundamentalOneForm& phi, const VariationField& ds) {
    require_same_grid(phi.grid, ds.grid, "virtual_work");
    std::vector<double> out(phi.grid.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const auto& f = phi.nodes[n];
        const auto& v = ds.nodes[n];
        double w = f.F.dot(v.dx) + contract(f.M, v.de);
        for (int a = 0; a < phi.grid.dim(); ++a) w += f.sigma[a].dot(v.dx_d[a]) + contract(f.mu[a], v.de_d[a]);
        out[n] = w;
    }
    return out;
}

VirtualWorkSplit total_virtual_work(const FundamentalOneForm& phi, const VariationField& ds) {
    require_same_grid(phi.grid, ds.grid, "total_virtual_work");
    const auto& g = phi.grid;
    double vscale = 1.0;
    for (const auto& v : ds.nodes) vscale = std::max({vscale, v.dx.cwiseAbs().maxCoeff(), v.de.cwiseAbs().maxCoeff()});
    const double defect = max_variation_spencer_residual(ds);
    if (defect > kIntegrabilityTol * vscale) {
        throw NonIntegrable("virtual displacement is not integrable", 0, defect);
    }

    VirtualWorkSplit out;
    const auto local = virtual_work(phi, ds);
    std::vector<Vec3> dsig(g.size(), Vec3::Zero());
    std::vector<Mat3> dmu(g.size(), Mat3::Zero());
    for (int a = 0; a < g.dim(); ++a) {
        const auto s = differentiate(g, sigma_slot(phi, a), a);
        const auto m = differentiate(g, mu_slot(phi, a), a);
        for (std::size_t n = 0; n < g.size(); ++n) {
            dsig[n] += s[n];
            dmu[n] += m[n];
        }
    }
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double w = g.volume_weight(n);
        const auto& f = phi.nodes[n];
        const auto& v = ds.nodes[n];
        out.direct += w * local[n];
        out.interior += w * ((f.F - dsig[n]).dot(v.dx) + contract(f.M - dmu[n], v.de));
        for (int a = 0; a < g.dim(); ++a) {
            const int side = g.face_side(n, a);
            if (side == 0) continue;
            double fw = 1.0;
            for (int b = 0; b < g.dim(); ++b) {
                if (b == a) continue;
                fw *= g.face_side(n, b) == 0 ? g.spacing(b) : 0.5 * g.spacing(b);
            }
            BoundaryTerm t;
            t.node = n;
            t.axis = a;
            t.side = side;
            t.weight = fw;
            t.traction = side * f.sigma[a];
            t.couple = side * f.mu[a];
            out.boundary += fw * (t.traction.dot(v.dx) + contract(t.couple, v.de));
            out.terms.push_back(t);
        }
    }
    return out;
}

EulerianComponents eulerian_components(const FundamentalOneForm& phi, const KinematicalState& s) {
    require_same_grid(phi.grid, s.grid, "eulerian_components");
    const int p = phi.grid.dim();
    EulerianComponents out{phi.grid, std::vector<EulerianNode>(phi.grid.size())};
    for (std::size_t n = 0; n < out.nodes.size(); ++n) {
        const auto& f = phi.nodes[n];
        const auto& st = s.nodes[n];
        auto& c = out.nodes[n];
        const Mat3& e = st.e.matrix();
        c.F = f.F;
        c.M = skew(f.M * e.transpose() + f.F * st.x.transpose() + moment_source(f, st, p));
        for (int a = 0; a < p; ++a) {
            c.sigma[a] = f.sigma[a];
            c.mu[a] = skew(f.mu[a] * e.transpose() + f.sigma[a] * st.x.transpose());
        }
    }
    return out;
}

double eulerian_pairing(const EulerianNode& c, const AlgebroidElement& xi) {
    double w = c.F.dot(xi.zeta) + contract(c.M, hat(xi.iota));
    for (int a = 0; a < xi.p; ++a) w += c.sigma[a].dot(xi.zeta_d[a]) + contract(c.mu[a], xi.iota_d[a]);
    return w;
}

EuclidianCheck euclidian_check(const FundamentalOneForm& phi, const KinematicalState& s) {
    require_same_grid(phi.grid, s.grid, "euclidian_check");
    EuclidianCheck out;
    double f2 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < phi.nodes.size(); ++n) {
        const auto& f = phi.nodes[n];
        const auto& st = s.nodes[n];
        f2 += f.F.squaredNorm();
        m2 += skew(f.M * st.e.matrix().transpose() + moment_source(f, st, phi.grid.dim())).squaredNorm();
    }
    out.residual_F = std::sqrt(f2);
    out.residual_M = std::sqrt(m2);
    return out;
}

bool is_euclidian(const FundamentalOneForm& phi, const KinematicalState& s, double tol) {
    const auto c = euclidian_check(phi, s);
    const double bound = tol * std::max(1.0, phi.scale()) * state_scale(s) *
                         std::sqrt(static_cast<double>(phi.grid.size()));
    return c.residual_F <= bound && c.residual_M <= bound;
}

FundamentalOneForm euclidian_project(const FundamentalOneForm& phi, const KinematicalState& s) {
    require_same_grid(phi.grid, s.grid, "euclidian_project");
    FundamentalOneForm out = phi;
    for (std::size_t n = 0; n < out.nodes.size(); ++n) {
        auto& f = out.nodes[n];
        const auto& st = s.nodes[n];
        const Mat3& e = st.e.matrix();
        f.F.setZero();
        f.M = (sym(f.M * e.transpose()) - skew(moment_source(f, st, phi.grid.dim()))) * e;
    }
    return out;
}

EquilibriumResidual equilibrium_residual_lagrangian(const FundamentalOneForm& phi,
                                                    const KinematicalState& s) {
    require_same_grid(phi.grid, s.grid, "equilibrium_residual_lagrangian");
    require_integrable(s);
    const auto& g = phi.grid;
    EquilibriumResidual r = empty_residual(g);
    const auto dsig = sigma_divergence(phi);
    std::vector<Mat3> dmu(g.size(), Mat3::Zero());
    for (int a = 0; a < g.dim(); ++a) {
        const auto d = differentiate(g, mu_slot(phi, a), a);
        for (std::size_t n = 0; n < g.size(); ++n) dmu[n] += d[n];
    }
    for (std::size_t n = 0; n < g.size(); ++n) {
        r.force[n] = phi.nodes[n].F - dsig[n];
        r.moment[n] = skew((phi.nodes[n].M - dmu[n]) * s.nodes[n].e.matrix().transpose());
    }
    return r;
}

EquilibriumResidual equilibrium_residual_expanded(const FundamentalOneForm& phi,
                                                  const KinematicalState& s) {
    require_same_grid(phi.grid, s.grid, "equilibrium_residual_expanded");
    const auto& g = phi.grid;
    const int p = g.dim();
    EquilibriumResidual r = empty_residual(g);
    const auto xs = positions(s);
    const auto es = frames(s);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto& f = phi.nodes[n];
        const auto& st = s.nodes[n];
        r.force[n] = f.F;
        r.moment[n] = skew(f.M * es[n].transpose()) + skew(f.F * xs[n].transpose()) +
                      skew(moment_source(f, st, p));
    }
    for (int a = 0; a < p; ++a) {
        const auto sig = sigma_slot(phi, a);
        const auto mu = mu_slot(phi, a);
        const auto dsig = differentiate(g, sig, a);
        const auto dmu = differentiate(g, mu, a);
        const auto dx = differentiate(g, xs, a);
        const auto de = differentiate(g, es, a);
        for (std::size_t n = 0; n < g.size(); ++n) {
            r.force[n] -= dsig[n];
            r.moment[n] -= skew(dmu[n] * es[n].transpose()) + skew(mu[n] * de[n].transpose());
            r.moment[n] -= skew(dsig[n] * xs[n].transpose()) + skew(sig[n] * dx[n].transpose());
        }
    }
    return r;
}

EquilibriumResidual equilibrium_residual_compact(const FundamentalOneForm& phi,
                                                 const KinematicalState& s) {
    const auto& g = phi.grid;
    const EulerianComponents c = eulerian_components(phi, s);
    EquilibriumResidual r = empty_residual(g);
    const auto dsig = sigma_divergence(phi);
    for (std::size_t n = 0; n < g.size(); ++n) {
        r.force[n] = phi.nodes[n].F - dsig[n];
        r.moment[n] = c.nodes[n].M;
    }
    for (int a = 0; a < g.dim(); ++a) {
        std::vector<Mat3> mub(g.size());
        for (std::size_t n = 0; n < g.size(); ++n) mub[n] = c.nodes[n].mu[a];
        const auto d = differentiate(g, mub, a);
        for (std::size_t n = 0; n < g.size(); ++n) r.moment[n] -= d[n];
    }
    return r;
}

EquilibriumResidual equilibrium_residual_eulerian(const FundamentalOneForm& phi,
                                                  const KinematicalState& s, double tol) {
    require_same_grid(phi.grid, s.grid, "equilibrium_residual_eulerian");
    require_euclidian(phi, s, tol);
    const auto& g = phi.grid;
    const int p = g.dim();
    EquilibriumResidual r = empty_residual(g);
    r.force = sigma_divergence(phi);
    for (std::size_t n = 0; n < g.size(); ++n) {
        Mat3 S = Mat3::Zero();
        for (int a = 0; a < p; ++a) S += phi.nodes[n].sigma[a] * s.nodes[n].x_d[a].transpose();
        r.moment[n] = skew(S);
    }
    for (int a = 0; a < p; ++a) {
        std::vector<Mat3> couple(g.size());
        for (std::size_t n = 0; n < g.size(); ++n) {
            couple[n] = skew(phi.nodes[n].mu[a] * s.nodes[n].e.matrix().transpose());
        }
        const auto d = differentiate(g, couple, a);
        for (std::size_t n = 0; n < g.size(); ++n) r.moment[n] += d[n];
    }
    return r;
}

EquilibriumResidual equilibrium_residual_cosserat3d(const FundamentalOneForm& phi,
                                                    const KinematicalState& s, double tol) {
    require_same_grid(phi.grid, s.grid, "equilibrium_residual_cosserat3d");
    const auto& g = phi.grid;
    if (g.dim() != 3) throw std::invalid_argument("equilibrium_residual_cosserat3d needs p = 3");
    const std::size_t N = g.size();
    std::vector<Mat3> jinv(N);
    for (std::size_t n = 0; n < N; ++n) {
        Mat3 J;
        for (int a = 0; a < 3; ++a) J.col(a) = s.nodes[n].x_d[a];
        const double det = J.determinant();
        if (!(std::abs(det) > 1e-12)) throw SingularJacobian(n, det);
        jinv[n] = J.inverse();
    }
    require_euclidian(phi, s, tol);

    // deformed-coordinate stress columns sigma^j and couple stresses mu_bar^k
    std::array<std::vector<Vec3>, 3> sig;
    std::array<std::vector<Mat3>, 3> mub;
    std::vector<Mat3> stress(N, Mat3::Zero());
    for (int j = 0; j < 3; ++j) {
        sig[j].assign(N, Vec3::Zero());
        mub[j].assign(N, Mat3::Zero());
    }
    for (std::size_t n = 0; n < N; ++n) {
        const auto& f = phi.nodes[n];
        const auto& st = s.nodes[n];
        for (int a = 0; a < 3; ++a) {
            const Mat3 couple = skew(f.mu[a] * st.e.matrix().transpose());
            for (int j = 0; j < 3; ++j) {
                sig[j][n] += st.x_d[a](j) * f.sigma[a];
                mub[j][n] += st.x_d[a](j) * couple;
            }
        }
        for (int j = 0; j < 3; ++j) stress[n].col(j) = sig[j][n];
    }

    EquilibriumResidual r = empty_residual(g);
    for (std::size_t n = 0; n < N; ++n) r.moment[n] = skew(stress[n]);
    for (int j = 0; j < 3; ++j)
        for (int a = 0; a < 3; ++a) {
            const auto ds = differentiate(g, sig[j], a);
            const auto dm = differentiate(g, mub[j], a);
            for (std::size_t n = 0; n < N; ++n) {
                r.force[n] += jinv[n](a, j) * ds[n];
                r.moment[n] += jinv[n](a, j) * dm[n];
            }
        }
    return r;
}

}  // namespace cosserat
