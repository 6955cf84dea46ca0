#include "cosserat/jet_groupoid.hpp"

#include <algorithm>
#include <cmath>

namespace cosserat {

std::vector<double> JetElement::local_coordinates(const ParameterGrid& grid) const {
    std::vector<double> c;
    c.reserve(manifold_dimension(p));
    const Vec3 rho_xyz = grid.coords(rho);
    for (int k = 0; k < p; ++k) c.push_back(rho_xyz(k));
    const Vec3 w = r.log();
    for (int i = 0; i < 3; ++i) c.push_back(a(i));
    for (int i = 0; i < 3; ++i) c.push_back(w(i));
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < 3; ++i) c.push_back(a_d[k](i));
    for (int k = 0; k < p; ++k) {
        const Vec3 wk = vee(r_d[k] * r.matrix().transpose());
        for (int i = 0; i < 3; ++i) c.push_back(wk(i));
    }
    return c;
}

VariationField::VariationField(ParameterGrid g, std::vector<StateVariation> values)
    : grid(std::move(g)), nodes(std::move(values)) {
    if (nodes.size() != grid.size()) throw GridMismatch("variation size does not match grid");
}

VariationField VariationField::zero(const ParameterGrid& g) {
    return VariationField(g, std::vector<StateVariation>(g.size()));
}

namespace {

void require_fiber(std::size_t lhs, std::size_t rhs) {
    if (lhs != rhs) throw SourceMismatch(lhs, rhs);
}

}  // namespace

JetElement jet_identity(std::size_t rho, int p) {
    JetElement e;
    e.rho = rho;
    e.p = p;
    return e;
}

JetElement jet_compose(const JetElement& g, const JetElement& h) {
    require_fiber(g.rho, h.rho);
    if (g.p != h.p) throw std::invalid_argument("jet elements with different slot counts");
    JetElement out;
    out.rho = g.rho;
    out.p = g.p;
    const Mat3& R = g.r.matrix();
    out.a = g.a + R * h.a;
    out.r = g.r * h.r;
    for (int k = 0; k < g.p; ++k) {
        out.a_d[k] = g.a_d[k] + g.r_d[k] * h.a + R * h.a_d[k];
        out.r_d[k] = g.r_d[k] * h.r.matrix() + R * h.r_d[k];
    }
    return out;
}

JetElement jet_inverse(const JetElement& g) {
    JetElement out;
    out.rho = g.rho;
    out.p = g.p;
    const Mat3 rt = g.r.matrix().transpose();
    out.r = g.r.inverse();
    out.a = -(rt * g.a);
    for (int k = 0; k < g.p; ++k) {
        out.r_d[k] = -rt * g.r_d[k] * rt;
        out.a_d[k] = -(out.r_d[k] * g.a) - rt * g.a_d[k];
    }
    return out;
}

StateNode jet_act(const JetElement& g, std::size_t rho, const StateNode& s) {
    require_fiber(g.rho, rho);
    StateNode out;
    const Mat3& R = g.r.matrix();
    out.x = g.a + R * s.x;
    out.e = g.r * s.e;
    for (int k = 0; k < g.p; ++k) {
        out.x_d[k] = g.a_d[k] + g.r_d[k] * s.x + R * s.x_d[k];
        out.e_d[k] = g.r_d[k] * s.e.matrix() + R * s.e_d[k];
    }
    return out;
}

std::vector<JetElement> jet_field(const DisplacementField& chi) {
    const auto& grid = chi.grid;
    std::vector<JetElement> out(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        out[n].rho = n;
        out[n].p = grid.dim();
        out[n].a = chi.chi[n].a;
        out[n].r = chi.chi[n].r;
    }
    const auto as = chi.translations();
    const auto rs = chi.rotations();
    for (int k = 0; k < grid.dim(); ++k) {
        const auto da = differentiate(grid, as, k);
        const auto dr = differentiate(grid, rs, k);
        for (std::size_t n = 0; n < grid.size(); ++n) {
            out[n].a_d[k] = da[n];
            out[n].r_d[k] = dr[n];
        }
    }
    return out;
}

AlgebroidElement to_algebroid(const JetElement& g, const JetVariation& v) {
    AlgebroidElement out;
    out.rho = g.rho;
    out.p = g.p;
    const Mat3& R = g.r.matrix();
    const Mat3 rt = R.transpose();
    out.iota = vee(v.dR * rt);
    const Mat3 dI = hat(out.iota);
    out.zeta = v.da - dI * g.a;
    for (int k = 0; k < g.p; ++k) {
        out.iota_d[k] = v.dR_d[k] * rt - v.dR * rt * g.r_d[k] * rt;
        out.zeta_d[k] = v.da_d[k] - out.iota_d[k] * g.a - dI * g.a_d[k];
    }
    return out;
}

StateVariation fundamental_variation(const AlgebroidElement& xi, std::size_t rho, const StateNode& s) {
    require_fiber(xi.rho, rho);
    StateVariation out;
    const Mat3 dI = hat(xi.iota);
    out.dx = xi.zeta + dI * s.x;
    out.de = dI * s.e.matrix();
    for (int k = 0; k < xi.p; ++k) {
        out.dx_d[k] = xi.zeta_d[k] + xi.iota_d[k] * s.x + dI * s.x_d[k];
        out.de_d[k] = xi.iota_d[k] * s.e.matrix() + dI * s.e_d[k];
    }
    return out;
}

VariationField prolong_variation(const ParameterGrid& grid, const std::vector<Vec3>& dx,
                                 const std::vector<Mat3>& de) {
    if (dx.size() != grid.size() || de.size() != grid.size()) {
        throw GridMismatch("prolong_variation: sample counts do not match the grid");
    }
    std::vector<StateVariation> nodes(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        nodes[n].dx = dx[n];
        nodes[n].de = de[n];
    }
    for (int k = 0; k < grid.dim(); ++k) {
        const auto ddx = differentiate(grid, dx, k);
        const auto dde = differentiate(grid, de, k);
        for (std::size_t n = 0; n < grid.size(); ++n) {
            nodes[n].dx_d[k] = ddx[n];
            nodes[n].de_d[k] = dde[n];
        }
    }
    return VariationField(grid, std::move(nodes));
}

double max_variation_spencer_residual(const VariationField& v) {
    const auto& grid = v.grid;
    std::vector<Vec3> dx(grid.size());
    std::vector<Mat3> de(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        dx[n] = v.nodes[n].dx;
        de[n] = v.nodes[n].de;
    }
    std::vector<double> sq(grid.size(), 0.0);
    for (int k = 0; k < grid.dim(); ++k) {
        const auto ddx = differentiate(grid, dx, k);
        const auto dde = differentiate(grid, de, k);
        for (std::size_t n = 0; n < grid.size(); ++n) {
            sq[n] += (ddx[n] - v.nodes[n].dx_d[k]).squaredNorm();
            sq[n] += (dde[n] - v.nodes[n].de_d[k]).squaredNorm();
        }
    }
    double worst = 0.0;
    for (double s : sq) worst = std::max(worst, std::sqrt(s));
    return worst;
}

}  // namespace cosserat
