#include "cosserat/fundamental_sequence.hpp"

#include <algorithm>
#include <cmath>

namespace cosserat {

namespace {

std::vector<Vec3> slot(const std::vector<VecSlots>& f, int k) {
    std::vector<Vec3> out(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) out[n] = f[n][k];
    return out;
}

// derivs[a][b][node] = d_a f_b
using SlotDerivatives = std::array<std::array<std::vector<Vec3>, 3>, 3>;

SlotDerivatives slot_derivatives(const ParameterGrid& g, const std::vector<VecSlots>& f, int slots) {
    SlotDerivatives d;
    for (int b = 0; b < slots; ++b) {
        const auto fb = slot(f, b);
        for (int a = 0; a < g.dim(); ++a) d[a][b] = differentiate(g, fb, a);
    }
    return d;
}

}  // namespace

Iso3TwoForm::Iso3TwoForm(ParameterGrid g)
    : grid(std::move(g)), theta(grid.size(), zero_vec_slots()), omega(grid.size(), zero_vec_slots()) {}

Vec3 Iso3TwoForm::theta_at(std::size_t node, int a, int b) const {
    if (a == b) return Vec3::Zero();
    return a < b ? theta[node][pair_slot(a, b)] : Vec3(-theta[node][pair_slot(b, a)]);
}

Vec3 Iso3TwoForm::omega_at(std::size_t node, int a, int b) const {
    if (a == b) return Vec3::Zero();
    return a < b ? omega[node][pair_slot(a, b)] : Vec3(-omega[node][pair_slot(b, a)]);
}

Iso3ThreeForm::Iso3ThreeForm(ParameterGrid g) : grid(std::move(g)) {
    if (grid.dim() == 3) {
        theta.assign(grid.size(), Vec3::Zero());
        omega.assign(grid.size(), Vec3::Zero());
    }
}

DeformationForm nabla_chi(const DisplacementField& chi) { return deformation_of(chi); }

Iso3TwoForm nabla_wedge_1(const DeformationForm& E) {
    const auto& g = E.grid;
    Iso3TwoForm F(g);
    const int p = g.dim();
    if (p < 2) return F;
    const auto dxi = slot_derivatives(g, E.xi, p);
    const auto dom = slot_derivatives(g, E.omega, p);
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b) {
            const int s = pair_slot(a, b);
            for (std::size_t n = 0; n < g.size(); ++n) {
                const Vec3& wa = E.omega[n][a];
                const Vec3& wb = E.omega[n][b];
                F.theta[n][s] = dxi[a][b][n] - dxi[b][a][n] - wa.cross(E.xi[n][b]) + wb.cross(E.xi[n][a]);
                F.omega[n][s] = dom[a][b][n] - dom[b][a][n] - wa.cross(wb);
            }
        }
    return F;
}

Iso3ThreeForm nabla_wedge_2(const Iso3TwoForm& F, const DeformationForm& E) {
    require_same_grid(F.grid, E.grid, "nabla_wedge_2");
    const auto& g = E.grid;
    Iso3ThreeForm out(g);
    if (g.dim() == 1) return out;
    if (g.dim() != 3) throw std::invalid_argument("nabla_wedge_2 needs a 3D parameter grid");
    const auto dth = slot_derivatives(g, F.theta, 3);
    const auto dom = slot_derivatives(g, F.omega, 3);
    static constexpr int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (std::size_t n = 0; n < g.size(); ++n) {
        Vec3 th = Vec3::Zero();
        Vec3 om = Vec3::Zero();
        for (const auto& c : cyc) {
            const int a = c[0], b = c[1], d = c[2];
            // d_a of the (b, d) slot, sign from storage order
            const int s = pair_slot(std::min(b, d), std::max(b, d));
            const double sign = b < d ? 1.0 : -1.0;
            const Vec3 theta_bd = F.theta_at(n, b, d);
            const Vec3 omega_bd = F.omega_at(n, b, d);
            th += sign * dth[a][s][n] - E.omega[n][a].cross(theta_bd) + omega_bd.cross(E.xi[n][a]);
            om += sign * dom[a][s][n] - E.omega[n][a].cross(omega_bd);
        }
        out.theta[n] = th;
        out.omega[n] = om;
    }
    return out;
}

CompatibilityReport compatibility_report(const DeformationForm& E) {
    const Iso3TwoForm F = nabla_wedge_1(E);
    const int pairs = pair_count(E.grid.dim());
    CompatibilityReport r;
    r.theta_norm.assign(E.grid.size(), 0.0);
    r.omega_norm.assign(E.grid.size(), 0.0);
    for (std::size_t n = 0; n < E.grid.size(); ++n) {
        double t = 0.0, o = 0.0;
        for (int s = 0; s < pairs; ++s) {
            t += F.theta[n][s].squaredNorm();
            o += F.omega[n][s].squaredNorm();
        }
        r.theta_norm[n] = std::sqrt(t);
        r.omega_norm[n] = std::sqrt(o);
        r.max_theta = std::max(r.max_theta, r.theta_norm[n]);
        r.max_omega = std::max(r.max_omega, r.omega_norm[n]);
    }
    return r;
}

CovariantDerivative covariant_derivative(const DeformationForm& E) {
    const auto& g = E.grid;
    const int p = g.dim();
    CovariantDerivative out;
    std::array<VecSlots, 3> zv{zero_vec_slots(), zero_vec_slots(), zero_vec_slots()};
    std::array<MatSlots, 3> zm{zero_mat_slots(), zero_mat_slots(), zero_mat_slots()};
    out.xi.assign(g.size(), zv);
    out.omega.assign(g.size(), zm);
    const auto dxi = slot_derivatives(g, E.xi, p);
    const auto dom = slot_derivatives(g, E.omega, p);
    for (std::size_t n = 0; n < g.size(); ++n)
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) {
                const Mat3 wa = hat(E.omega[n][a]);
                out.xi[n][a][b] = dxi[a][b][n] - wa * E.xi[n][b];
                out.omega[n][a][b] = hat(dom[a][b][n]) - wa * hat(E.omega[n][b]);
            }
    return out;
}

}  // namespace cosserat
