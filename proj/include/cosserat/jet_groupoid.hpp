#pragma once

#include <vector>

#include "cosserat/kinematics.hpp"

namespace cosserat {

/// Element (rho, a, R, a_a, R_a) of J1(O; ISO(3)) over grid node rho.
/// Derivative slots are free; only the first p are used.
struct JetElement {
    std::size_t rho = 0;
    int p = 1;
    Vec3 a = Vec3::Zero();
    Rotation r;
    VecSlots a_d = zero_vec_slots();
    MatSlots r_d = zero_mat_slots();

    /// p source coordinates + 6 group coordinates + 6p slot coordinates.
    static constexpr int manifold_dimension(int p) { return p + 6 + 6 * p; }

    /// (rho, a, log R, a_a, axial(R_a R^T)); length manifold_dimension(p).
    std::vector<double> local_coordinates(const ParameterGrid& grid) const;
};

/// Element (rho, dzeta, dI, dzeta_a, dI_a) of the algebroid. iota is the
/// axial vector of dI. The slots iota_d are full matrices (the slot
/// derivatives of dR R^T); they are antisymmetric whenever the jet slots are
/// tangent to the group.
struct AlgebroidElement {
    std::size_t rho = 0;
    int p = 1;
    Vec3 zeta = Vec3::Zero();
    Vec3 iota = Vec3::Zero();
    VecSlots zeta_d = zero_vec_slots();
    MatSlots iota_d = zero_mat_slots();
};

/// Tangent vector (da, dR, da_a, dR_a) to the groupoid at a jet element.
struct JetVariation {
    Vec3 da = Vec3::Zero();
    Mat3 dR = Mat3::Zero();
    VecSlots da_d = zero_vec_slots();
    MatSlots dR_d = zero_mat_slots();
};

/// Tangent vector (dx, de, dx_a, de_a) to the state space at one node.
struct StateVariation {
    Vec3 dx = Vec3::Zero();
    Mat3 de = Mat3::Zero();
    VecSlots dx_d = zero_vec_slots();
    MatSlots de_d = zero_mat_slots();
};

struct VariationField {
    ParameterGrid grid;
    std::vector<StateVariation> nodes;

    VariationField(ParameterGrid g, std::vector<StateVariation> values);
    static VariationField zero(const ParameterGrid& g);
};

JetElement jet_identity(std::size_t rho, int p);

/// a'' = a + R a', R'' = R R', a''_a = a_a + R_a a' + R a'_a,
/// R''_a = R_a R' + R R'_a. Throws SourceMismatch across nodes.
JetElement jet_compose(const JetElement& g, const JetElement& h);

/// Two-sided inverse: R^-1 = R^T, a^-1 = -R^T a, R^-1_a = -R^T R_a R^T,
/// a^-1_a = R^T R_a R^T a - R^T a_a.
JetElement jet_inverse(const JetElement& g);

/// x' = a + R x, e' = R e, x'_a = a_a + R_a x + R x_a, e'_a = R_a e + R e_a.
StateNode jet_act(const JetElement& g, std::size_t rho, const StateNode& s);

/// Jets of chi at every node, slots from grid derivatives.
std::vector<JetElement> jet_field(const DisplacementField& chi);

/// dI = dR R^T (axial part kept), dzeta = da - dI a,
/// dI_a = dR_a R^T - dR R^T R_a R^T, dzeta_a = da_a - dI_a a - dI a_a.
AlgebroidElement to_algebroid(const JetElement& g, const JetVariation& v);

/// dx = dzeta + dI x, de = dI e, dx_a = dzeta_a + dI_a x + dI x_a,
/// de_a = dI_a e + dI e_a. Throws SourceMismatch when xi.rho != rho.
StateVariation fundamental_variation(const AlgebroidElement& xi, std::size_t rho, const StateNode& s);

/// Slots filled with grid derivatives of the value variations.
VariationField prolong_variation(const ParameterGrid& grid, const std::vector<Vec3>& dx,
                                 const std::vector<Mat3>& de);

/// Per node sqrt(sum_a |d_a dx - dx_a|^2 + |d_a de - de_a|^2).
double max_variation_spencer_residual(const VariationField& v);

}  // namespace cosserat
