#pragma once

#include <functional>
#include <vector>

#include "cosserat/grid.hpp"
#include "cosserat/rigid_motion.hpp"

namespace cosserat {

/// Grid-sampled map chi: O -> ISO(3).
struct DisplacementField {
    ParameterGrid grid;
    std::vector<RigidMotion> chi;

    DisplacementField(ParameterGrid g, std::vector<RigidMotion> values);

    static DisplacementField constant(const ParameterGrid& g, const RigidMotion& value);
    static DisplacementField sample(const ParameterGrid& g,
                                    const std::function<RigidMotion(const Vec3&)>& f);

    std::vector<Vec3> translations() const;
    std::vector<Mat3> rotations() const;
};

/// Position, frame and their p formal derivative slots at one node.
struct StateNode {
    Vec3 x = Vec3::Zero();
    Rotation e;
    VecSlots x_d = zero_vec_slots();
    MatSlots e_d = zero_mat_slots();
};

/// Section of the 1-jet bundle over the grid.
struct KinematicalState {
    ParameterGrid grid;
    std::vector<StateNode> nodes;

    KinematicalState(ParameterGrid g, std::vector<StateNode> values);

    /// x = rho, e = I, x_a = unit vector a, e_a = 0.
    static KinematicalState inclusion(const ParameterGrid& g);

    /// Values sampled from f, slots filled with grid derivatives of the
    /// sampled values (integrable by construction).
    static KinematicalState prolong(const ParameterGrid& g,
                                    const std::function<StateNode(const Vec3&)>& f);
};

/// E = (xi_a, omega_a) per node; omega stored as axial vectors.
struct DeformationForm {
    ParameterGrid grid;
    std::vector<VecSlots> xi;
    std::vector<VecSlots> omega;
    /// Largest Frobenius norm of the symmetric part discarded from
    /// (d_a R) R^T over all nodes and directions.
    double symmetric_residue = 0.0;

    explicit DeformationForm(ParameterGrid g);
};

/// x = a + R x0, e = R e0 with slots
/// x_a = a_a + R_a x0 + R x0_a, e_a = R_a e0 + R e0_a.
KinematicalState displace_state(const KinematicalState& initial, const DisplacementField& chi);

/// omega_a = axial(skew((d_a R) R^T)), xi_a = d_a a - omega_a x a.
DeformationForm deformation_of(const DisplacementField& chi);

/// Per node sqrt(sum_a |d_a x - x_a|^2 + |d_a e - e_a|_F^2).
std::vector<double> spencer_residual(const KinematicalState& s);

/// Largest entry of spencer_residual.
double max_spencer_residual(const KinematicalState& s);

/// The three translational expressions
///   da - W a,   dx - W x,   du - W x
/// with W_a = (d_a R) R^T taken without antisymmetrization, and the term
/// R d_a x0 by which the last two differ from the first when the initial
/// positions vary (they coincide when x0 is constant).
struct DeformationChain {
    std::vector<VecSlots> from_translation;
    std::vector<VecSlots> from_position;
    std::vector<VecSlots> from_displacement;
    std::vector<VecSlots> initial_frame_term;
};

DeformationChain deformation_chain(const DisplacementField& chi, const KinematicalState& initial);

/// Classical strain split for a 3D body given by the inclusion.
/// u = x - x0, G_ij = d_j u_i, e = G + G^T, theta = G - G^T,
/// orbital_ij = (omega_j x x)_i, E = G - orbital.
struct StrainDecomposition {
    std::vector<Mat3> e;
    std::vector<Mat3> theta;
    std::vector<Mat3> E;
    std::vector<Mat3> orbital;

    /// max |E - (e + theta)/2 + orbital| over nodes.
    double reconstruction_defect() const;
};

/// Throws std::invalid_argument unless p = 3 and the initial state is the
/// inclusion of the grid.
StrainDecomposition strain_decompose(const DisplacementField& chi, const KinematicalState& initial);

/// Largest |phi| accepted by from_schaefer.
inline constexpr double kSchaeferMaxAngle = 0.5;

/// a = u - phi x x0, R = polar(I + hat(phi)). The map is the infinitesimal
/// one; the polar factor of I + hat(phi) is the rotation by atan|phi| about
/// phi, which agrees with exp(hat(phi)) to first order only. Throws
/// NumericalError at the first node with |phi| > kSchaeferMaxAngle.
DisplacementField from_schaefer(const std::vector<Vec3>& phi, const std::vector<Vec3>& u,
                                const KinematicalState& initial);

}  // namespace cosserat
