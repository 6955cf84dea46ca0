#pragma once

#include <array>
#include <vector>

#include "cosserat/kinematics.hpp"

namespace cosserat {

/// Number of stored pairs a < b for a p-dimensional grid.
inline int pair_count(int p) { return p * (p - 1) / 2; }
/// Slot of the pair (a, b), a < b: (0,1) -> 0, (0,2) -> 1, (1,2) -> 2.
inline int pair_slot(int a, int b) { return a + b - 1; }

/// iso(3)-valued 2-form: dislocation Theta and disclination Omega (axial)
/// per node and per pair a < b.
struct Iso3TwoForm {
    ParameterGrid grid;
    std::vector<VecSlots> theta;
    std::vector<VecSlots> omega;

    explicit Iso3TwoForm(ParameterGrid g);

    /// Antisymmetric access: (a, b) with a > b returns minus the stored slot.
    Vec3 theta_at(std::size_t node, int a, int b) const;
    Vec3 omega_at(std::size_t node, int a, int b) const;
};

/// iso(3)-valued 3-form on a 3D grid; empty for p < 3.
struct Iso3ThreeForm {
    ParameterGrid grid;
    std::vector<Vec3> theta;
    std::vector<Vec3> omega;

    explicit Iso3ThreeForm(ParameterGrid g);
};

/// Level 0 -> 1; same as deformation_of.
DeformationForm nabla_chi(const DisplacementField& chi);

/// Theta_ab = d_a xi_b - d_b xi_a - omega_a x xi_b + omega_b x xi_a
/// Omega_ab = d_a omega_b - d_b omega_a - omega_a x omega_b
/// (the last term is the axial form of the commutator [W_a, W_b]).
/// Empty for p = 1.
Iso3TwoForm nabla_wedge_1(const DeformationForm& E);

/// Cyclic sums over (a, b, c) = (0, 1, 2):
///   Theta = sum d_a Theta_bc - omega_a x Theta_bc + Omega_bc x xi_a
///   Omega = sum d_a Omega_bc - omega_a x Omega_bc
/// This is sum d_a F_bc - [E_a, F_bc] in the bracket of iso(3), which
/// vanishes on F = nabla_wedge_1(E) by the Jacobi identity. Returns an empty
/// form for p = 1 and throws std::invalid_argument for p = 2.
Iso3ThreeForm nabla_wedge_2(const Iso3TwoForm& F, const DeformationForm& E);

struct CompatibilityReport {
    std::vector<double> theta_norm;
    std::vector<double> omega_norm;
    double max_theta = 0.0;
    double max_omega = 0.0;
};

/// Per-node Euclidean norms of all Theta / Omega slots of nabla_wedge_1(E).
CompatibilityReport compatibility_report(const DeformationForm& E);

/// Mixed covariant derivative nabla_a xi_b = d_a xi_b - W_a xi_b and
/// nabla_a W_b = d_a W_b - W_a W_b, with W = hat(omega).
struct CovariantDerivative {
    std::vector<std::array<VecSlots, 3>> xi;  // xi[node][a][b]
    std::vector<std::array<MatSlots, 3>> omega;
};

CovariantDerivative covariant_derivative(const DeformationForm& E);

}  // namespace cosserat
