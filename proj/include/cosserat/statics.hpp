#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cosserat/jet_groupoid.hpp"

namespace cosserat {

/// Dynamical state at one node: external force F, external moment M (M(i,j)
/// pairs with de(i,j)), force stresses sigma[a] and couple stresses mu[a]
/// (mu[a](i,j) pairs with de_a(i,j)). No symmetry is imposed.
struct PhiNode {
    Vec3 F = Vec3::Zero();
    Mat3 M = Mat3::Zero();
    VecSlots sigma = zero_vec_slots();
    MatSlots mu = zero_mat_slots();
};

struct FundamentalOneForm {
    ParameterGrid grid;
    std::vector<PhiNode> nodes;

    FundamentalOneForm(ParameterGrid g, std::vector<PhiNode> values);
    static FundamentalOneForm zero(const ParameterGrid& g);

    /// Largest absolute component over all nodes and slots.
    double scale() const;
};

/// Eulerian components; M and mu are antisymmetric.
struct EulerianNode {
    Vec3 F = Vec3::Zero();
    Mat3 M = Mat3::Zero();
    VecSlots sigma = zero_vec_slots();
    MatSlots mu = zero_mat_slots();
};

struct EulerianComponents {
    ParameterGrid grid;
    std::vector<EulerianNode> nodes;
};

/// Per-node contract producing the dynamical state from the kinematical one.
struct ConstitutiveLaw {
    std::string name;
    std::map<std::string, double> parameters;
    std::function<PhiNode(const Vec3& rho, const StateNode& s, int p)> eval;

    FundamentalOneForm apply(const KinematicalState& s) const;
};

/// Linear Cosserat law about the unstressed inclusion (x = rho, e = I).
/// Per direction a, with material strains
///   Gamma_a = e^T x_a - E_a,   K_a = axial(e^T e_a),
/// the material force n_a = C_a Gamma_a and moment m_a = D_a K_a, where C_a
/// and D_a are diagonal with `axial` / `torsion` on component a and `shear`
/// / `bending` on the other two. Output: sigma^a = e n_a and
/// mu_a = 1/2 hat(e m_a) e, so that skew(mu_a e^T) = 1/2 hat(e m_a) pairs
/// with a rotation dI = hat(w) as (e m_a) . w. F = 0 and M = 0.
struct LinearCosseratModuli {
    double axial = 1.0;
    double shear = 1.0;
    double torsion = 1.0;
    double bending = 1.0;
};

ConstitutiveLaw linear_cosserat_law(const LinearCosseratModuli& k);

/// Boundary contribution of one face node.
struct BoundaryTerm {
    std::size_t node = 0;
    int axis = 0;
    int side = 0;       // -1 low face, +1 high face
    double weight = 0;  // trapezoidal weight of the face
    Vec3 traction = Vec3::Zero();  // side * sigma^axis
    Mat3 couple = Mat3::Zero();    // side * mu_axis
};

struct VirtualWorkSplit {
    double interior = 0.0;
    double boundary = 0.0;
    double direct = 0.0;  // trapezoidal quadrature of virtual_work
    std::vector<BoundaryTerm> terms;
};

struct EquilibriumResidual {
    ParameterGrid grid;
    std::vector<Vec3> force;
    std::vector<Mat3> moment;

    double max_force() const;
    double max_moment() const;
    double max_norm() const { return std::max(max_force(), max_moment()); }
    /// Largest |moment + moment^T| over nodes.
    double antisymmetry_defect() const;
};

/// F.dx + <M, de> + sigma^a . dx_a + <mu_a, de_a> per node.
std::vector<double> virtual_work(const FundamentalOneForm& phi, const VariationField& ds);

/// Discrete integration by parts of the total virtual work:
///   interior = sum w (F - D_a sigma^a) . dx + <M - D_a mu_a, de>
///   boundary = sum over face nodes of face weight * side * (sigma^a . dx + <mu_a, de>)
/// with trapezoidal weights. interior + boundary matches direct to O(h^2).
/// Throws NonIntegrable when the slots of ds are not the grid derivatives of
/// its values.
VirtualWorkSplit total_virtual_work(const FundamentalOneForm& phi, const VariationField& ds);

/// F_bar = F, sigma_bar = sigma,
/// M_bar = skew(M e^T + F x^T + sum sigma^a x_a^T + sum mu_a e_a^T),
/// mu_bar^a = skew(mu_a e^T + sigma^a x^T).
EulerianComponents eulerian_components(const FundamentalOneForm& phi, const KinematicalState& s);

/// F . dzeta + <M_bar, dI> + sigma^a . dzeta_a + <mu_bar^a, dI_a>, the
/// work done on the variation generated by xi (dI_a antisymmetric).
double eulerian_pairing(const EulerianNode& c, const AlgebroidElement& xi);

struct EuclidianCheck {
    double residual_F = 0.0;  // sqrt(sum over nodes |F|^2)
    double residual_M = 0.0;  // sqrt(sum |skew(M e^T + sum sigma^a x_a^T + sum mu_a e_a^T)|^2)
};

EuclidianCheck euclidian_check(const FundamentalOneForm& phi, const KinematicalState& s);

/// Sets F = 0 and M = (sym(M e^T) - skew(S)) e with
/// S = sum sigma^a x_a^T + sum mu_a e_a^T, which clears the moment
/// condition and keeps the symmetric part of M e^T. Idempotent.
FundamentalOneForm euclidian_project(const FundamentalOneForm& phi, const KinematicalState& s);

/// True when both check residuals are within
/// tol * max(1, phi scale) * max(1, largest state component) * sqrt(N).
bool is_euclidian(const FundamentalOneForm& phi, const KinematicalState& s, double tol = 1e-9);

/// force = F - D_a sigma^a, moment = skew((M - D_a mu_a) e^T).
/// Throws NonIntegrable when the state's slots are not its grid derivatives.
EquilibriumResidual equilibrium_residual_lagrangian(const FundamentalOneForm& phi,
                                                    const KinematicalState& s);

/// The same balance with the moment written out term by term:
///   skew(M e^T) + skew(F x^T) + sum skew(sigma^a x_a^T) + sum skew(mu_a e_a^T)
///   - sum [skew(D_a mu_a e^T) + skew(mu_a (D_a e)^T)]
///   - sum [skew(D_a sigma^a x^T) + skew(sigma^a (D_a x)^T)].
/// It differs from the Lagrangian moment by exactly
///   skew((F - D_a sigma^a) x^T) + sum skew(sigma^a (x_a - D_a x)^T)
///   + sum skew(mu_a (e_a - D_a e)^T).
EquilibriumResidual equilibrium_residual_expanded(const FundamentalOneForm& phi,
                                                  const KinematicalState& s);

/// force = F - D_a sigma^a, moment = M_bar - D_a mu_bar^a (Eulerian
/// components differentiated as a whole). Differs from the expanded form
/// by the discrete product-rule defect only.
EquilibriumResidual equilibrium_residual_compact(const FundamentalOneForm& phi,
                                                 const KinematicalState& s);

/// For Euclidian phi: force = D_a sigma^a,
/// moment = D_a skew(mu_a e^T) + skew(sum sigma^a x_a^T).
/// Throws NotEuclidian otherwise.
EquilibriumResidual equilibrium_residual_eulerian(const FundamentalOneForm& phi,
                                                  const KinematicalState& s, double tol = 1e-9);

/// 3D form in deformed coordinates. With J(i,a) = x_a(i):
///   sigma^j = sum_a J(j,a) sigma^a,  mu_bar^k = sum_a J(k,a) skew(mu_a e^T),
///   d_k = sum_a Jinv(a,k) D_a,
///   force = d_j sigma^j,  moment = d_k mu_bar^k + skew(S) with S(i,j) = sigma^j_i.
/// Coincides with the Eulerian residual when J = I. Throws
/// std::invalid_argument for p != 3, SingularJacobian at the first node with
/// |det J| below 1e-12, NotEuclidian for non-Euclidian phi.
EquilibriumResidual equilibrium_residual_cosserat3d(const FundamentalOneForm& phi,
                                                    const KinematicalState& s, double tol = 1e-9);

}  // namespace cosserat
