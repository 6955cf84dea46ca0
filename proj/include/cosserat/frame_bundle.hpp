#pragma once

#include <functional>

#include "cosserat/rigid_motion.hpp"

namespace cosserat {

/// Ambient coordinates (x, f) of an oriented orthonormal frame.
struct FrameCoordinates {
    Vec3 x = Vec3::Zero();
    Rotation f;
};

/// (x, f) = (O, e)(a, R) = (O + e a, e R). Throws std::invalid_argument if
/// ref is not oriented-orthonormal.
FrameCoordinates frame_from_group(const RigidMotion& g, const AffineFrame& ref);

/// Inverse of frame_from_group for the same reference frame.
RigidMotion group_from_frame(const FrameCoordinates& frame, const AffineFrame& ref);

/// Structure constants c^a_{bc} of iso(3) in the adapted basis
/// (indices 0..2 translations, 3..5 rotations): [E_b, E_c] = c^a_{bc} E_a.
class StructureConstants {
  public:
    double operator()(int a, int b, int c) const { return c_[index(a, b, c)]; }
    double& operator()(int a, int b, int c) { return c_[index(a, b, c)]; }

    /// max |c^a_{bc} + c^a_{cb}|
    double antisymmetry_defect() const;
    /// max over basis triples of the Jacobi identity written in c.
    double jacobi_defect() const;

  private:
    static int index(int a, int b, int c) { return (a * 6 + b) * 6 + c; }
    std::array<double, 216> c_{};
};

/// Table built from the Levi-Civita symbol:
///   c^a_{bc} = 0                    (both translational)
///   c^a_{bi} = eps_{bia} = -c^a_{ib} (translation b, rotation i)
///   c^i_{jk} = eps_{jki}            (both rotational)
StructureConstants structure_constants_iso3();

/// Evaluates -1/2 c^a_{bc} theta^b ^ theta^c on the pair (x, y), i.e. the
/// right-hand side of the Maurer-Cartan equations through the table.
IsoAlgebraElement maurer_cartan_rhs(const StructureConstants& c, const IsoAlgebraElement& x,
                                    const IsoAlgebraElement& y);

using Family = std::function<RigidMotion(double)>;
using Surface = std::function<RigidMotion(double, double)>;

struct MaurerCartanCheck {
    double residual = 0.0;            // at step h
    double residual_half_step = 0.0;  // at step h/2
    double observed_order = 0.0;      // log2(residual / residual_half_step)
    bool exact = false;               // both residuals below the rounding floor
};

/// Finite-difference evaluation of d theta(d_s, d_t) + [theta(d_s), theta(d_t)]
/// for the left-invariant form theta = g^-1 dg on the surface g(s, t), at
/// (s0, t0). This is d theta = -1/2 [theta, theta] with the convention
/// [theta, theta](X, Y) = 2 [theta(X), theta(Y)]. The residual decays as h^2;
/// when it is not already at rounding level and the observed order falls
/// below min_order, NumericalError ("step too large") is thrown.
MaurerCartanCheck maurer_cartan_residual(const Surface& g, double s0, double t0, double h,
                                         double min_order = 1.5);

/// Surface g(s, t) = first(s) second(t) spanned by two one-parameter families.
MaurerCartanCheck maurer_cartan_residual(const Family& first, const Family& second, double h,
                                         double min_order = 1.5);

}  // namespace cosserat
