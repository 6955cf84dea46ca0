#pragma once

#include "cosserat/types.hpp"

namespace cosserat {

/// Proper rotation stored as a 3x3 matrix. Construction validates
/// orthogonality and unit determinant to kTolOrtho.
class Rotation {
  public:
    Rotation() : m_(Mat3::Identity()) {}
    explicit Rotation(const Mat3& m);

    static Rotation identity() { return Rotation(); }

    /// Nearest rotation in the Frobenius sense (polar factor). Throws
    /// std::invalid_argument if m is singular or orientation-reversing.
    static Rotation project(const Mat3& m);

    /// Rodrigues formula for exp(hat(w)).
    static Rotation exp(const Vec3& w);
    /// Rotation vector w with exp(w) = *this and |w| <= pi.
    Vec3 log() const;

    const Mat3& matrix() const { return m_; }
    Rotation transpose() const { return from_trusted(m_.transpose()); }
    Rotation inverse() const { return transpose(); }

    /// Product; re-projects onto SO(3) when rounding drift exceeds kTolOrtho.
    Rotation operator*(const Rotation& rhs) const;
    Vec3 operator*(const Vec3& v) const { return m_ * v; }

    /// max(|R^T R - I|_max, |det R - 1|).
    double defect() const { return defect_of(m_); }
    static double defect_of(const Mat3& m);

  private:
    static Rotation from_trusted(const Mat3& m) {
        Rotation r;
        r.m_ = m;
        return r;
    }
    Mat3 m_;
};

/// Element (a, R) of ISO(3); acts on points as x -> a + R x.
struct RigidMotion {
    Vec3 a = Vec3::Zero();
    Rotation r;

    static RigidMotion identity() { return {}; }
    static RigidMotion translation(const Vec3& a) { return {a, Rotation()}; }
    static RigidMotion rotation(const Rotation& r) { return {Vec3::Zero(), r}; }

    Vec3 apply(const Vec3& x) const { return a + r * x; }
    Mat4 homogeneous() const;
};

/// Element (v, w) of iso(3): infinitesimal translation v and the axial
/// vector w of an infinitesimal rotation hat(w).
struct IsoAlgebraElement {
    Vec3 v = Vec3::Zero();
    Vec3 w = Vec3::Zero();

    Mat4 homogeneous() const;
    /// Coordinates in the adapted basis: translations 0..2, rotations 3..5.
    Eigen::Matrix<double, 6, 1> coords() const;
    static IsoAlgebraElement from_coords(const Eigen::Matrix<double, 6, 1>& c);
    static IsoAlgebraElement basis(int index);

    IsoAlgebraElement operator+(const IsoAlgebraElement& o) const { return {v + o.v, w + o.w}; }
    IsoAlgebraElement operator-(const IsoAlgebraElement& o) const { return {v - o.v, w - o.w}; }
    IsoAlgebraElement operator*(double s) const { return {s * v, s * w}; }
};

/// Element (p, l) of iso(3)*: force (or linear momentum) and moment.
struct Wrench {
    Vec3 p = Vec3::Zero();
    Vec3 l = Vec3::Zero();
};

/// Affine frame (origin, legs); legs are the columns of basis.
struct AffineFrame {
    Vec3 origin = Vec3::Zero();
    Mat3 basis = Mat3::Identity();

    bool is_oriented_orthonormal(double tol = kTolOrtho) const {
        return Rotation::defect_of(basis) <= tol;
    }
};

RigidMotion compose(const RigidMotion& g, const RigidMotion& h);
RigidMotion inverse(const RigidMotion& g);

/// One-parameter subgroup t -> exp(t x), closed form (Rodrigues plus the
/// SE(3) left Jacobian for the translation block).
RigidMotion exp(const IsoAlgebraElement& x, double scale = 1.0);

/// Semi-direct bracket: ([w, w'] translational part w x v' - w' x v,
/// rotational part w x w').
IsoAlgebraElement bracket(const IsoAlgebraElement& x, const IsoAlgebraElement& y);

/// Virtual work / energy pairing p.v + l.w.
double pair(const Wrench& P, const IsoAlgebraElement& x);

/// Right action (x, f)(a, R) = (x + f a, f R). Throws std::invalid_argument
/// when f is not oriented-orthonormal.
AffineFrame act_on_frame(const AffineFrame& f, const RigidMotion& g);

/// Velocity of pt under s -> exp(s x): v + w x pt.
Vec3 fundamental_field(const IsoAlgebraElement& x, const Vec3& pt);

/// Adjoint action g x g^-1.
IsoAlgebraElement adjoint(const RigidMotion& g, const IsoAlgebraElement& x);

/// Distance used by group-law checks: max(|a - a'|_inf, |R - R'|_max).
double distance(const RigidMotion& g, const RigidMotion& h);

/// Inverse of homogeneous(): extracts (v, w) from a 4x4 algebra matrix.
IsoAlgebraElement algebra_from_homogeneous(const Mat4& m);

}  // namespace cosserat
