#include "cosserat/rigid_motion.hpp"

#include <cmath>
#include <limits>

namespace cosserat {

Rotation::Rotation(const Mat3& m) : m_(m) {
    const double d = defect_of(m);
    if (!(d <= kTolOrtho)) {
        throw std::invalid_argument("matrix is not a proper rotation (defect " + std::to_string(d) +
                                    ")");
    }
}

double Rotation::defect_of(const Mat3& m) {
    if (!m.allFinite()) return std::numeric_limits<double>::infinity();
    const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
    return std::max(ortho, std::abs(m.determinant() - 1.0));
}

Rotation Rotation::project(const Mat3& m) {
    if (!m.allFinite()) throw std::invalid_argument("cannot project a non-finite matrix");
    const double det = m.determinant();
    if (!(det > 0.0)) throw std::invalid_argument("cannot project a matrix with det <= 0");
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(2) <= 1e-14 * svd.singularValues()(0)) {
        throw std::invalid_argument("cannot project a numerically singular matrix");
    }
    return from_trusted(svd.matrixU() * svd.matrixV().transpose());
}

Rotation Rotation::exp(const Vec3& w) {
    const double t2 = w.squaredNorm();
    double a;  // sin t / t
    double b;  // (1 - cos t) / t^2
    if (t2 < 1e-8) {
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    } else {
        const double t = std::sqrt(t2);
        a = std::sin(t) / t;
        b = (1.0 - std::cos(t)) / t2;
    }
    const Mat3 k = hat(w);
    return from_trusted(Mat3::Identity() + a * k + b * k * k);
}

Vec3 Rotation::log() const {
    const Eigen::AngleAxisd aa(m_);
    return aa.angle() * aa.axis();
}

Rotation Rotation::operator*(const Rotation& rhs) const {
    Mat3 p = m_ * rhs.m_;
    if (defect_of(p) > kTolOrtho) return project(p);
    return from_trusted(p);
}

Mat4 RigidMotion::homogeneous() const {
    Mat4 h = Mat4::Identity();
    h.topLeftCorner<3, 3>() = r.matrix();
    h.topRightCorner<3, 1>() = a;
    return h;
}

Mat4 IsoAlgebraElement::homogeneous() const {
    Mat4 h = Mat4::Zero();
    h.topLeftCorner<3, 3>() = hat(w);
    h.topRightCorner<3, 1>() = v;
    return h;
}

Eigen::Matrix<double, 6, 1> IsoAlgebraElement::coords() const {
    Eigen::Matrix<double, 6, 1> c;
    c << v, w;
    return c;
}

IsoAlgebraElement IsoAlgebraElement::from_coords(const Eigen::Matrix<double, 6, 1>& c) {
    return {c.head<3>(), c.tail<3>()};
}

IsoAlgebraElement IsoAlgebraElement::basis(int index) {
    if (index < 0 || index >= 6) throw std::invalid_argument("iso(3) basis index out of range");
    Eigen::Matrix<double, 6, 1> c = Eigen::Matrix<double, 6, 1>::Zero();
    c(index) = 1.0;
    return from_coords(c);
}

RigidMotion compose(const RigidMotion& g, const RigidMotion& h) {
    return {g.a + g.r * h.a, g.r * h.r};
}

RigidMotion inverse(const RigidMotion& g) {
    const Rotation rt = g.r.inverse();
    return {-(rt * g.a), rt};
}

RigidMotion exp(const IsoAlgebraElement& x, double scale) {
    const Vec3 w = scale * x.w;
    const Vec3 v = scale * x.v;
    const double t2 = w.squaredNorm();
    double b;  // (1 - cos t) / t^2
    double c;  // (t - sin t) / t^3
    if (t2 < 1e-8) {
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
        c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
    } else {
        const double t = std::sqrt(t2);
        b = (1.0 - std::cos(t)) / t2;
        c = (t - std::sin(t)) / (t2 * t);
    }
    const Mat3 k = hat(w);
    const Mat3 left_jacobian = Mat3::Identity() + b * k + c * k * k;
    return {left_jacobian * v, Rotation::exp(w)};
}

IsoAlgebraElement bracket(const IsoAlgebraElement& x, const IsoAlgebraElement& y) {
    return {x.w.cross(y.v) - y.w.cross(x.v), x.w.cross(y.w)};
}

double pair(const Wrench& P, const IsoAlgebraElement& x) { return P.p.dot(x.v) + P.l.dot(x.w); }

AffineFrame act_on_frame(const AffineFrame& f, const RigidMotion& g) {
    if (!f.is_oriented_orthonormal()) {
        throw std::invalid_argument("act_on_frame needs an oriented orthonormal frame");
    }
    return {f.origin + f.basis * g.a, f.basis * g.r.matrix()};
}

Vec3 fundamental_field(const IsoAlgebraElement& x, const Vec3& pt) { return x.v + x.w.cross(pt); }

IsoAlgebraElement adjoint(const RigidMotion& g, const IsoAlgebraElement& x) {
    const Vec3 rw = g.r * x.w;
    return {g.r * x.v + g.a.cross(rw), rw};
}

double distance(const RigidMotion& g, const RigidMotion& h) {
    return std::max((g.a - h.a).cwiseAbs().maxCoeff(),
                    (g.r.matrix() - h.r.matrix()).cwiseAbs().maxCoeff());
}

IsoAlgebraElement algebra_from_homogeneous(const Mat4& m) {
    return {m.topRightCorner<3, 1>(), vee(m.topLeftCorner<3, 3>())};
}

}  // namespace cosserat
