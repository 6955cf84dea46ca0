#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cosserat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Up to three parameter-direction slots; only the first p are meaningful.
using VecSlots = std::array<Vec3, 3>;
using MatSlots = std::array<Mat3, 3>;

// Orthogonality / determinant tolerance for stored rotations.
inline constexpr double kTolOrtho = 1e-10;
// Tolerance for group-law identities (composition, inverse, action).
inline constexpr double kTolGroup = 1e-9;

inline VecSlots zero_vec_slots() { return {Vec3::Zero(), Vec3::Zero(), Vec3::Zero()}; }
inline MatSlots zero_mat_slots() { return {Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}; }

/// Antisymmetric matrix of w, i.e. the matrix of v -> w x v.
inline Mat3 hat(const Vec3& w) {
    Mat3 m;
    m << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
        -w.y(), w.x(), 0.0;
    return m;
}

/// Axial vector of the antisymmetric part of m (inverse of hat on so(3)).
inline Vec3 vee(const Mat3& m) {
    return Vec3(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1)));
}

inline Mat3 skew(const Mat3& m) { return 0.5 * (m - m.transpose()); }
inline Mat3 sym(const Mat3& m) { return 0.5 * (m + m.transpose()); }

/// Frobenius pairing sum_ij a_ij b_ij.
inline double contract(const Mat3& a, const Mat3& b) { return a.cwiseProduct(b).sum(); }

/// Levi-Civita symbol on 0-based indices.
inline constexpr int levi_civita(int i, int j, int k) {
    return (i - j) * (j - k) * (k - i) / 2;
}

// Error hierarchy. Callers catch cosserat::Error for anything the library
// raises on purpose; std::invalid_argument marks caller misuse.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class GridMismatch : public Error {
  public:
    using Error::Error;
};

/// Groupoid partial multiplication across different source points.
class SourceMismatch : public Error {
  public:
    SourceMismatch(std::size_t lhs, std::size_t rhs)
        : Error("jet elements live over different nodes (" + std::to_string(lhs) + " vs " +
                std::to_string(rhs) + ")"),
          lhs_node(lhs), rhs_node(rhs) {}
    std::size_t lhs_node;
    std::size_t rhs_node;
};

class NonIntegrable : public Error {
  public:
    NonIntegrable(const std::string& what, std::size_t node, double defect)
        : Error(what + " at node " + std::to_string(node) + " (defect " + std::to_string(defect) +
                ")"),
          node(node), defect(defect) {}
    std::size_t node;
    double defect;
};

class SingularJacobian : public Error {
  public:
    SingularJacobian(std::size_t node, double det)
        : Error("deformation Jacobian is singular at node " + std::to_string(node) +
                " (det = " + std::to_string(det) + ")"),
          node(node), det(det) {}
    std::size_t node;
    double det;
};

class NotEuclidian : public Error {
  public:
    using Error::Error;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

}  // namespace cosserat
