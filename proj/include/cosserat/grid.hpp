#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cosserat/types.hpp"

namespace cosserat {

enum class NodeKind { interior, free_boundary, fixed_boundary };

/// Uniform tensor-product grid over a p-dimensional parameter box.
/// Nodes are numbered with axis 0 running fastest.
class ParameterGrid {
  public:
    /// Throws std::invalid_argument unless p in {1,2,3}, every extent >= 3
    /// and every spacing > 0. Boundary nodes start out as free_boundary.
    ParameterGrid(int p, std::array<int, 3> extents, std::array<double, 3> spacing,
                  std::array<double, 3> origin = {0.0, 0.0, 0.0});

    /// n nodes per axis covering [lo, hi] on each of the p axes.
    static ParameterGrid uniform(int p, int n, double lo = 0.0, double hi = 1.0);

    int dim() const { return p_; }
    int extent(int axis) const { return extents_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    double origin(int axis) const { return origin_[axis]; }
    std::size_t size() const { return size_; }

    std::size_t index(std::array<int, 3> ijk) const;
    std::array<int, 3> multi_index(std::size_t node) const;
    std::size_t stride(int axis) const { return stride_[axis]; }

    /// Parameter coordinates rho of a node; components past p are zero.
    Vec3 coords(std::size_t node) const;

    bool on_boundary(std::size_t node) const;
    /// -1 on the low face of axis, +1 on the high face, 0 otherwise.
    int face_side(std::size_t node, int axis) const;

    NodeKind kind(std::size_t node) const { return kinds_[node]; }
    void set_kind(std::size_t node, NodeKind k);

    /// Trapezoidal volume weight of a node (product of 1D weights).
    double volume_weight(std::size_t node) const;

    /// Same box at half the spacing (2n - 1 nodes per axis).
    ParameterGrid refined() const;

    /// Same dimension, extents, spacing and origin.
    bool same_layout(const ParameterGrid& o) const;

  private:
    int p_;
    std::array<int, 3> extents_;
    std::array<double, 3> spacing_;
    std::array<double, 3> origin_;
    std::array<std::size_t, 3> stride_;
    std::size_t size_;
    std::vector<NodeKind> kinds_;
};

void require_same_grid(const ParameterGrid& a, const ParameterGrid& b, const char* where);

/// First derivative along axis: second-order central differences in the
/// interior and second-order one-sided differences on the two end faces.
/// T is any vector-space type (double, Eigen fixed-size objects).
template <class T>
std::vector<T> differentiate(const ParameterGrid& grid, const std::vector<T>& f, int axis) {
    if (f.size() != grid.size()) throw GridMismatch("sample count does not match the grid");
    if (axis < 0 || axis >= grid.dim()) throw std::invalid_argument("axis out of range");
    const std::size_t st = grid.stride(axis);
    const int n = grid.extent(axis);
    const double inv2h = 1.0 / (2.0 * grid.spacing(axis));
    std::vector<T> out(f.size());
    for (std::size_t node = 0; node < f.size(); ++node) {
        const int i = grid.multi_index(node)[axis];
        if (i == 0) {
            const T& f0 = f[node];
            out[node] = T((4.0 * (f[node + st] - f0) - (f[node + 2 * st] - f0)) * inv2h);
        } else if (i == n - 1) {
            const T& f0 = f[node];
            out[node] = T(-(4.0 * (f[node - st] - f0) - (f[node - 2 * st] - f0)) * inv2h);
        } else {
            out[node] = T((f[node + st] - f[node - st]) * inv2h);
        }
    }
    return out;
}

}  // namespace cosserat
