#include "cosserat/grid.hpp"

#include <cmath>

namespace cosserat {

ParameterGrid::ParameterGrid(int p, std::array<int, 3> extents, std::array<double, 3> spacing,
                             std::array<double, 3> origin)
    : p_(p), extents_(extents), spacing_(spacing), origin_(origin) {
    if (p < 1 || p > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    for (int a = p; a < 3; ++a) {
        extents_[a] = 1;
        spacing_[a] = 1.0;
        origin_[a] = 0.0;
    }
    size_ = 1;
    for (int a = 0; a < 3; ++a) {
        if (a < p) {
            if (extents_[a] < 3) throw std::invalid_argument("grid needs at least 3 nodes per axis");
            if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a])) {
                throw std::invalid_argument("grid spacing must be positive");
            }
        }
        stride_[a] = size_;
        size_ *= static_cast<std::size_t>(extents_[a]);
    }
    kinds_.assign(size_, NodeKind::interior);
    for (std::size_t node = 0; node < size_; ++node) {
        if (on_boundary(node)) kinds_[node] = NodeKind::free_boundary;
    }
}

ParameterGrid ParameterGrid::uniform(int p, int n, double lo, double hi) {
    const double h = (hi - lo) / (n - 1);
    return ParameterGrid(p, {n, n, n}, {h, h, h}, {lo, lo, lo});
}

std::size_t ParameterGrid::index(std::array<int, 3> ijk) const {
    std::size_t node = 0;
    for (int a = 0; a < p_; ++a) {
        if (ijk[a] < 0 || ijk[a] >= extents_[a]) throw std::out_of_range("grid index out of range");
        node += stride_[a] * static_cast<std::size_t>(ijk[a]);
    }
    return node;
}

std::array<int, 3> ParameterGrid::multi_index(std::size_t node) const {
    std::array<int, 3> ijk{0, 0, 0};
    for (int a = 0; a < 3; ++a) {
        ijk[a] = static_cast<int>(node % static_cast<std::size_t>(extents_[a]));
        node /= static_cast<std::size_t>(extents_[a]);
    }
    return ijk;
}

Vec3 ParameterGrid::coords(std::size_t node) const {
    const auto ijk = multi_index(node);
    Vec3 rho = Vec3::Zero();
    for (int a = 0; a < p_; ++a) rho(a) = origin_[a] + spacing_[a] * ijk[a];
    return rho;
}

bool ParameterGrid::on_boundary(std::size_t node) const {
    for (int a = 0; a < p_; ++a) {
        if (face_side(node, a) != 0) return true;
    }
    return false;
}

int ParameterGrid::face_side(std::size_t node, int axis) const {
    if (axis < 0 || axis >= p_) return 0;
    const int i = multi_index(node)[axis];
    if (i == 0) return -1;
    if (i == extents_[axis] - 1) return 1;
    return 0;
}

void ParameterGrid::set_kind(std::size_t node, NodeKind k) {
    if (k != NodeKind::interior && !on_boundary(node)) {
        throw std::invalid_argument("boundary marker on an interior node");
    }
    if (k == NodeKind::interior && on_boundary(node)) {
        throw std::invalid_argument("interior marker on a boundary node");
    }
    kinds_.at(node) = k;
}

double ParameterGrid::volume_weight(std::size_t node) const {
    double w = 1.0;
    for (int a = 0; a < p_; ++a) w *= face_side(node, a) == 0 ? spacing_[a] : 0.5 * spacing_[a];
    return w;
}

ParameterGrid ParameterGrid::refined() const {
    std::array<int, 3> ext = extents_;
    std::array<double, 3> sp = spacing_;
    for (int a = 0; a < p_; ++a) {
        ext[a] = 2 * extents_[a] - 1;
        sp[a] = 0.5 * spacing_[a];
    }
    return ParameterGrid(p_, ext, sp, origin_);
}

bool ParameterGrid::same_layout(const ParameterGrid& o) const {
    return p_ == o.p_ && extents_ == o.extents_ && spacing_ == o.spacing_ && origin_ == o.origin_;
}

void require_same_grid(const ParameterGrid& a, const ParameterGrid& b, const char* where) {
    if (!a.same_layout(b)) throw GridMismatch(std::string(where) + ": grids differ");
}

}  // namespace cosserat
