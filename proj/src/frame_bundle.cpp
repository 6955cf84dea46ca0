#include "cosserat/frame_bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cosserat {

FrameCoordinates frame_from_group(const RigidMotion& g, const AffineFrame& ref) {
    if (!ref.is_oriented_orthonormal()) {
        throw std::invalid_argument("reference frame must be oriented-orthonormal");
    }
    const Rotation legs(ref.basis);
    return {ref.origin + ref.basis * g.a, legs * g.r};
}

RigidMotion group_from_frame(const FrameCoordinates& frame, const AffineFrame& ref) {
    if (!ref.is_oriented_orthonormal()) {
        throw std::invalid_argument("reference frame must be oriented-orthonormal");
    }
    const Rotation legs_inv = Rotation(ref.basis).inverse();
    return {legs_inv * (frame.x - ref.origin), legs_inv * frame.f};
}

double StructureConstants::antisymmetry_defect() const {
    double worst = 0.0;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int c = 0; c < 6; ++c) worst = std::max(worst, std::abs((*this)(a, b, c) + (*this)(a, c, b)));
    return worst;
}

double StructureConstants::jacobi_defect() const {
    // sum_d c^d_{bc} c^e_{ad} + cyclic(a, b, c) = 0 for every e
    double worst = 0.0;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int c = 0; c < 6; ++c)
                for (int e = 0; e < 6; ++e) {
                    double s = 0.0;
                    for (int d = 0; d < 6; ++d) {
                        s += (*this)(d, b, c) * (*this)(e, a, d);
                        s += (*this)(d, c, a) * (*this)(e, b, d);
                        s += (*this)(d, a, b) * (*this)(e, c, d);
                    }
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

StructureConstants structure_constants_iso3() {
    StructureConstants c;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int i = 0; i < 3; ++i) {
                // translation b against rotation i lands in the translations
                c(a, b, 3 + i) = levi_civita(b, i, a);
                c(a, 3 + i, b) = -levi_civita(b, i, a);
                // rotations close among themselves
                c(3 + i, 3 + a, 3 + b) = levi_civita(a, b, i);
            }
    return c;
}

IsoAlgebraElement maurer_cartan_rhs(const StructureConstants& c, const IsoAlgebraElement& x,
                                    const IsoAlgebraElement& y) {
    const auto xc = x.coords();
    const auto yc = y.coords();
    Eigen::Matrix<double, 6, 1> out = Eigen::Matrix<double, 6, 1>::Zero();
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
            for (int d = 0; d < 6; ++d) out(a) -= 0.5 * c(a, b, d) * (xc(b) * yc(d) - xc(d) * yc(b));
    return IsoAlgebraElement::from_coords(out);
}

namespace {

Mat4 theta_s(const Surface& g, double s, double t, double h) {
    const Mat4 dg = (g(s + h, t).homogeneous() - g(s - h, t).homogeneous()) / (2.0 * h);
    return inverse(g(s, t)).homogeneous() * dg;
}

Mat4 theta_t(const Surface& g, double s, double t, double h) {
    const Mat4 dg = (g(s, t + h).homogeneous() - g(s, t - h).homogeneous()) / (2.0 * h);
    return inverse(g(s, t)).homogeneous() * dg;
}

double structure_residual(const Surface& g, double s0, double t0, double h) {
    const Mat4 ds_theta_t = (theta_t(g, s0 + h, t0, h) - theta_t(g, s0 - h, t0, h)) / (2.0 * h);
    const Mat4 dt_theta_s = (theta_s(g, s0, t0 + h, h) - theta_s(g, s0, t0 - h, h)) / (2.0 * h);
    const Mat4 ts = theta_s(g, s0, t0, h);
    const Mat4 tt = theta_t(g, s0, t0, h);
    return (ds_theta_t - dt_theta_s + ts * tt - tt * ts).norm();
}

}  // namespace

MaurerCartanCheck maurer_cartan_residual(const Surface& g, double s0, double t0, double h,
                                         double min_order) {
    if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
    MaurerCartanCheck out;
    out.residual = structure_residual(g, s0, t0, h);
    out.residual_half_step = structure_residual(g, s0, t0, 0.5 * h);
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() / (0.25 * h * h);
    if (out.residual <= floor && out.residual_half_step <= floor) {
        out.exact = true;
        out.observed_order = std::numeric_limits<double>::infinity();
        return out;
    }
    out.observed_order = std::log2(out.residual / out.residual_half_step);
    if (!(out.observed_order >= min_order)) {
        throw NumericalError("Maurer-Cartan residual does not converge at step " +
                             std::to_string(h) + " (observed order " +
                             std::to_string(out.observed_order) + "); step too large");
    }
    return out;
}

MaurerCartanCheck maurer_cartan_residual(const Family& first, const Family& second, double h,
                                         double min_order) {
    const Surface g = [&](double s, double t) { return compose(first(s), second(t)); };
    return maurer_cartan_residual(g, 0.0, 0.0, h, min_order);
}

}  // namespace cosserat
