#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cosserat/statics.hpp"

namespace cosserat {

inline constexpr double kSolveTol = 1e-8;
inline constexpr int kMaxIter = 50;

/// One end of a rod. A fixed end prescribes the displacement chi there; a
/// free end prescribes the applied force and couple (spatial, acting on the
/// rod from outside).
struct RodEnd {
    enum class Kind { fixed, free };
    Kind kind = Kind::free;
    RigidMotion motion;
    Vec3 force = Vec3::Zero();
    Vec3 couple = Vec3::Zero();

    static RodEnd fixed(const RigidMotion& m = {}) { return {Kind::fixed, m, Vec3::Zero(), Vec3::Zero()}; }
    static RodEnd free(const Vec3& f = Vec3::Zero(), const Vec3& c = Vec3::Zero()) {
        return {Kind::free, RigidMotion{}, f, c};
    }
};

struct RodBoundary {
    RodEnd start;  // low end of the parameter interval
    RodEnd end;    // high end
};

/// Distributed force and couple per unit parameter length (spatial).
/// Empty functions mean no load.
struct RodLoads {
    std::function<Vec3(double)> force;
    std::function<Vec3(double)> couple;
};

struct RodProblem {
    ConstitutiveLaw law;
    RodBoundary bc;
    ParameterGrid grid;
    RodLoads loads;
};

struct RodSolveOptions {
    double tol = kSolveTol;
    int max_iter = kMaxIter;
    double fd_step = 1e-7;
    /// Starting iterate; identity field when empty.
    std::vector<RigidMotion> initial;
};

struct RodIteration {
    int iteration = 0;
    double residual = 0.0;
    double step = 0.0;  // accepted line-search factor
};

struct RodSolveReport {
    DisplacementField field;
    int iterations = 0;
    std::vector<RodIteration> trace;  // entry 0 is the starting iterate
    bool converged = false;
    double residual = 0.0;
    std::string message;
};

/// Straight reference rod x0 = (rho, 0, 0), e0 = I on a 1D grid.
KinematicalState rod_reference(const ParameterGrid& grid);

/// Deformed rod state chi . x0 with slots from grid derivatives.
KinematicalState rod_state(const ParameterGrid& grid, const std::vector<RigidMotion>& chi);

/// Stacked equilibrium residual, six rows per node. Stresses are evaluated at
/// the cell midpoints, where the law sees
///   x = (x_i + x_i+1)/2, e = e_i exp(w/2), x_1 = (x_i+1 - x_i)/h, e_1 = e hat(w)/h
/// with w = log(e_i^T e_i+1). With n = sigma^1 and m = 2 axial(mu_1 e^T) the
/// interior rows are
///   (n_i+1/2 - n_i-1/2)/h + f_i
///   (m_i+1/2 - m_i-1/2)/h + avg(x_1 x n) + c_i
/// A fixed end contributes (a - a_bc, log(R R_bc^T)); a free end with side s
/// the half-cell balance (P - s n)/(h/2) + f and
/// (C - s m)/(h/2) + x_1 x n + c using the adjacent midpoint values.
Eigen::VectorXd rod_residual(const RodProblem& problem, const std::vector<RigidMotion>& chi);

/// Damped Newton iteration with a finite-difference Jacobian. Returns the
/// best iterate with converged = false after max_iter steps; throws
/// NumericalError when the Newton system is singular and std::invalid_argument
/// unless the grid is 1D.
RodSolveReport solve_rod(const RodProblem& problem, const RodSolveOptions& options = {});

/// Body loads for which chi_star solves the continuous rod equations under
/// the given law. Derivatives of chi_star and of the resulting stresses are
/// taken with eighth-order central differences of step `step`.
RodLoads manufactured_loads(const ConstitutiveLaw& law, std::function<RigidMotion(double)> chi_star,
                            double step = 1e-2);

/// Spatial force and moment (n, m) of the exact solution at rho, used for
/// the free-end conditions of a manufactured problem.
std::pair<Vec3, Vec3> rod_stress_resultants(const ConstitutiveLaw& law,
                                            const std::function<RigidMotion(double)>& chi_star,
                                            double rho, double step = 1e-2);

}  // namespace cosserat
