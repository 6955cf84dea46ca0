#include "cosserat/rod.hpp"

#include <cmath>
#include <limits>

namespace cosserat {

namespace {

constexpr double kFd8[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};

template <class T, class F>
T fd8(const F& f, double rho, double h) {
    T d = kFd8[0] * (f(rho + h) - f(rho - h));
    for (int k = 1; k < 4; ++k) d += kFd8[k] * (f(rho + (k + 1) * h) - f(rho - (k + 1) * h));
    return T(d / h);
}

struct Resultant {
    Vec3 n;
    Vec3 m;
    Vec3 x_d;
};

Resultant evaluate(const ConstitutiveLaw& law, const Vec3& rho, const StateNode& s) {
    const PhiNode f = law.eval(rho, s, 1);
    return {f.sigma[0], 2.0 * vee(f.mu[0] * s.e.matrix().transpose()), s.x_d[0]};
}

// stresses at the midpoint of cell [i, i+1]
Resultant midpoint(const RodProblem& pb, const std::vector<RigidMotion>& chi, std::size_t i) {
    const double h = pb.grid.spacing(0);
    const Vec3 x0 = pb.grid.coords(i), x1 = pb.grid.coords(i + 1);
    const Vec3 xa = chi[i].a + chi[i].r * x0;
    const Vec3 xb = chi[i + 1].a + chi[i + 1].r * x1;
    const Vec3 w = (chi[i].r.transpose() * chi[i + 1].r).log();
    StateNode s;
    s.x = 0.5 * (xa + xb);
    s.e = chi[i].r * Rotation::exp(0.5 * w);
    s.x_d[0] = (xb - xa) / h;
    s.e_d[0] = s.e.matrix() * hat(w) / h;
    return evaluate(pb.law, 0.5 * (x0 + x1), s);
}

Vec3 load(const std::function<Vec3(double)>& f, double rho) { return f ? f(rho) : Vec3::Zero(); }

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

std::vector<RigidMotion> perturbed(const std::vector<RigidMotion>& chi, Eigen::Index k, double t) {
    std::vector<RigidMotion> out = chi;
    const std::size_t node = static_cast<std::size_t>(k / 6);
    const int c = static_cast<int>(k % 6);
    if (c < 3) {
        out[node].a(c) += t;
    } else {
        out[node].r = Rotation::exp(t * Vec3::Unit(c - 3)) * out[node].r;
    }
    return out;
}

std::vector<RigidMotion> updated(const std::vector<RigidMotion>& chi, const Eigen::VectorXd& dx, double t) {
    std::vector<RigidMotion> out = chi;
    for (std::size_t n = 0; n < chi.size(); ++n) {
        out[n].a += t * dx.segment<3>(6 * n);
        out[n].r = Rotation::exp(t * dx.segment<3>(6 * n + 3)) * out[n].r;
    }
    return out;
}

}  // namespace

KinematicalState rod_reference(const ParameterGrid& grid) {
    if (grid.dim() != 1) throw std::invalid_argument("rod grids are 1D");
    return KinematicalState::inclusion(grid);
}

KinematicalState rod_state(const ParameterGrid& grid, const std::vector<RigidMotion>& chi) {
    if (grid.dim() != 1) throw std::invalid_argument("rod grids are 1D");
    if (chi.size() != grid.size()) throw GridMismatch("rod field size does not match grid");
    std::vector<Vec3> x(grid.size());
    std::vector<Mat3> e(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        x[n] = chi[n].a + chi[n].r * grid.coords(n);
        e[n] = chi[n].r.matrix();
    }
    const auto dx = differentiate(grid, x, 0);
    const auto de = differentiate(grid, e, 0);
    std::vector<StateNode> nodes(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        nodes[n].x = x[n];
        nodes[n].e = chi[n].r;
        nodes[n].x_d[0] = dx[n];
        nodes[n].e_d[0] = de[n];
    }
    return KinematicalState(grid, nodes);
}

namespace {

struct NodeLoads {
    std::vector<Vec3> force;
    std::vector<Vec3> couple;
};

NodeLoads sample_loads(const RodProblem& pb) {
    NodeLoads out;
    for (std::size_t i = 0; i < pb.grid.size(); ++i) {
        const double rho = pb.grid.coords(i).x();
        out.force.push_back(load(pb.loads.force, rho));
        out.couple.push_back(load(pb.loads.couple, rho));
    }
    return out;
}

Eigen::VectorXd assemble(const RodProblem& pb, const std::vector<RigidMotion>& chi, const NodeLoads& loads) {
    const auto& g = pb.grid;
    const std::size_t N = g.size();
    const double h = g.spacing(0);
    std::vector<Resultant> mid(N - 1);
    for (std::size_t i = 0; i + 1 < N; ++i) mid[i] = midpoint(pb, chi, i);

    Eigen::VectorXd r(6 * N);
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3& f = loads.force[i];
        const Vec3& c = loads.couple[i];
        Vec3 rf, rm;
        if (i > 0 && i + 1 < N) {
            const Resultant& lo = mid[i - 1];
            const Resultant& hi = mid[i];
            rf = (hi.n - lo.n) / h + f;
            rm = (hi.m - lo.m) / h + 0.5 * (lo.x_d.cross(lo.n) + hi.x_d.cross(hi.n)) + c;
        } else {
            const RodEnd& end = i == 0 ? pb.bc.start : pb.bc.end;
            if (end.kind == RodEnd::Kind::fixed) {
                rf = chi[i].a - end.motion.a;
                rm = (chi[i].r * end.motion.r.transpose()).log();
            } else {
                const double side = i == 0 ? -1.0 : 1.0;
                const Resultant& adj = i == 0 ? mid.front() : mid.back();
                rf = (end.force - side * adj.n) / (0.5 * h) + f;
                rm = (end.couple - side * adj.m) / (0.5 * h) + adj.x_d.cross(adj.n) + c;
            }
        }
        r.segment<3>(6 * i) = rf;
        r.segment<3>(6 * i + 3) = rm;
    }
    return r;
}

}  // namespace

Eigen::VectorXd rod_residual(const RodProblem& pb, const std::vector<RigidMotion>& chi) {
    if (pb.grid.dim() != 1) throw std::invalid_argument("rod grids are 1D");
    if (chi.size() != pb.grid.size()) throw GridMismatch("rod field size does not match grid");
    return assemble(pb, chi, sample_loads(pb));
}

RodSolveReport solve_rod(const RodProblem& pb, const RodSolveOptions& opt) {
    if (pb.grid.dim() != 1) throw std::invalid_argument("solve_rod needs a 1D grid");
    ParameterGrid grid = pb.grid;
    const std::size_t N = grid.size();
    grid.set_kind(0, pb.bc.start.kind == RodEnd::Kind::fixed ? NodeKind::fixed_boundary : NodeKind::free_boundary);
    grid.set_kind(N - 1, pb.bc.end.kind == RodEnd::Kind::fixed ? NodeKind::fixed_boundary : NodeKind::free_boundary);

    std::vector<RigidMotion> chi = opt.initial.empty() ? std::vector<RigidMotion>(N) : opt.initial;
    if (chi.size() != N) throw GridMismatch("initial rod field size does not match grid");

    const NodeLoads loads = sample_loads(pb);
    const auto residual = [&](const std::vector<RigidMotion>& c) { return assemble(pb, c, loads); };
    Eigen::VectorXd r = residual(chi);
    double norm = inf_norm(r);
    RodSolveReport rep{DisplacementField(grid, chi), 0, {{0, norm, 0.0}}, false, norm, ""};
    std::vector<RigidMotion> best = chi;
    double best_norm = norm;

    const Eigen::Index M = r.size();
    Eigen::MatrixXd J(M, M);
    int it = 0;
    while (norm > opt.tol && it < opt.max_iter) {
        ++it;
        for (Eigen::Index k = 0; k < M; ++k) {
            const Eigen::VectorXd rp = residual(perturbed(chi, k, opt.fd_step));
            const Eigen::VectorXd rm = residual(perturbed(chi, k, -opt.fd_step));
            J.col(k) = (rp - rm) / (2.0 * opt.fd_step);
        }
        if (!J.allFinite()) throw NumericalError("non-finite Newton Jacobian at iteration " + std::to_string(it));
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible()) throw NumericalError("singular Newton system at iteration " + std::to_string(it));
        const Eigen::VectorXd dx = lu.solve(-r);

        double t = 1.0;
        std::vector<RigidMotion> trial;
        Eigen::VectorXd rt;
        double nt = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 30; ++k, t *= 0.5) {
            trial = updated(chi, dx, t);
            rt = residual(trial);
            nt = inf_norm(rt);
            if (std::isfinite(nt) && nt < norm) break;
        }
        if (!std::isfinite(nt)) throw NumericalError("non-finite residual at iteration " + std::to_string(it));
        chi = std::move(trial);
        r = std::move(rt);
        norm = nt;
        rep.trace.push_back({it, norm, t});
        if (norm < best_norm) {
            best_norm = norm;
            best = chi;
        }
    }
    rep.iterations = it;
    rep.converged = best_norm <= opt.tol;
    rep.residual = best_norm;
    rep.field = DisplacementField(grid, best);
    rep.message = rep.converged ? "converged"
                                : "no convergence after " + std::to_string(it) + " iterations";
    return rep;
}

std::pair<Vec3, Vec3> rod_stress_resultants(const ConstitutiveLaw& law,
                                            const std::function<RigidMotion(double)>& chi_star, double rho,
                                            double step) {
    const auto position = [&](double s) -> Vec3 {
        const RigidMotion g = chi_star(s);
        return g.a + g.r * Vec3(s, 0.0, 0.0);
    };
    const auto frame = [&](double s) -> Mat3 { return chi_star(s).r.matrix(); };
    StateNode st;
    st.x = position(rho);
    st.e = chi_star(rho).r;
    st.x_d[0] = fd8<Vec3>(position, rho, step);
    st.e_d[0] = fd8<Mat3>(frame, rho, step);
    const Resultant r = evaluate(law, Vec3(rho, 0.0, 0.0), st);
    return {r.n, r.m};
}

RodLoads manufactured_loads(const ConstitutiveLaw& law, std::function<RigidMotion(double)> chi_star,
                            double step) {
    RodLoads out;
    out.force = [law, chi_star, step](double rho) -> Vec3 {
        const auto n = [&](double s) -> Vec3 { return rod_stress_resultants(law, chi_star, s, step).first; };
        return -fd8<Vec3>(n, rho, step);
    };
    out.couple = [law, chi_star, step](double rho) -> Vec3 {
        const auto m = [&](double s) -> Vec3 { return rod_stress_resultants(law, chi_star, s, step).second; };
        const auto position = [&](double s) -> Vec3 {
            const RigidMotion g = chi_star(s);
            return g.a + g.r * Vec3(s, 0.0, 0.0);
        };
        const Vec3 n = rod_stress_resultants(law, chi_star, rho, step).first;
        return Vec3(-fd8<Vec3>(m, rho, step) - fd8<Vec3>(position, rho, step).cross(n));
    };
    return out;
}

}  // namespace cosserat
