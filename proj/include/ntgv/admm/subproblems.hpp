#pragma once

#include "ntgv/admm/config.hpp"
#include "ntgv/admm/lagrangian.hpp"
#include "ntgv/admm/shrink.hpp"
#include "ntgv/admm/state.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

namespace ntgv {

/// Closed-form updates of d0, D1 and d2 by shrinkage.
inline void solve_d_subproblems(AdmmState& s, const SolverConfig& cfg, const ConstraintValues& c)
{
    const double a1 = cfg.first_order_weight();
    for (Index e = 0; e < s.mesh.num_edges(); ++e) s.d0[e] = shrink(c.g0[e] + s.lambda0[e] / cfg.rho0, a1 / cfg.rho0);
    if (cfg.tv_mode) return;
    for (Index t = 0; t < s.mesh.num_triangles(); ++t)
        s.D1[t] = shrink(c.DW[t] + (1.0 / cfg.rho1) * s.Lambda1[t], cfg.alpha0 / cfg.rho1);
    for (Index e = 0; e < s.mesh.num_edges(); ++e)
        for (int i = 0; i < 2; ++i)
            s.d2[e][i] = shrink(c.J[e][i] + s.lambda2[e][i] / cfg.rho2, cfg.alpha0 / cfg.rho2);
}

inline void solve_d_subproblems(AdmmState& s, const SolverConfig& cfg)
{
    solve_d_subproblems(s, cfg, constraint_values(s.mesh, s.w));
}

/// Weighted least-squares form of the W-subproblem: minimize 1/2 |B c - b|^2 over the
/// field coefficients c. Row blocks: one per edge (d0 coupling), three per triangle
/// (Jacobian, reduced by the structure D W = g (x) P), three per edge endpoint (jump).
struct WSystem
{
    Eigen::SparseMatrix<double, Eigen::RowMajor> B;
    Eigen::VectorXd b;
};

inline WSystem assemble_w_system(const AdmmState& s, const SolverConfig& cfg)
{
    const TriMesh& mesh = s.mesh;
    const Index ne = mesh.num_edges();
    const Index nt = mesh.num_triangles();
    const Index rows = ne + 3 * nt + 6 * ne;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(ne + 18 * nt + 60 * ne);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);

    std::vector<kernel::TriangleGeometry<double>> geo(nt);
    std::vector<std::array<kernel::LocalEdge, 3>> local(nt);
    for (Index t = 0; t < nt; ++t) {
        local[t] = local_edges(mesh, t, nullptr);
        geo[t] = field_geometry(mesh, nullptr, t);
    }

    for (Index e = 0; e < ne; ++e) {
        const EdgeFrame f = edge_frame(mesh, e, true);
        const double w = std::sqrt(cfg.rho0 * f.length);
        const double theta = f.mu_plus.dot(log_map(f.n_plus, f.n_minus));
        trip.emplace_back(e, 2 * e, w * f.h / f.length);
        b[e] = w * (s.d0[e] - s.lambda0[e] / cfg.rho0 - theta);
    }

    const Mat3 id = Mat3::Identity();
    for (Index t = 0; t < nt; ++t) {
        const auto& tg = geo[t];
        const double area = tg.area;
        const double w = std::sqrt(2.0 * cfg.rho1 * area) / (2.0 * area);
        const Index row = ne + 3 * t;
        const auto& refs = mesh.topology().triangle_edges[t];
        for (int k = 0; k < 3; ++k) {
            const Index col = 2 * refs[k].edge;
            for (int r = 0; r < 3; ++r) {
                trip.emplace_back(row + r, col, w * tg.mu[k][r]);
                trip.emplace_back(row + r, col + 1, w * local[t][k].side * tg.t[k][r]);
            }
        }
        const Tensor3 x = s.D1[t] - (1.0 / cfg.rho1) * s.Lambda1[t];
        const Vec3 xbar = x.contract_last_two(id - tg.n * tg.n.transpose());
        b.segment<3>(row) = std::sqrt(cfg.rho1 * area) / std::sqrt(2.0) * xbar;
    }

    for (Index e = 0; e < ne; ++e) {
        const EdgeTopology& et = mesh.edge(e);
        const Vec3 x1 = mesh.vertex(et.vertex[0]);
        const Vec3 x2 = mesh.vertex(et.vertex[1]);
        const double len = (x2 - x1).norm();
        const Vec3 tangent = (x2 - x1) / len;
        const double w = std::sqrt(0.5 * cfg.rho2 * len);
        const auto& plus = geo[et.triangle[0]];
        const auto& minus = geo[et.triangle[1]];
        const Mat3 m = transport_matrix(minus.n, plus.n);
        const std::array<Vec3, 2> xs{x1, x2};
        for (int i = 0; i < 2; ++i) {
            const Index row = ne + 3 * nt + 6 * e + 3 * i;
            for (int side = 0; side < 2; ++side) {
                const Index t = et.triangle[side];
                const auto& tg = geo[t];
                const auto& refs = mesh.topology().triangle_edges[t];
                const Mat3 op = side == 0 ? Mat3(-id) : m;
                for (int k = 0; k < 3; ++k) {
                    const double wk = (xs[i] - tg.p[(k + 2) % 3]).dot(tangent) / (2.0 * tg.area);
                    const Vec3 v1 = w * wk * (op * tg.mu[k]);
                    const Vec3 v2 = w * wk * local[t][k].side * (op * tg.t[k]);
                    const Index col = 2 * refs[k].edge;
                    for (int r = 0; r < 3; ++r) {
                        trip.emplace_back(row + r, col, v1[r]);
                        trip.emplace_back(row + r, col + 1, v2[r]);
                    }
                }
            }
            b.segment<3>(row) = w * (s.d2[e][i] - s.lambda2[e][i] / cfg.rho2);
        }
    }

    WSystem sys;
    sys.B.resize(rows, 2 * ne);
    sys.B.setFromTriplets(trip.begin(), trip.end());
    sys.b = std::move(b);
    return sys;
}

struct CgReport
{
    int iterations = 0;
    double initial_residual = 0.0;  ///< |B^T b|, the normal-equation residual at W = 0
    double relative_residual = 0.0; ///< final true residual over the initial residual
};

/// Minimizes the augmented Lagrangian over W by conjugate gradients on the normal
/// equations, warm-started at the current coefficients. Convergence is measured against
/// the residual at W = 0 so that the target stays attainable as the warm start improves.
inline CgReport solve_w_subproblem(AdmmState& s, const SolverConfig& cfg)
{
    CgReport report;
    if (cfg.tv_mode) return report;
    const WSystem sys = assemble_w_system(s, cfg);
    const Eigen::SparseMatrix<double> bt = sys.B.transpose();
    const Eigen::SparseMatrix<double> a = (bt * sys.B).pruned();
    report.initial_residual = (bt * sys.b).norm();
    if (report.initial_residual == 0.0) {
        s.w.coefficients().setZero();
        return report;
    }
    const Eigen::VectorXd c0 = s.w.coefficients();
    const Eigen::VectorXd rhs = bt * (sys.b - sys.B * c0);
    const double target = cfg.cg_tol * report.initial_residual;
    report.relative_residual = rhs.norm() / report.initial_residual;
    if (rhs.norm() <= target) return report;

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(target / rhs.norm());
    cg.setMaxIterations(cfg.cg_max_iters > 0 ? cfg.cg_max_iters : 20 * s.mesh.num_edges());
    cg.compute(a);
    const Eigen::VectorXd delta = cg.solve(rhs);
    report.iterations = static_cast<int>(cg.iterations());
    report.relative_residual = (rhs - a * delta).norm() / report.initial_residual;
    if (cg.info() != Eigen::Success) {
        throw Error(ErrorCode::CgNoConvergence, "W-subproblem did not converge in " +
                                                    std::to_string(report.iterations) + " iterations");
    }
    s.w.coefficients() = c0 + delta;
    return report;
}

/// Multiplier ascent with constraint values computed on the current mesh.
inline void update_multipliers(AdmmState& s, const SolverConfig& cfg, const ConstraintValues& c)
{
    for (Index e = 0; e < s.mesh.num_edges(); ++e) s.lambda0[e] += cfg.rho0 * (c.g0[e] - s.d0[e]);
    if (cfg.tv_mode) return;
    for (Index t = 0; t < s.mesh.num_triangles(); ++t) s.Lambda1[t] += cfg.rho1 * (c.DW[t] - s.D1[t]);
    for (Index e = 0; e < s.mesh.num_edges(); ++e)
        for (int i = 0; i < 2; ++i) s.lambda2[e][i] += cfg.rho2 * (c.J[e][i] - s.d2[e][i]);
}

inline void update_multipliers(AdmmState& s, const SolverConfig& cfg)
{
    update_multipliers(s, cfg, constraint_values(s.mesh, s.w));
}

} // namespace ntgv
