#pragma once

// Direct evaluation of the augmented Lagrangian from edge frames, the sphere log map,
// field evaluation and tensor transports.

#include "ntgv/admm/config.hpp"
#include "ntgv/admm/state.hpp"
#include "ntgv/admm/transport.hpp"
#include "ntgv/regularizers.hpp"

namespace ntgv {

/// Right-hand sides of the three splitting constraints for a given mesh and W.
struct ConstraintValues
{
    Eigen::VectorXd g0;            ///< <mu+, log(n+, n-) + h_E W+ mu+> per edge
    std::vector<Tensor3> DW;       ///< piecewise Jacobian per triangle
    std::vector<EdgeVectors> J;    ///< jump at the edge endpoints
};

inline ConstraintValues constraint_values(const TriMesh& mesh, const TrtField& w)
{
    w.check_bound_to(mesh);
    ConstraintValues c;
    c.g0.resize(mesh.num_edges());
    c.J.resize(mesh.num_edges());
    c.DW.resize(mesh.num_triangles());
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        const EdgeFrame f = edge_frame(mesh, e, true);
        const Mat3 wp = eval_field(mesh, w, mesh.edge(e).triangle[0], f.midpoint);
        c.g0[e] = f.mu_plus.dot(log_map(f.n_plus, f.n_minus) + f.h * (wp * f.mu_plus));
        const EdgeJump j = jump(mesh, w, e);
        c.J[e] = {j.at[0], j.at[1]};
    }
    for (Index t = 0; t < mesh.num_triangles(); ++t) c.DW[t] = jacobian(mesh, w, t);
    return c;
}

/// Norms of the constraint violations in the weighted inner products.
struct PrimalResiduals
{
    double r0 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double max() const { return std::max({r0, r1, r2}); }
};

inline PrimalResiduals primal_residuals(const TriMesh& mesh, const ConstraintValues& c, const Eigen::VectorXd& d0,
                                        const std::vector<Tensor3>& D1, const std::vector<EdgeVectors>& d2)
{
    PrimalResiduals r;
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        const double len = edge_length(mesh, e);
        r.r0 += len * std::pow(c.g0[e] - d0[e], 2);
        for (int i = 0; i < 2; ++i) r.r2 += 0.5 * len * (c.J[e][i] - d2[e][i]).squaredNorm();
    }
    for (Index t = 0; t < mesh.num_triangles(); ++t)
        r.r1 += triangle_area(mesh, t) * (c.DW[t] - D1[t]).squared_norm();
    r.r0 = std::sqrt(r.r0);
    r.r1 = std::sqrt(r.r1);
    r.r2 = std::sqrt(r.r2);
    return r;
}

struct LagrangianBreakdown
{
    double fidelity = 0.0;
    double barrier = 0.0;
    double first_order = 0.0;  ///< alpha1 (or beta) sum |E| |d0|
    double second_order = 0.0; ///< alpha0 (sum |T| |D1| + sum |E|/2 |d2|)
    double multipliers = 0.0;  ///< the three multiplier pairings
    double penalties = 0.0;    ///< the three quadratic penalties
    double total = 0.0;
};

/// Augmented Lagrangian at mesh with variables already tangent to mesh. In TV mode W, D1 and d2 are ignored.
inline LagrangianBreakdown augmented_lagrangian(const TriMesh& mesh, const TrtField& w, const Eigen::VectorXd& d0,
                                                const std::vector<Tensor3>& D1, const std::vector<EdgeVectors>& d2,
                                                const Eigen::VectorXd& lambda0, const std::vector<Tensor3>& Lambda1,
                                                const std::vector<EdgeVectors>& lambda2, const SolverConfig& cfg,
                                                const Eigen::Matrix3Xd& reference)
{
    const ConstraintValues c = constraint_values(mesh, cfg.tv_mode ? TrtField(mesh) : w);
    LagrangianBreakdown b;
    b.fidelity = fidelity(mesh, reference);
    b.barrier = barrier(mesh, cfg.tau);
    const double a1 = cfg.first_order_weight();
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        const double len = edge_length(mesh, e);
        b.first_order += a1 * len * std::abs(d0[e]);
        b.multipliers += len * lambda0[e] * (c.g0[e] - d0[e]);
        b.penalties += 0.5 * cfg.rho0 * len * std::pow(d0[e] - c.g0[e], 2);
        if (cfg.tv_mode) continue;
        for (int i = 0; i < 2; ++i) {
            const double wgt = 0.5 * len;
            b.second_order += cfg.alpha0 * wgt * d2[e][i].norm();
            b.multipliers += wgt * lambda2[e][i].dot(c.J[e][i] - d2[e][i]);
            b.penalties += 0.5 * cfg.rho2 * wgt * (d2[e][i] - c.J[e][i]).squaredNorm();
        }
    }
    for (Index t = 0; t < mesh.num_triangles() && !cfg.tv_mode; ++t) {
        const double area = triangle_area(mesh, t);
        b.second_order += cfg.alpha0 * area * D1[t].norm();
        b.multipliers += area * Lambda1[t].dot(c.DW[t] - D1[t]);
        b.penalties += 0.5 * cfg.rho1 * area * (D1[t] - c.DW[t]).squared_norm();
    }
    b.total = b.fidelity + b.barrier + b.first_order + b.second_order + b.multipliers + b.penalties;
    return b;
}

inline LagrangianBreakdown augmented_lagrangian(const AdmmState& s, const SolverConfig& cfg,
                                                const Eigen::Matrix3Xd& reference)
{
    s.check_consistent();
    return augmented_lagrangian(s.mesh, s.w, s.d0, s.D1, s.d2, s.lambda0, s.Lambda1, s.lambda2, cfg, reference);
}

/// Augmented Lagrangian as a function of a trial mesh: the fixed variables of state are
/// transported from the normals of state.mesh to those of trial.
inline LagrangianBreakdown augmented_lagrangian_at(const AdmmState& s, const TriMesh& trial, const SolverConfig& cfg,
                                                   const Eigen::Matrix3Xd& reference)
{
    s.check_consistent();
    auto D1 = s.D1;
    auto Lambda1 = s.Lambda1;
    auto d2 = s.d2;
    auto lambda2 = s.lambda2;
    transport_variables(s.mesh, trial, D1, Lambda1, d2, lambda2);
    return augmented_lagrangian(trial, s.w, s.d0, D1, d2, s.lambda0, Lambda1, lambda2, cfg, reference);
}

} // namespace ntgv
