#pragma once

#include "ntgv/admm/config.hpp"
#include "ntgv/admm/lagrangian.hpp"
#include "ntgv/admm/newton.hpp"
#include "ntgv/admm/state.hpp"
#include "ntgv/admm/subproblems.hpp"
#include "ntgv/admm/transport.hpp"
#include "ntgv/regularizers.hpp"

#include <chrono>
#include <functional>
#include <vector>

namespace ntgv {

/// One record of the convergence log.
struct IterationRecord
{
    int iteration = 0;
    double lagrangian_before_newton = 0.0;
    double lagrangian_after_newton = 0.0;
    double fidelity = 0.0;
    TgvBreakdown tgv;
    PrimalResiduals residuals;
    int newton_steps_accepted = 0;
    bool line_search_failed = false;
    int cg_iterations = 0;
    double cg_relative_residual = 0.0;
    double wall_seconds = 0.0;
};

struct RunResult
{
    TriMesh mesh;
    AdmmState state;
    std::vector<IterationRecord> log;
    int iterations = 0;
    bool converged = false;
};

struct RunOptions
{
    bool record_tgv = true; ///< evaluate the TGV breakdown every iteration
    bool timing = true;     ///< record wall time (disable for bit-reproducible logs)
    std::function<void(const IterationRecord&, const AdmmState&)> on_iteration;
};

/// ADMM for fidelity + barrier + TGV (or TV) of the normal. The noisy mesh is both the
/// starting point and the data term.
inline RunResult run(const TriMesh& noisy, const SolverConfig& cfg, const RunOptions& opts = {})
{
    cfg.validate();
    const Eigen::Matrix3Xd reference = noisy.vertices();
    const double primal_tol = cfg.primal_tol_factor * mean_edge_length(noisy);
    const auto start = std::chrono::steady_clock::now();
    const RegularizerWeights weights{cfg.alpha0, cfg.first_order_weight(), cfg.beta};

    RunResult result;
    AdmmState s = AdmmState::initial(noisy);
    for (int k = 0; k < cfg.max_outer_iters; ++k) {
        IterationRecord rec;
        rec.iteration = k;

        solve_d_subproblems(s, cfg);
        const CgReport cg = solve_w_subproblem(s, cfg);
        rec.cg_iterations = cg.iterations;
        rec.cg_relative_residual = cg.relative_residual;

        NewtonReport nr;
        const TriMesh next = newton_mesh_step(s, cfg, reference, &nr);
        rec.lagrangian_before_newton = nr.value_before;
        rec.lagrangian_after_newton = nr.value_after;
        rec.newton_steps_accepted = nr.accepted_steps;
        rec.line_search_failed = nr.line_search_failed;

        transport_state(s, next);
        const ConstraintValues c = constraint_values(s.mesh, s.w);
        rec.residuals = primal_residuals(s.mesh, c, s.d0, s.D1, s.d2);
        update_multipliers(s, cfg, c);
        s.iteration = k + 1;

        rec.fidelity = fidelity(s.mesh, reference);
        if (opts.record_tgv) rec.tgv = tgv_objective(s.mesh, s.w, weights);
        if (opts.timing)
            rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (opts.on_iteration) opts.on_iteration(rec, s);
        result.log.push_back(rec);
        result.iterations = k + 1;
        if (rec.residuals.max() < primal_tol) {
            result.converged = true;
            break;
        }
    }
    result.mesh = s.mesh;
    result.state = std::move(s);
    return result;
}

} // namespace ntgv
