#pragma once

#include "ntgv/errors.hpp"

namespace ntgv {

enum class AntipodalPolicy {
    RejectStep, ///< treat antipodal adjacent normals in a trial mesh as a failed line-search step
    Throw,      ///< propagate AntipodalPoints out of the solver
};

struct SolverConfig
{
    double alpha0 = 3e-5;
    double alpha1 = 3.5e-3;
    bool tv_mode = false;
    double beta = 0.0; ///< replaces alpha1 when tv_mode is set

    double rho0 = 1.0;
    double rho1 = 1.0;
    double rho2 = 1.0;
    double tau = 1e-12;

    int max_outer_iters = 300;
    int newton_steps = 3;
    double cg_tol = 1e-10;
    int cg_max_iters = 0;              ///< 0 selects 10 x (2 x edge count)
    double primal_tol_factor = 1e-6;   ///< primal tolerance relative to the mean edge length

    double armijo_c = 1e-4;
    int max_halvings = 30;
    int newton_cg_max_iters = 200;
    AntipodalPolicy antipodal_policy = AntipodalPolicy::RejectStep;

    /// Weight of the first-order term: alpha1, or beta in TV mode.
    double first_order_weight() const { return tv_mode ? beta : alpha1; }

    void validate() const
    {
        if (alpha0 < 0.0 || alpha1 < 0.0 || beta < 0.0)
            throw Error(ErrorCode::InvalidArgument, "regularization weights must be nonnegative");
        if (!(rho0 > 0.0) || !(rho1 > 0.0) || !(rho2 > 0.0))
            throw Error(ErrorCode::InvalidArgument, "penalty parameters must be positive");
        if (tau < 0.0) throw Error(ErrorCode::InvalidArgument, "barrier weight must be nonnegative");
        if (max_outer_iters < 0 || newton_steps < 0 || cg_max_iters < 0 || max_halvings < 0)
            throw Error(ErrorCode::InvalidArgument, "iteration budgets must be nonnegative");
        if (!(cg_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cg tolerance must be positive");
    }
};

} // namespace ntgv
