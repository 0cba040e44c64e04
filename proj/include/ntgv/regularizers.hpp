#pragma once

#include "ntgv/errors.hpp"
#include "ntgv/mesh.hpp"
#include "ntgv/sphere.hpp"
#include "ntgv/trt.hpp"

namespace ntgv {

struct RegularizerWeights
{
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    double beta = 0.0;

    void validate() const
    {
        if (alpha0 < 0.0 || alpha1 < 0.0 || beta < 0.0)
            throw Error(ErrorCode::InvalidArgument, "regularization weights must be nonnegative");
    }
};

struct TgvBreakdown
{
    double alpha1_term = 0.0;   ///< sum over edges of the log/W coupling, unweighted
    double jacobian_term = 0.0; ///< sum over triangles of |T| |D W|_F, unweighted
    double jump_term = 0.0;     ///< sum over edges of the trapezoidal jump norm, unweighted
    double total = 0.0;
};

/// Total variation of the piecewise constant normal: sum_E |E| dist(n+, n-).
inline double tv_normal(const TriMesh& mesh)
{
    double s = 0.0;
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        const EdgeTopology& et = mesh.edge(e);
        const Vec3 np = triangle_normal(mesh, et.triangle[0]);
        const Vec3 nm = triangle_normal(mesh, et.triangle[1]);
        check_not_antipodal(np, nm);
        s += edge_length(mesh, e) * geodesic_distance(np, nm);
    }
    return s;
}

/// |E| |<mu+, log(n+, n-) + h_E W+ mu+>|, the integrand being constant along E.
inline double tgv_alpha1_edge(const TriMesh& mesh, const TrtField& w, Index edge_id)
{
    const EdgeFrame f = edge_frame(mesh, edge_id, true);
    const Vec3 log = log_map(f.n_plus, f.n_minus);
    const Mat3 wp = eval_field(mesh, w, mesh.edge(edge_id).triangle[0], f.midpoint);
    return f.length * std::abs(f.mu_plus.dot(log + f.h * (wp * f.mu_plus)));
}

inline TgvBreakdown tgv_objective(const TriMesh& mesh, const TrtField& w, const RegularizerWeights& weights)
{
    weights.validate();
    w.check_bound_to(mesh);
    TgvBreakdown b;
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        b.alpha1_term += tgv_alpha1_edge(mesh, w, e);
        const EdgeJump j = jump(mesh, w, e);
        b.jump_term += 0.5 * edge_length(mesh, e) * (j.at[0].norm() + j.at[1].norm());
    }
    for (Index t = 0; t < mesh.num_triangles(); ++t)
        b.jacobian_term += triangle_area(mesh, t) * jacobian(mesh, w, t).norm();
    b.total = weights.alpha1 * b.alpha1_term + weights.alpha0 * (b.jacobian_term + b.jump_term);
    return b;
}

/// 1/2 sum_V |x_V - x_V^data|^2.
inline double fidelity(const TriMesh& mesh, const Eigen::Matrix3Xd& reference)
{
    if (reference.cols() != mesh.num_vertices())
        throw Error(ErrorCode::SizeMismatch, "reference vertex count differs from mesh");
    return 0.5 * (mesh.vertices() - reference).squaredNorm();
}

} // namespace ntgv
