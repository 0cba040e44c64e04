#pragma once

#include "ntgv/admm/state.hpp"
#include "ntgv/sphere.hpp"

namespace ntgv {

/// Moves D1, Lambda1 (per-triangle normals) and d2, lambda2 (plus-side normals) from the
/// tangent spaces of old_mesh to those of new_mesh. Both meshes must share topology.
inline void transport_variables(const TriMesh& old_mesh, const TriMesh& new_mesh, std::vector<Tensor3>& D1,
                                std::vector<Tensor3>& Lambda1, std::vector<EdgeVectors>& d2,
                                std::vector<EdgeVectors>& lambda2)
{
    if (!old_mesh.shares_topology(new_mesh))
        throw Error(ErrorCode::SizeMismatch, "transport requires meshes with identical topology");
    const std::vector<Vec3> n_old = normals(old_mesh);
    const std::vector<Vec3> n_new = normals(new_mesh);
    for (Index t = 0; t < new_mesh.num_triangles(); ++t) {
        D1[t] = transport_tensor(D1[t], n_old[t], n_new[t]);
        Lambda1[t] = transport_tensor(Lambda1[t], n_old[t], n_new[t]);
    }
    for (Index e = 0; e < new_mesh.num_edges(); ++e) {
        const Index tp = new_mesh.edge(e).triangle[0];
        const Mat3 m = transport_matrix(n_old[tp], n_new[tp]);
        for (int i = 0; i < 2; ++i) {
            d2[e][i] = m * d2[e][i];
            lambda2[e][i] = m * lambda2[e][i];
        }
    }
}

/// Transports the split variables and multipliers of state onto new_mesh and makes it
/// the current iterate. The W coefficients are kept.
inline void transport_state(AdmmState& state, const TriMesh& new_mesh)
{
    transport_variables(state.mesh, new_mesh, state.D1, state.Lambda1, state.d2, state.lambda2);
    state.mesh = new_mesh;
}

} // namespace ntgv
