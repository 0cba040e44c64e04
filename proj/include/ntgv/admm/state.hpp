#pragma once

#include "ntgv/mesh.hpp"
#include "ntgv/trt.hpp"

#include <array>
#include <vector>

namespace ntgv {

using EdgeVectors = std::array<Vec3, 2>; ///< values at X_{E,1} and X_{E,2}

/// Split variables, multipliers, W and the current mesh iterate.
struct AdmmState
{
    TriMesh mesh;
    TrtField w;
    Eigen::VectorXd d0;
    std::vector<Tensor3> D1;
    std::vector<EdgeVectors> d2;
    Eigen::VectorXd lambda0;
    std::vector<Tensor3> Lambda1;
    std::vector<EdgeVectors> lambda2;
    int iteration = 0;

    /// W = 0 and all splits and multipliers zero.
    static AdmmState initial(const TriMesh& mesh)
    {
        AdmmState s;
        s.mesh = mesh;
        s.w = TrtField(mesh);
        const auto ne = static_cast<std::size_t>(mesh.num_edges());
        const auto nt = static_cast<std::size_t>(mesh.num_triangles());
        s.d0 = Eigen::VectorXd::Zero(mesh.num_edges());
        s.lambda0 = Eigen::VectorXd::Zero(mesh.num_edges());
        s.D1.assign(nt, Tensor3::zero());
        s.Lambda1.assign(nt, Tensor3::zero());
        s.d2.assign(ne, EdgeVectors{Vec3::Zero(), Vec3::Zero()});
        s.lambda2.assign(ne, EdgeVectors{Vec3::Zero(), Vec3::Zero()});
        return s;
    }

    void check_consistent() const
    {
        const auto ne = static_cast<std::size_t>(mesh.num_edges());
        const auto nt = static_cast<std::size_t>(mesh.num_triangles());
        w.check_bound_to(mesh);
        if (static_cast<std::size_t>(d0.size()) != ne || static_cast<std::size_t>(lambda0.size()) != ne ||
            D1.size() != nt || Lambda1.size() != nt || d2.size() != ne || lambda2.size() != ne)
            throw Error(ErrorCode::SizeMismatch, "ADMM state arrays do not match the mesh");
    }
};

} // namespace ntgv
