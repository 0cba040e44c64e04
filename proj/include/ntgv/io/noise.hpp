#pragma once

#include "ntgv/errors.hpp"
#include "ntgv/mesh.hpp"

#include <cstdint>
#include <random>

namespace ntgv::io {

/// Adds independent Gaussian noise with standard deviation sigma_factor * mean edge length
/// to every vertex coordinate. Deterministic for a given seed.
inline TriMesh add_noise(const TriMesh& mesh, double sigma_factor, std::uint64_t seed)
{
    if (!(sigma_factor >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise factor must be nonnegative");
    if (sigma_factor == 0.0) return mesh;
    const double sigma = sigma_factor * mean_edge_length(mesh);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    Eigen::Matrix3Xd v = mesh.vertices();
    for (Eigen::Index i = 0; i < v.cols(); ++i)
        for (int c = 0; c < 3; ++c) v(c, i) += normal(rng);
    return mesh.with_vertices(std::move(v));
}

} // namespace ntgv::io
