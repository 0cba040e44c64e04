#pragma once

#include "ntgv/errors.hpp"
#include "ntgv/mesh.hpp"
#include "ntgv/regularizers.hpp"
#include "ntgv/sphere.hpp"
#include "ntgv/trt.hpp"

#include <algorithm>
#include <numbers>

namespace ntgv::io {

struct MetricsReport
{
    double mean_angular_normal_error_deg = 0.0;
    double rms_vertex_distance = 0.0;
    double max_vertex_distance = 0.0;
    double tv_normal = 0.0;
    TgvBreakdown tgv;
    double runtime_seconds = 0.0;
    int iterations = 0;
};

inline void check_same_connectivity(const TriMesh& a, const TriMesh& b)
{
    if (a.shares_topology(b)) return;
    if (a.num_vertices() != b.num_vertices() || a.topology().triangles != b.topology().triangles)
        throw Error(ErrorCode::SizeMismatch, "meshes differ in connectivity");
}

/// Mean per-triangle angle between unit normals, in degrees.
inline double mean_angular_error_deg(const TriMesh& result, const TriMesh& reference)
{
    check_same_connectivity(result, reference);
    double sum = 0.0;
    for (Index t = 0; t < result.num_triangles(); ++t)
        sum += geodesic_distance(triangle_normal(result, t), triangle_normal(reference, t));
    return sum / result.num_triangles() * 180.0 / std::numbers::pi;
}

/// Error metrics of `result` against `reference`. The TGV breakdown uses `field` when given
/// (it must belong to `result`), otherwise the zero field. Runtime and iteration count are
/// left for the caller.
inline MetricsReport compute_metrics(const TriMesh& result, const TriMesh& reference, const TrtField* field = nullptr,
                                     const RegularizerWeights& weights = {})
{
    check_same_connectivity(result, reference);
    MetricsReport r;
    r.mean_angular_normal_error_deg = mean_angular_error_deg(result, reference);
    double sq = 0.0;
    for (Index i = 0; i < result.num_vertices(); ++i) {
        const double d = (result.vertex(i) - reference.vertex(i)).norm();
        sq += d * d;
        r.max_vertex_distance = std::max(r.max_vertex_distance, d);
    }
    r.rms_vertex_distance = std::sqrt(sq / result.num_vertices());
    r.tv_normal = tv_normal(result);
    r.tgv = field ? tgv_objective(result, *field, weights) : tgv_objective(result, TrtField(result), weights);
    return r;
}

} // namespace ntgv::io
