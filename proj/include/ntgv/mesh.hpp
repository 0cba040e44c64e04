#pragma once

#include "ntgv/errors.hpp"
#include "ntgv/kernels.hpp"
#include "ntgv/types.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace ntgv {

/// Connectivity of one edge. The unit tangent t_E points from vertex[0] to vertex[1];
/// these are the endpoints X_{E,1} and X_{E,2}.
struct EdgeTopology
{
    std::array<Index, 2> vertex{};
    std::array<Index, 2> triangle{}; ///< [0] = T_{E+}, [1] = T_{E-}
    std::array<Index, 2> opposite{}; ///< vertex of each triangle not on the edge
    std::array<int, 2> local{};      ///< local edge slot of the edge inside each triangle
    /// +1 when the triangle's oriented boundary runs vertex[0] -> vertex[1], else -1.
    std::array<int, 2> traversal{};
};

/// Reference from a triangle's local edge slot to its global edge.
struct TriangleEdgeRef
{
    Index edge = 0;
    int side = 0; ///< 0 if the triangle is T_{E+}, 1 if T_{E-}
};

/// Immutable connectivity shared by all vertex-position snapshots of a mesh.
struct Topology
{
    Index vertex_count = 0;
    std::vector<Triangle> triangles;
    std::vector<EdgeTopology> edges;
    /// Local edge i of triangle (v0, v1, v2) joins v_i and v_{i+1}.
    std::vector<std::array<TriangleEdgeRef, 3>> triangle_edges;
};

/// Closed, consistently oriented triangle mesh: shared topology plus vertex positions.
class TriMesh
{
public:
    TriMesh() = default;
    TriMesh(std::shared_ptr<const Topology> topology, Eigen::Matrix3Xd vertices)
        : m_topology(std::move(topology))
        , m_vertices(std::move(vertices))
    {
        if (m_vertices.cols() != m_topology->vertex_count)
            throw Error(ErrorCode::SizeMismatch, "vertex count does not match topology");
    }

    const Topology& topology() const { return *m_topology; }
    const std::shared_ptr<const Topology>& topology_ptr() const { return m_topology; }
    const Eigen::Matrix3Xd& vertices() const { return m_vertices; }
    Vec3 vertex(Index i) const { return m_vertices.col(i); }

    Index num_vertices() const { return static_cast<Index>(m_vertices.cols()); }
    Index num_edges() const { return static_cast<Index>(m_topology->edges.size()); }
    Index num_triangles() const { return static_cast<Index>(m_topology->triangles.size()); }

    const Triangle& triangle(Index t) const { return m_topology->triangles[t]; }
    const EdgeTopology& edge(Index e) const { return m_topology->edges[e]; }

    /// Same connectivity and orientation with new vertex positions.
    TriMesh with_vertices(Eigen::Matrix3Xd vertices) const
    {
        return TriMesh(m_topology, std::move(vertices));
    }

    bool shares_topology(const TriMesh& other) const { return m_topology == other.m_topology; }

private:
    std::shared_ptr<const Topology> m_topology;
    Eigen::Matrix3Xd m_vertices;
};

namespace detail {

inline double triangle_area(const Eigen::Matrix3Xd& v, const Triangle& t)
{
    const Vec3 a = v.col(t[0]);
    return 0.5 * (Vec3(v.col(t[1])) - a).cross(Vec3(v.col(t[2])) - a).norm();
}

inline double mean_squared_edge_length(const Eigen::Matrix3Xd& v, const std::vector<EdgeTopology>& edges)
{
    double s = 0.0;
    for (const auto& e : edges) s += (v.col(e.vertex[1]) - v.col(e.vertex[0])).squaredNorm();
    return edges.empty() ? 0.0 : s / static_cast<double>(edges.size());
}

inline void check_degenerate(const Eigen::Matrix3Xd& v, const Topology& topo)
{
    const double threshold = 1e-14 * mean_squared_edge_length(v, topo.edges);
    for (std::size_t t = 0; t < topo.triangles.size(); ++t) {
        const double area = triangle_area(v, topo.triangles[t]);
        if (!(area >= threshold) || area == 0.0) {
            throw Error(ErrorCode::DegenerateTriangle,
                        "triangle " + std::to_string(t) + " has area " + std::to_string(area));
        }
    }
}

} // namespace detail

/// Builds edges and adjacency and validates the closed-manifold assumptions.
///
/// Orientation rule: for an edge {a, b} with a < b the tangent points from a to b and
/// T_{E+} is the adjacent triangle whose boundary traverses a -> b.
inline TriMesh build_topology(Eigen::Matrix3Xd vertices, std::vector<Triangle> triangles)
{
    if (triangles.empty()) throw Error(ErrorCode::InvalidArgument, "triangle list is empty");
    const Index nv = static_cast<Index>(vertices.cols());
    if (!vertices.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite vertex coordinate");

    struct HalfEdge
    {
        Index lo, hi, tri;
        int local;
        bool forward; // traverses lo -> hi
    };
    std::vector<HalfEdge> half;
    half.reserve(3 * triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const Triangle& tri = triangles[t];
        for (Index idx : tri) {
            if (idx < 0 || idx >= nv) {
                throw Error(ErrorCode::InvalidIndex, "triangle " + std::to_string(t) +
                                                         " references vertex " + std::to_string(idx));
            }
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw Error(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(t) + " repeats a vertex");
        for (int i = 0; i < 3; ++i) {
            const Index a = tri[i];
            const Index b = tri[(i + 1) % 3];
            half.push_back({std::min(a, b), std::max(a, b), static_cast<Index>(t), i, a < b});
        }
    }
    std::sort(half.begin(), half.end(), [](const HalfEdge& x, const HalfEdge& y) {
        return std::tie(x.lo, x.hi, x.tri) < std::tie(y.lo, y.hi, y.tri);
    });

    auto topo = std::make_shared<Topology>();
    topo->vertex_count = nv;
    topo->triangles = std::move(triangles);
    topo->triangle_edges.resize(topo->triangles.size());

    for (std::size_t i = 0; i < half.size();) {
        std::size_t j = i;
        while (j < half.size() && half[j].lo == half[i].lo && half[j].hi == half[i].hi) ++j;
        if (j - i != 2) {
            std::ostringstream msg;
            msg << "edge (" << half[i].lo << ", " << half[i].hi << ") has " << (j - i)
                << " adjacent triangles";
            throw Error(ErrorCode::NonManifoldEdge, msg.str());
        }
        const HalfEdge& h0 = half[i];
        const HalfEdge& h1 = half[i + 1];
        if (h0.forward == h1.forward) {
            std::ostringstream msg;
            msg << "edge (" << h0.lo << ", " << h0.hi << ") is traversed in the same direction by triangles "
                << h0.tri << " and " << h1.tri;
            throw Error(ErrorCode::InconsistentOrientation, msg.str());
        }
        const HalfEdge& plus = h0.forward ? h0 : h1;
        const HalfEdge& minus = h0.forward ? h1 : h0;

        EdgeTopology e;
        e.vertex = {plus.lo, plus.hi};
        e.triangle = {plus.tri, minus.tri};
        e.local = {plus.local, minus.local};
        e.opposite = {topo->triangles[plus.tri][(plus.local + 2) % 3],
                      topo->triangles[minus.tri][(minus.local + 2) % 3]};
        e.traversal = {1, -1};
        const Index id = static_cast<Index>(topo->edges.size());
        topo->edges.push_back(e);
        topo->triangle_edges[plus.tri][plus.local] = {id, 0};
        topo->triangle_edges[minus.tri][minus.local] = {id, 1};
        i = j;
    }

    detail::check_degenerate(vertices, *topo);
    return TriMesh(std::move(topo), std::move(vertices));
}

/// Per-edge change of the arbitrary orientation choice.
struct EdgeFlip
{
    bool swap_sides = false;      ///< exchange the roles of T_{E+} and T_{E-}
    bool reverse_tangent = false; ///< negate t_E (swap X_{E,1} and X_{E,2})
};

/// Copy of the mesh with a different orientation choice on each edge.
inline TriMesh reoriented(const TriMesh& mesh, const std::vector<EdgeFlip>& flips)
{
    if (flips.size() != static_cast<std::size_t>(mesh.num_edges()))
        throw Error(ErrorCode::SizeMismatch, "one flip per edge expected");
    auto topo = std::make_shared<Topology>(mesh.topology());
    for (std::size_t id = 0; id < flips.size(); ++id) {
        EdgeTopology& e = topo->edges[id];
        if (flips[id].swap_sides) {
            std::swap(e.triangle[0], e.triangle[1]);
            std::swap(e.opposite[0], e.opposite[1]);
            std::swap(e.local[0], e.local[1]);
            std::swap(e.traversal[0], e.traversal[1]);
        }
        if (flips[id].reverse_tangent) {
            std::swap(e.vertex[0], e.vertex[1]);
            e.traversal[0] = -e.traversal[0];
            e.traversal[1] = -e.traversal[1];
        }
        for (int s = 0; s < 2; ++s) topo->triangle_edges[e.triangle[s]][e.local[s]] = {static_cast<Index>(id), s};
    }
    return TriMesh(std::move(topo), mesh.vertices());
}

inline TriMesh reoriented(const TriMesh& mesh, EdgeFlip flip)
{
    return reoriented(mesh, std::vector<EdgeFlip>(mesh.num_edges(), flip));
}

inline double triangle_area(const TriMesh& mesh, Index t)
{
    return detail::triangle_area(mesh.vertices(), mesh.triangle(t));
}

inline double edge_length(const TriMesh& mesh, Index e)
{
    const auto& et = mesh.edge(e);
    return (mesh.vertices().col(et.vertex[1]) - mesh.vertices().col(et.vertex[0])).norm();
}

inline double mean_edge_length(const TriMesh& mesh)
{
    double s = 0.0;
    for (Index e = 0; e < mesh.num_edges(); ++e) s += edge_length(mesh, e);
    return s / mesh.num_edges();
}

inline Vec3 triangle_normal(const TriMesh& mesh, Index t)
{
    const Triangle& tri = mesh.triangle(t);
    const Vec3 a = mesh.vertex(tri[0]);
    const Vec3 c = (mesh.vertex(tri[1]) - a).cross(mesh.vertex(tri[2]) - a);
    const double len = c.norm();
    if (!(len > 0.0)) throw Error(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(t) + " has zero area");
    return c / len;
}

/// Unit normal of every triangle, oriented by the right-hand rule.
inline std::vector<Vec3> normals(const TriMesh& mesh)
{
    std::vector<Vec3> n(mesh.num_triangles());
    for (Index t = 0; t < mesh.num_triangles(); ++t) n[t] = triangle_normal(mesh, t);
    return n;
}

inline std::vector<double> triangle_areas(const TriMesh& mesh)
{
    std::vector<double> a(mesh.num_triangles());
    for (Index t = 0; t < mesh.num_triangles(); ++t) a[t] = triangle_area(mesh, t);
    return a;
}

/// Throws DegenerateTriangle if any triangle fell below the degeneracy threshold.
inline void validate_geometry(const TriMesh& mesh)
{
    detail::check_degenerate(mesh.vertices(), mesh.topology());
}

/// tau * sum_T 1/|T|.
inline double barrier(const TriMesh& mesh, double tau)
{
    if (tau < 0.0) throw Error(ErrorCode::InvalidArgument, "barrier weight must be nonnegative");
    if (tau == 0.0) return 0.0;
    double s = 0.0;
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
        const double a = triangle_area(mesh, t);
        if (!(a > 0.0)) throw Error(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(t) + " has zero area");
        s += 1.0 / a;
    }
    return tau * s;
}

/// Geometric frame of an interior edge.
struct EdgeFrame
{
    Vec3 n_plus, n_minus;
    Vec3 mu_plus, mu_minus;
    Vec3 t;
    double length = 0.0;
    double h = 0.0;
    Vec3 midpoint;
    Vec3 circumcenter_plus, circumcenter_minus;
    Vec3 x1, x2;
    double area_plus = 0.0, area_minus = 0.0;
};

/// Circumcenter of triangle (a, b, c), computed in the triangle's plane.
inline Vec3 circumcenter(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const Vec3 u = b - a;
    const Vec3 v = c - a;
    const Vec3 w = u.cross(v);
    return a + (u.squaredNorm() * v.cross(w) + v.squaredNorm() * w.cross(u)) / (2.0 * w.squaredNorm());
}

/// Frame of the edge x1 -> x2 shared by the triangles with apexes p_plus and p_minus.
/// traversal_plus is +1 when T_{E+} is oriented (x1, x2, p_plus), -1 when it is
/// (x2, x1, p_plus); T_{E-} always has the opposite traversal.
inline EdgeFrame edge_frame_from_points(const Vec3& x1, const Vec3& x2, const Vec3& p_plus, const Vec3& p_minus,
                                        int traversal_plus = 1)
{
    EdgeFrame f;
    f.x1 = x1;
    f.x2 = x2;
    const Vec3 d = x2 - x1;
    f.length = d.norm();
    f.t = d / f.length;
    f.midpoint = 0.5 * (x1 + x2);
    const double sp = traversal_plus;
    const double sm = -traversal_plus;
    const Vec3 cp = sp * d.cross(p_plus - x1);
    const Vec3 cm = sm * d.cross(p_minus - x1);
    if (!(cp.norm() > 0.0) || !(cm.norm() > 0.0))
        throw Error(ErrorCode::DegenerateTriangle, "edge frame of a zero-area triangle");
    f.n_plus = cp.normalized();
    f.n_minus = cm.normalized();
    f.area_plus = 0.5 * cp.norm();
    f.area_minus = 0.5 * cm.norm();
    f.mu_plus = sp * f.t.cross(f.n_plus);
    f.mu_minus = sm * f.t.cross(f.n_minus);
    f.circumcenter_plus = circumcenter(x1, x2, p_plus);
    f.circumcenter_minus = circumcenter(x1, x2, p_minus);
    f.h = f.mu_plus.dot(f.midpoint - f.circumcenter_plus) + f.mu_minus.dot(f.midpoint - f.circumcenter_minus);
    return f;
}

/// Logs a warning when h_E <= 0 unless quiet is set.
inline EdgeFrame edge_frame(const TriMesh& mesh, Index edge_id, bool quiet = false)
{
    const EdgeTopology& et = mesh.edge(edge_id);
    const EdgeFrame f = edge_frame_from_points(mesh.vertex(et.vertex[0]), mesh.vertex(et.vertex[1]),
                                               mesh.vertex(et.opposite[0]), mesh.vertex(et.opposite[1]),
                                               et.traversal[0]);
    if (f.h <= 0.0 && !quiet) warn("edge " + std::to_string(edge_id) + " has nonpositive intrinsic height");
    return f;
}

inline std::vector<EdgeFrame> edge_frames(const TriMesh& mesh)
{
    std::vector<EdgeFrame> frames(mesh.num_edges());
    for (Index e = 0; e < mesh.num_edges(); ++e) frames[e] = edge_frame(mesh, e);
    return frames;
}

/// Local edge descriptors of triangle t for a field with the given coefficients
/// (two per edge, ordered c_{E,1}, c_{E,2}).
inline std::array<kernel::LocalEdge, 3> local_edges(const TriMesh& mesh, Index t, const Eigen::VectorXd* coefficients)
{
    std::array<kernel::LocalEdge, 3> le;
    const Triangle& tri = mesh.triangle(t);
    const auto& refs = mesh.topology().triangle_edges[t];
    for (int i = 0; i < 3; ++i) {
        const EdgeTopology& et = mesh.edge(refs[i].edge);
        le[i].orientation = (et.vertex[0] == tri[i]) ? 1.0 : -1.0;
        le[i].side = refs[i].side == 0 ? 1.0 : -1.0;
        if (coefficients) {
            le[i].c1 = (*coefficients)[2 * refs[i].edge];
            le[i].c2 = (*coefficients)[2 * refs[i].edge + 1];
        }
    }
    return le;
}

} // namespace ntgv
