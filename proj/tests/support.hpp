#pragma once

// Small closed meshes and random states shared by the test programs.

#include "ntgv/ntgv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace ntgv::test {

inline Eigen::Matrix3Xd to_matrix(const std::vector<Vec3>& v)
{
    Eigen::Matrix3Xd m(3, static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = v[i];
    return m;
}

/// Orients every face of a star-shaped (about the vertex centroid) mesh outward.
inline TriMesh outward(const std::vector<Vec3>& v, std::vector<Triangle> f)
{
    Vec3 c = Vec3::Zero();
    for (const Vec3& p : v) c += p;
    c /= static_cast<double>(v.size());
    for (Triangle& t : f) {
        const Vec3 n = (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]);
        if (n.dot((v[t[0]] + v[t[1]] + v[t[2]]) / 3.0 - c) < 0.0) std::swap(t[1], t[2]);
    }
    return build_topology(to_matrix(v), std::move(f));
}

inline TriMesh tetrahedron()
{
    return outward({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

inline TriMesh octahedron()
{
    return outward({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}},
                   {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}});
}

inline TriMesh icosahedron()
{
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v{{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                        {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
    std::vector<Triangle> f{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                            {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                            {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    return outward(v, f);
}

/// Axis-aligned cube [0, s]^3, two triangles per face.
inline TriMesh cube(double s = 1.0)
{
    std::vector<Vec3> v;
    for (int i = 0; i < 8; ++i) v.emplace_back(s * (i & 1), s * ((i >> 1) & 1), s * ((i >> 2) & 1));
    const std::vector<std::array<int, 4>> quads{{0, 1, 3, 2}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                                {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 3, 7, 5}};
    std::vector<Triangle> f;
    for (const auto& q : quads) {
        f.push_back({q[0], q[1], q[2]});
        f.push_back({q[0], q[2], q[3]});
    }
    return outward(v, f);
}

struct SphereOptions
{
    int rings = 6;
    int segments = 8;
    Vec3 radii = Vec3::Ones();
    double jitter = 0.0;   ///< random angular offsets as a fraction of the grid spacing
    double bumps = 0.0;    ///< amplitude of a radial modulation (non-convex for large values)
    std::uint64_t seed = 0;
};

/// Latitude/longitude sphere, optionally ellipsoidal, jittered and bumpy; oriented outward
/// by construction.
inline TriMesh uv_sphere(const SphereOptions& o = {})
{
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto point = [&](double theta, double phi) {
        const double r = 1.0 + o.bumps * std::sin(3.0 * phi) * std::sin(2.0 * theta);
        return Vec3(o.radii[0] * r * std::sin(theta) * std::cos(phi), o.radii[1] * r * std::sin(theta) * std::sin(phi),
                    o.radii[2] * r * std::cos(theta));
    };
    const double dt = std::numbers::pi / o.rings;
    const double dp = 2.0 * std::numbers::pi / o.segments;
    std::vector<Vec3> v{point(0.0, 0.0)};
    for (int i = 1; i < o.rings; ++i)
        for (int j = 0; j < o.segments; ++j)
            v.push_back(point(dt * (i + 0.3 * o.jitter * u(rng)), dp * (j + 0.3 * o.jitter * u(rng))));
    v.push_back(point(std::numbers::pi, 0.0));
    const Index south = static_cast<Index>(v.size() - 1);
    auto ring = [&](int i, int j) { return static_cast<Index>(1 + (i - 1) * o.segments + (j % o.segments)); };

    std::vector<Triangle> f;
    for (int j = 0; j < o.segments; ++j) f.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i + 1 < o.rings; ++i)
        for (int j = 0; j < o.segments; ++j) {
            const Index a = ring(i, j), b = ring(i + 1, j), c = ring(i + 1, j + 1), d = ring(i, j + 1);
            f.push_back({a, b, c});
            f.push_back({a, c, d});
        }
    for (int j = 0; j < o.segments; ++j) f.push_back({south, ring(o.rings - 1, j + 1), ring(o.rings - 1, j)});
    return build_topology(to_matrix(v), std::move(f));
}

/// Relabels vertices by a random permutation and rotates the mesh rigidly.
inline TriMesh shuffled(const TriMesh& mesh, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Index> perm(static_cast<std::size_t>(mesh.num_vertices()));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::normal_distribution<double> n(0.0, 1.0);
    const Mat3 rot = Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
    Eigen::Matrix3Xd v(3, mesh.num_vertices());
    for (Index i = 0; i < mesh.num_vertices(); ++i) v.col(perm[i]) = rot * mesh.vertex(i);
    std::vector<Triangle> f = mesh.topology().triangles;
    for (Triangle& t : f)
        for (Index& i : t) i = perm[i];
    return build_topology(std::move(v), std::move(f));
}

/// Random closed genus-0 mesh with at most ~500 triangles.
inline TriMesh random_closed_mesh(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> rings(3, 10), segments(3, 14);
    std::uniform_real_distribution<double> radius(0.5, 2.0), unit(0.0, 1.0);
    SphereOptions o;
    o.rings = rings(rng);
    o.segments = segments(rng);
    o.radii = Vec3(radius(rng), radius(rng), radius(rng));
    o.jitter = unit(rng);
    o.bumps = 0.25 * unit(rng);
    o.seed = seed;
    return shuffled(uv_sphere(o), seed + 1);
}

/// Two triangles (x1, x2, p_plus) and (x2, x1, p_minus) as a frame; the rest of the mesh
/// is irrelevant to frame-local identities.
inline EdgeFrame random_fold(std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    auto rv = [&] { return Vec3(n(rng), n(rng), n(rng)); };
    for (;;) {
        const Vec3 x1 = rv(), x2 = rv(), pp = rv(), pm = rv();
        const Vec3 d = x2 - x1;
        const double ap = d.cross(pp - x1).norm(), am = d.cross(pm - x1).norm();
        if (ap < 0.1 * d.squaredNorm() || am < 0.1 * d.squaredNorm()) continue;
        const Vec3 np = d.cross(pp - x1).normalized();
        const Vec3 nm = -d.cross(pm - x1).normalized();
        if (np.dot(nm) < -0.99) continue;
        return edge_frame_from_points(x1, x2, pp, pm);
    }
}

inline Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
        const Vec3 v(n(rng), n(rng), n(rng));
        if (v.norm() > 1e-3) return v.normalized();
    }
}

/// Random vector tangent at n.
inline Vec3 random_tangent(std::mt19937_64& rng, const Vec3& n, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    const Vec3 v(g(rng), g(rng), g(rng));
    return v - v.dot(n) * n;
}

/// Random tensor with every axis tangent at n.
inline Tensor3 random_tangent_tensor(std::mt19937_64& rng, const Vec3& n, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    Tensor3 raw;
    for (double& x : raw.data) x = g(rng);
    const Mat3 p = Mat3::Identity() - n * n.transpose();
    Tensor3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        for (int c = 0; c < 3; ++c) s += p(i, a) * p(j, b) * p(k, c) * raw(a, b, c);
                out(i, j, k) = s;
            }
    return out;
}

inline Eigen::VectorXd random_coefficients(std::mt19937_64& rng, const TriMesh& mesh, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    Eigen::VectorXd c(2 * mesh.num_edges());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = g(rng);
    return c;
}

/// State with random W, splits and multipliers, all tangent to the mesh normals.
inline AdmmState random_state(std::mt19937_64& rng, const TriMesh& mesh, double scale = 0.1)
{
    AdmmState s = AdmmState::initial(mesh);
    s.w = TrtField(mesh, random_coefficients(rng, mesh, scale));
    std::normal_distribution<double> g(0.0, scale);
    const std::vector<Vec3> n = normals(mesh);
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        s.d0[e] = g(rng);
        s.lambda0[e] = g(rng);
        const Vec3& np = n[mesh.edge(e).triangle[0]];
        for (int i = 0; i < 2; ++i) {
            s.d2[e][i] = random_tangent(rng, np, scale);
            s.lambda2[e][i] = random_tangent(rng, np, scale);
        }
    }
    for (Index t = 0; t < mesh.num_triangles(); ++t) {
        s.D1[t] = random_tangent_tensor(rng, n[t], scale);
        s.Lambda1[t] = random_tangent_tensor(rng, n[t], scale);
    }
    return s;
}

inline double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace ntgv::test
