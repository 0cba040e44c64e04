#pragma once

// Synthetic closed test shapes: grids of hemispheres or half-cylinders standing on a
// rectangular slab. Each grid cell is a square of side cell_size; rows vary the radius,
// columns vary the mesh resolution (target edge length).

#include "ntgv/errors.hpp"
#include "ntgv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace ntgv::io {

struct GridOptions
{
    double cell_size = 1.0;
    double base_depth = 0.1;            ///< slab thickness below the top plate
    double cylinder_length_ratio = 0.5; ///< end-cap margin relative to the side margin
};

namespace detail {

struct RingEntry
{
    Index vertex;
    double param; ///< position along the loop in [0, 1)
};
using Ring = std::vector<RingEntry>;

/// Four-sided closed curve: side i in [0, 4) at local parameter u in [0, 1].
using LoopCurve = std::function<Vec3(int side, double u)>;

struct Builder
{
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;

    Index add(const Vec3& p)
    {
        vertices.push_back(p);
        return static_cast<Index>(vertices.size() - 1);
    }
    void triangle(Index a, Index b, Index c) { triangles.push_back({a, b, c}); }
};

inline double frac(double x) { return x - std::floor(x); }

/// Triangulates the band between two counter-clockwise loops (seen from outside),
/// `inner` nested inside `outer`, merging by loop parameter.
inline void zipper(const Ring& inner, const Ring& outer, Builder& out)
{
    const int na = static_cast<int>(inner.size());
    const int nb = static_cast<int>(outer.size());
    if (na == 1) {
        for (int j = 0; j < nb; ++j) out.triangle(inner[0].vertex, outer[j].vertex, outer[(j + 1) % nb].vertex);
        return;
    }
    const double s0 = inner[0].param;
    int j0 = 0;
    double best = 2.0;
    for (int j = 0; j < nb; ++j) {
        const double d = std::abs(frac(outer[j].param - s0 + 0.5) - 0.5);
        if (d < best) {
            best = d;
            j0 = j;
        }
    }
    const double base = frac(outer[j0].param - s0 + 0.5) - 0.5;
    auto ua = [&](int k) { return k == na ? 1.0 : frac(inner[k].param - s0); };
    auto ub = [&](int k) { return k == nb ? base + 1.0 : base + frac(outer[(j0 + k) % nb].param - outer[j0].param); };

    int ia = 0, ib = 0;
    while (ia < na || ib < nb) {
        const bool advance_inner = ia < na && (ib == nb || ua(ia + 1) <= ub(ib + 1));
        const Index a = inner[ia % na].vertex;
        const Index b = outer[(j0 + ib) % nb].vertex;
        if (advance_inner) {
            out.triangle(a, b, inner[(ia + 1) % na].vertex);
            ++ia;
        } else {
            out.triangle(a, b, outer[(j0 + ib + 1) % nb].vertex);
            ++ib;
        }
    }
}

inline Ring sample_loop(const LoopCurve& curve, const std::array<int, 4>& counts, Builder& out)
{
    Ring ring;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < counts[i]; ++k) {
            const double u = static_cast<double>(k) / counts[i];
            ring.push_back({out.add(curve(i, u)), (i + u) / 4.0});
        }
    return ring;
}

/// Axis-aligned rectangle around `center`, corners counter-clockwise from (+x, -y).
inline Vec3 rectangle_point(const Vec3& center, double wx, double wy, int side, double u)
{
    static constexpr int sx[5] = {1, 1, -1, -1, 1};
    static constexpr int sy[5] = {-1, 1, 1, -1, -1};
    const Vec3 a(sx[side] * wx, sy[side] * wy, 0.0);
    const Vec3 b(sx[side + 1] * wx, sy[side + 1] * wy, 0.0);
    return center + (1.0 - u) * a + u * b;
}

inline Vec3 circle_point(const Vec3& center, double radius, int side, double u)
{
    const double psi = -std::numbers::pi / 4.0 + std::numbers::pi / 2.0 * (side + u);
    return center + Vec3(radius * std::cos(psi), radius * std::sin(psi), 0.0);
}

inline int at_least(int lo, double x) { return std::max(lo, static_cast<int>(std::lround(x))); }

/// Shared lattice of plate-boundary vertices along the grid lines of the top plate.
class Lattice
{
public:
    Lattice(Builder& out, double spacing) : m_out(out), m_spacing(spacing) {}

    Index vertex(int ix, int iy)
    {
        const auto [it, inserted] = m_index.try_emplace({ix, iy}, Index{-1});
        if (inserted) it->second = m_out.add(Vec3(ix * m_spacing, iy * m_spacing, 0.0));
        return it->second;
    }

private:
    Builder& m_out;
    double m_spacing;
    std::map<std::pair<int, int>, Index> m_index;
};

/// Boundary loop of cell (row, col) with m lattice segments per side.
inline Ring cell_boundary(Lattice& lattice, int row, int col, int m)
{
    static constexpr int cx[5] = {1, 1, 0, 0, 1};
    static constexpr int cy[5] = {0, 1, 1, 0, 0};
    Ring ring;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < m; ++k) {
            const int ix = col * m + cx[i] * m + (cx[i + 1] - cx[i]) * k;
            const int iy = row * m + cy[i] * m + (cy[i + 1] - cy[i]) * k;
            ring.push_back({lattice.vertex(ix, iy), (i + static_cast<double>(k) / m) / 4.0});
        }
    return ring;
}

/// Flat rings blending `inner` (side counts `inner_counts`) into the cell boundary.
inline void fill_plate(const LoopCurve& inner, const Ring& inner_ring, const std::array<int, 4>& inner_counts,
                       const Ring& boundary, const Vec3& center, double half, int m, double gap, double h,
                       Builder& out)
{
    const int layers = at_least(1, gap / h);
    Ring prev = inner_ring;
    for (int j = 1; j < layers; ++j) {
        const double lambda = static_cast<double>(j) / layers;
        std::array<int, 4> counts{};
        for (int i = 0; i < 4; ++i) counts[i] = at_least(1, (1.0 - lambda) * inner_counts[i] + lambda * m);
        const LoopCurve blend = [&](int side, double u) {
            return Vec3((1.0 - lambda) * inner(side, u) + lambda * rectangle_point(center, half, half, side, u));
        };
        Ring ring = sample_loop(blend, counts, out);
        zipper(prev, ring, out);
        prev = std::move(ring);
    }
    zipper(prev, boundary, out);
}

/// Side walls and bottom of the slab under an nx-by-ny lattice of the given spacing.
inline void close_slab(Lattice& lattice, int nx, int ny, double spacing, double depth, Builder& out)
{
    std::vector<std::pair<int, int>> perimeter;
    for (int i = 0; i < nx; ++i) perimeter.emplace_back(i, 0);
    for (int i = 0; i < ny; ++i) perimeter.emplace_back(nx, i);
    for (int i = nx; i > 0; --i) perimeter.emplace_back(i, ny);
    for (int i = ny; i > 0; --i) perimeter.emplace_back(0, i);

    std::vector<Index> bottom(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int iy = 0; iy <= ny; ++iy)
        for (int ix = 0; ix <= nx; ++ix) bottom[iy * (nx + 1) + ix] = out.add(Vec3(ix * spacing, iy * spacing, -depth));
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const Index a = bottom[iy * (nx + 1) + ix];
            const Index b = bottom[iy * (nx + 1) + ix + 1];
            const Index c = bottom[(iy + 1) * (nx + 1) + ix + 1];
            const Index d = bottom[(iy + 1) * (nx + 1) + ix];
            out.triangle(a, d, c);
            out.triangle(a, c, b);
        }

    const int layers = at_least(1, depth / spacing);
    const std::size_t np = perimeter.size();
    std::vector<std::vector<Index>> wall(static_cast<std::size_t>(layers + 1), std::vector<Index>(np));
    for (std::size_t p = 0; p < np; ++p) {
        const auto [ix, iy] = perimeter[p];
        wall[0][p] = lattice.vertex(ix, iy);
        for (int l = 1; l < layers; ++l)
            wall[l][p] = out.add(Vec3(ix * spacing, iy * spacing, -depth * l / layers));
        wall[layers][p] = bottom[iy * (nx + 1) + ix];
    }
    for (int l = 0; l < layers; ++l)
        for (std::size_t p = 0; p < np; ++p) {
            const std::size_t q = (p + 1) % np;
            out.triangle(wall[l][q], wall[l][p], wall[l + 1][p]);
            out.triangle(wall[l][q], wall[l + 1][p], wall[l + 1][q]);
        }
}

inline void hemisphere_cell(Lattice& lattice, int row, int col, int m, double cell, double radius, double h,
                            Builder& out)
{
    const double half = cell / 2.0;
    const Vec3 center((col + 0.5) * cell, (row + 0.5) * cell, 0.0);
    const int rings = at_least(2, std::numbers::pi / 2.0 * radius / h);

    Ring prev{{out.add(center + Vec3(0.0, 0.0, radius)), 0.0}};
    std::array<int, 4> counts{};
    for (int k = 1; k <= rings; ++k) {
        const double phi = std::numbers::pi / 2.0 * k / rings;
        const double rho = radius * std::sin(phi);
        const double z = k == rings ? 0.0 : radius * std::cos(phi);
        const int per_side = at_least(2, std::numbers::pi / 2.0 * rho / h);
        counts.fill(per_side);
        const LoopCurve curve = [&](int side, double u) {
            return Vec3(circle_point(center, rho, side, u) + Vec3(0.0, 0.0, z));
        };
        Ring ring = sample_loop(curve, counts, out);
        zipper(prev, ring, out);
        prev = std::move(ring);
    }
    const LoopCurve equator = [&](int side, double u) { return circle_point(center, radius, side, u); };
    fill_plate(equator, prev, counts, cell_boundary(lattice, row, col, m), center, half, m, half - radius, h, out);
}

inline void halfcylinder_cell(Lattice& lattice, int row, int col, int m, double cell, double radius, double h,
                              double length_ratio, Builder& out)
{
    const double half = cell / 2.0;
    const Vec3 center((col + 0.5) * cell, (row + 0.5) * cell, 0.0);
    const double wy = half - length_ratio * (half - radius);
    const int along = at_least(2, 2.0 * wy / h);
    const int rings = at_least(2, std::numbers::pi / 2.0 * radius / h);

    // Top ridge: a degenerate loop that runs up one side of the ridge line and back.
    std::vector<Index> ridge(static_cast<std::size_t>(along + 1));
    for (int k = 0; k <= along; ++k) ridge[k] = out.add(center + Vec3(0.0, -wy + 2.0 * wy * k / along, radius));
    Ring prev;
    for (int k = 1; k < along; ++k) prev.push_back({ridge[k], 0.25 * k / along});
    prev.push_back({ridge[along], 0.375});
    for (int k = 1; k < along; ++k) prev.push_back({ridge[along - k], 0.5 + 0.25 * k / along});
    prev.push_back({ridge[0], 0.875});

    std::array<int, 4> counts{};
    LoopCurve curve;
    for (int k = rings - 1; k >= 0; --k) {
        const double theta = std::numbers::pi / 2.0 * k / rings;
        const double wx = radius * std::cos(theta);
        const double z = k == 0 ? 0.0 : radius * std::sin(theta);
        const int across = at_least(1, 2.0 * wx / h);
        counts = {along, across, along, across};
        curve = [=](int side, double u) {
            return Vec3(rectangle_point(center, wx, wy, side, u) + Vec3(0.0, 0.0, z));
        };
        Ring ring = sample_loop(curve, counts, out);
        zipper(prev, ring, out);
        prev = std::move(ring);
    }
    const double gap = std::min(half - radius, half - wy);
    fill_plate(curve, prev, counts, cell_boundary(lattice, row, col, m), center, half, m, gap, h, out);
}

inline std::vector<double> expand(const std::vector<double>& values, int n, double lo, double hi)
{
    if (values.empty()) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
        return v;
    }
    if (values.size() == 1) return std::vector<double>(static_cast<std::size_t>(n), values[0]);
    if (static_cast<int>(values.size()) != n)
        throw Error(ErrorCode::SizeMismatch, "expected 1 or " + std::to_string(n) + " values, got " +
                                                 std::to_string(values.size()));
    return values;
}

enum class Shape { Hemisphere, HalfCylinder };

inline TriMesh generate_grid(Shape shape, int rows, int cols, const std::vector<double>& radii,
                             const std::vector<double>& resolutions, const GridOptions& opt)
{
    if (rows < 1 || cols < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one row and column");
    if (!(opt.cell_size > 0.0) || !(opt.base_depth > 0.0))
        throw Error(ErrorCode::InvalidArgument, "cell size and base depth must be positive");
    const double cell = opt.cell_size;
    const std::vector<double> r = expand(radii, rows, 0.25 * cell, 0.38 * cell);
    const std::vector<double> h = expand(resolutions, cols, 0.04 * cell, 0.08 * cell);
    for (double x : r)
        if (!(x > 0.0) || x > 0.45 * cell)
            throw Error(ErrorCode::InvalidArgument, "radius must lie in (0, 0.45 * cell_size]");
    for (double x : h)
        if (!(x > 0.0) || x > 0.5 * cell) throw Error(ErrorCode::InvalidArgument, "resolution must lie in (0, cell_size / 2]");

    const double coarsest = *std::max_element(h.begin(), h.end());
    const int m = at_least(4, cell / coarsest);
    const double spacing = cell / m;

    Builder out;
    Lattice lattice(out, spacing);
    for (int row = 0; row < rows; ++row)
        for (int col = 0; col < cols; ++col) {
            if (shape == Shape::Hemisphere) hemisphere_cell(lattice, row, col, m, cell, r[row], h[col], out);
            else halfcylinder_cell(lattice, row, col, m, cell, r[row], h[col], opt.cylinder_length_ratio, out);
        }
    close_slab(lattice, cols * m, rows * m, spacing, opt.base_depth, out);

    Eigen::Matrix3Xd v(3, static_cast<Eigen::Index>(out.vertices.size()));
    for (std::size_t i = 0; i < out.vertices.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = out.vertices[i];
    return build_topology(std::move(v), std::move(out.triangles));
}

} // namespace detail

/// Hemispheres of radius radii[row] meshed at target edge length resolutions[col]. A single
/// value is broadcast; an empty list selects defaults spread over [0.25, 0.38] (radii) and
/// [0.04, 0.08] (resolutions) times the cell size.
inline TriMesh generate_hemisphere_grid(int rows, int cols, const std::vector<double>& radii = {},
                                        const std::vector<double>& resolutions = {}, const GridOptions& opt = {})
{
    return detail::generate_grid(detail::Shape::Hemisphere, rows, cols, radii, resolutions, opt);
}

/// Half-cylinders with axis along y, flat end caps, otherwise as generate_hemisphere_grid.
inline TriMesh generate_halfcylinder_grid(int rows, int cols, const std::vector<double>& radii = {},
                                          const std::vector<double>& resolutions = {}, const GridOptions& opt = {})
{
    return detail::generate_grid(detail::Shape::HalfCylinder, rows, cols, radii, resolutions, opt);
}

} // namespace ntgv::io
