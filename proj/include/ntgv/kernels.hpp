#pragma once

// Scalar-generic geometric primitives. Every function here is templated on the scalar
// type so the same code serves plain double evaluation and Jet-based differentiation.

#include "ntgv/types.hpp"

#include <array>
#include <cmath>

namespace ntgv::kernel {

using std::acos;
using std::atan2;
using std::sqrt;

template <typename S>
S dot(const Vec3T<S>& a, const Vec3T<S>& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename S>
Vec3T<S> cross(const Vec3T<S>& a, const Vec3T<S>& b)
{
    return Vec3T<S>(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

template <typename S>
S norm(const Vec3T<S>& a)
{
    return sqrt(dot(a, a));
}

/// Parallel transport on the unit sphere from n1 to n2 applied to xi (no antipodal check).
template <typename S, typename A, typename B>
Vec3T<S> transport(const Vec3T<A>& n1, const Vec3T<B>& n2, const Vec3T<S>& xi)
{
    const Vec3T<S> n1s = n1.template cast<S>();
    const Vec3T<S> n2s = n2.template cast<S>();
    const S factor = dot(n2s, xi) / (S(1.0) + dot(n2s, n1s));
    return xi - factor * (n2s + n1s);
}

/// Signed angle between adjacent normals, measured along mu_plus.
/// Equals <mu_plus, log(n_plus, n_minus)>.
template <typename S>
S signed_angle(const Vec3T<S>& n_plus, const Vec3T<S>& n_minus, const Vec3T<S>& mu_plus)
{
    return atan2(dot(n_minus, mu_plus), dot(n_plus, n_minus));
}

/// Cotangent of the angle at p in the triangle (p, a, b).
template <typename S>
S cot_at(const Vec3T<S>& p, const Vec3T<S>& a, const Vec3T<S>& b)
{
    const Vec3T<S> u = a - p;
    const Vec3T<S> v = b - p;
    return dot(u, v) / norm(cross(u, v));
}

/// Per-edge description of a triangle's contribution to a tangential RT field.
/// Local edge i joins corner i to corner i+1; its opposite corner is i+2.
struct LocalEdge
{
    double orientation = 1.0; ///< +1 when the global tangent runs from corner i to corner i+1
    double side = 1.0;        ///< +1 when the triangle is the plus side of the edge
    double c1 = 0.0;
    double c2 = 0.0;
};

template <typename S>
struct TriangleGeometry
{
    std::array<Vec3T<S>, 3> p;  ///< corners
    Vec3T<S> n;                 ///< unit normal
    S area;
    std::array<Vec3T<S>, 3> t;  ///< global unit tangent of each local edge
    std::array<Vec3T<S>, 3> mu; ///< outward co-normal of each local edge
    std::array<S, 3> length;
    std::array<Vec3T<S>, 3> a;  ///< field coefficient vectors c1 mu + side c2 t
    Vec3T<S> g;                 ///< sum of a over twice the area
};

template <typename S>
TriangleGeometry<S> triangle_geometry(const Vec3T<S>& p0, const Vec3T<S>& p1, const Vec3T<S>& p2,
                                      const std::array<LocalEdge, 3>& edges)
{
    TriangleGeometry<S> tg;
    tg.p = {p0, p1, p2};
    const Vec3T<S> c = cross(Vec3T<S>(p1 - p0), Vec3T<S>(p2 - p0));
    const S twice = norm(c);
    tg.n = c / twice;
    tg.area = S(0.5) * twice;
    tg.g = Vec3T<S>(S(0.0), S(0.0), S(0.0));
    for (int i = 0; i < 3; ++i) {
        const Vec3T<S> e = tg.p[(i + 1) % 3] - tg.p[i];
        tg.length[i] = norm(e);
        const Vec3T<S> unit = e / tg.length[i];
        tg.mu[i] = cross(unit, tg.n);
        tg.t[i] = S(edges[i].orientation) * unit;
        tg.a[i] = S(edges[i].c1) * tg.mu[i] + S(edges[i].side * edges[i].c2) * tg.t[i];
        tg.g += tg.a[i];
    }
    tg.g /= twice;
    return tg;
}

/// W(x) y for the field restricted to this triangle.
template <typename S>
Vec3T<S> apply_field(const TriangleGeometry<S>& tg, const Vec3T<S>& x, const Vec3T<S>& y)
{
    Vec3T<S> r(S(0.0), S(0.0), S(0.0));
    for (int i = 0; i < 3; ++i) {
        const S w = dot(Vec3T<S>(x - tg.p[(i + 2) % 3]), y);
        r += w * tg.a[i];
    }
    return r / (S(2.0) * tg.area);
}

/// Intrinsic edge distance |E|/2 (cot + cot) from the angles opposite the edge.
template <typename S>
S intrinsic_height(const Vec3T<S>& x1, const Vec3T<S>& x2, const Vec3T<S>& p_plus,
                   const Vec3T<S>& p_minus)
{
    const S len = norm(Vec3T<S>(x2 - x1));
    return S(0.5) * len * (cot_at(p_plus, x1, x2) + cot_at(p_minus, x1, x2));
}

} // namespace ntgv::kernel
