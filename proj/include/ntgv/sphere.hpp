#pragma once

// Geodesic calculus on the unit sphere.

#include "ntgv/errors.hpp"
#include "ntgv/mesh.hpp"
#include "ntgv/types.hpp"

#include <algorithm>
#include <cmath>

namespace ntgv {

inline constexpr double kAntipodalTolerance = 1e-9;

inline void check_not_antipodal(const Vec3& n1, const Vec3& n2)
{
    if (n1.dot(n2) < -1.0 + kAntipodalTolerance)
        throw Error(ErrorCode::AntipodalPoints, "unit vectors are (nearly) antipodal");
}

/// Unit vector renormalized on construction.
inline Vec3 unit_vector(const Vec3& v)
{
    const double n = v.norm();
    if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot normalize a zero vector");
    return v / n;
}

inline double geodesic_distance(const Vec3& n1, const Vec3& n2)
{
    return std::atan2(n1.cross(n2).norm(), n1.dot(n2));
}

/// Tangent vector at n1 pointing to n2 with length equal to their geodesic distance.
inline Vec3 log_map(const Vec3& n1, const Vec3& n2)
{
    check_not_antipodal(n1, n2);
    const double c = n1.dot(n2);
    const Vec3 dir = n2 - c * n1;
    const double s = dir.norm();
    if (s == 0.0) return Vec3::Zero();
    return std::atan2(s, c) * dir / s;
}

/// log(n_plus, n_minus) expressed through the co-normal of the plus triangle.
inline Vec3 log_via_conormal(const EdgeFrame& f)
{
    check_not_antipodal(f.n_plus, f.n_minus);
    const double s = f.n_minus.dot(f.mu_plus);
    const double sign = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
    return sign * geodesic_distance(f.n_plus, f.n_minus) * f.mu_plus;
}

/// Matrix M of the transport from the tangent plane at n1 to that at n2.
inline Mat3 transport_matrix(const Vec3& n1, const Vec3& n2)
{
    check_not_antipodal(n1, n2);
    return Mat3::Identity() - (n2 + n1) * n2.transpose() / (1.0 + n2.dot(n1));
}

inline Vec3 parallel_transport(const Vec3& n1, const Vec3& n2, const Vec3& xi)
{
    return transport_matrix(n1, n2) * xi;
}

/// Applies the transport matrix to every axis of an order-3 tensor.
inline Tensor3 transport_tensor(const Tensor3& d, const Vec3& n_old, const Vec3& n_new)
{
    const Mat3 m = transport_matrix(n_old, n_new);
    // Contract one axis at a time: 3 * 81 multiplies instead of 729.
    Tensor3 a, b, c;
    for (int i = 0; i < 3; ++i)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z) {
                double s = 0.0;
                for (int x = 0; x < 3; ++x) s += m(i, x) * d(x, y, z);
                a(i, y, z) = s;
            }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int z = 0; z < 3; ++z) {
                double s = 0.0;
                for (int y = 0; y < 3; ++y) s += m(j, y) * a(i, y, z);
                b(i, j, z) = s;
            }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int z = 0; z < 3; ++z) s += m(k, z) * b(i, j, z);
                c(i, j, k) = s;
            }
    return c;
}

/// Residuals of the co-normal transport identities on an edge frame.
struct ConormalIdentityResiduals
{
    double mu_minus_to_plus = 0.0; ///< |P_{n- -> n+}(mu-) + mu+|
    double mu_plus_to_minus = 0.0; ///< |P_{n+ -> n-}(mu+) + mu-|
    double tangent_to_plus = 0.0;  ///< |P_{n- -> n+}(t) - t|
    double tangent_to_minus = 0.0; ///< |P_{n+ -> n-}(t) - t|

    double max() const
    {
        return std::max({mu_minus_to_plus, mu_plus_to_minus, tangent_to_plus, tangent_to_minus});
    }
};

inline ConormalIdentityResiduals transport_conormal_identities(const EdgeFrame& f)
{
    ConormalIdentityResiduals r;
    r.mu_minus_to_plus = (parallel_transport(f.n_minus, f.n_plus, f.mu_minus) + f.mu_plus).norm();
    r.mu_plus_to_minus = (parallel_transport(f.n_plus, f.n_minus, f.mu_plus) + f.mu_minus).norm();
    r.tangent_to_plus = (parallel_transport(f.n_minus, f.n_plus, f.t) - f.t).norm();
    r.tangent_to_minus = (parallel_transport(f.n_plus, f.n_minus, f.t) - f.t).norm();
    return r;
}

} // namespace ntgv
