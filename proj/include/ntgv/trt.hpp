#pragma once

// Tangential Raviart-Thomas space: matrix-valued, piecewise linear fields with two
// degrees of freedom per edge and intrinsic co-normal continuity.

#include "ntgv/errors.hpp"
#include "ntgv/kernels.hpp"
#include "ntgv/mesh.hpp"
#include "ntgv/sphere.hpp"

#include <array>
#include <memory>

namespace ntgv {

/// Coefficient vector of a tangential RT field: entries 2E and 2E+1 multiply the
/// basis functions of edge E. The field is bound to a mesh topology; any vertex
/// positions sharing that topology reuse the coefficients with the deformed basis.
class TrtField
{
public:
    TrtField() = default;
    explicit TrtField(const TriMesh& mesh)
        : m_topology(mesh.topology_ptr())
        , m_coefficients(Eigen::VectorXd::Zero(2 * mesh.num_edges()))
    {}
    TrtField(const TriMesh& mesh, Eigen::VectorXd coefficients)
        : m_topology(mesh.topology_ptr())
        , m_coefficients(std::move(coefficients))
    {
        if (m_coefficients.size() != 2 * mesh.num_edges())
            throw Error(ErrorCode::SizeMismatch, "expected two coefficients per edge");
    }

    const Eigen::VectorXd& coefficients() const { return m_coefficients; }
    Eigen::VectorXd& coefficients() { return m_coefficients; }
    double c1(Index e) const { return m_coefficients[2 * e]; }
    double c2(Index e) const { return m_coefficients[2 * e + 1]; }

    void check_bound_to(const TriMesh& mesh) const
    {
        if (m_topology != mesh.topology_ptr())
            throw Error(ErrorCode::SizeMismatch, "field is bound to a different mesh topology");
    }

private:
    std::shared_ptr<const Topology> m_topology;
    Eigen::VectorXd m_coefficients;
};

namespace detail {

inline void check_inside(const TriMesh& mesh, Index t, const Vec3& x)
{
    const Triangle& tri = mesh.triangle(t);
    const Vec3 a = mesh.vertex(tri[0]);
    const Vec3 b = mesh.vertex(tri[1]);
    const Vec3 c = mesh.vertex(tri[2]);
    const Vec3 n = (b - a).cross(c - a);
    const double area2 = n.squaredNorm();
    const double diam = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    const double tol = 1e-9;
    const double plane = std::abs(n.dot(x - a)) / std::sqrt(area2);
    const double l0 = n.dot((c - b).cross(x - b)) / area2;
    const double l1 = n.dot((a - c).cross(x - c)) / area2;
    const double l2 = 1.0 - l0 - l1;
    if (plane > tol * diam || l0 < -tol || l1 < -tol || l2 < -tol)
        throw Error(ErrorCode::PointOutsideTriangle, "point is not inside triangle " + std::to_string(t));
}

} // namespace detail

/// Per-triangle geometry of W (corners, normal, co-normals and coefficient vectors).
inline kernel::TriangleGeometry<double> field_geometry(const TriMesh& mesh, const Eigen::VectorXd* coefficients,
                                                       Index t)
{
    const Triangle& tri = mesh.triangle(t);
    return kernel::triangle_geometry<double>(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]),
                                             local_edges(mesh, t, coefficients));
}

/// Value of basis function Phi_{E,which} (which is 1 or 2) at x in triangle t.
inline Mat3 eval_basis(const TriMesh& mesh, Index edge_id, int which, const Vec3& x, Index t)
{
    if (which != 1 && which != 2) throw Error(ErrorCode::InvalidArgument, "basis index must be 1 or 2");
    detail::check_inside(mesh, t, x);
    const EdgeTopology& et = mesh.edge(edge_id);
    int side = -1;
    if (et.triangle[0] == t) side = 0;
    else if (et.triangle[1] == t) side = 1;
    if (side < 0) return Mat3::Zero();

    const Vec3 p = mesh.vertex(et.opposite[side]);
    const double area = triangle_area(mesh, t);
    const Vec3 n = triangle_normal(mesh, t);
    const Vec3 tangent = (mesh.vertex(et.vertex[1]) - mesh.vertex(et.vertex[0])).normalized();
    Vec3 direction;
    if (which == 1) direction = et.traversal[side] * tangent.cross(n);
    else direction = (side == 0 ? 1.0 : -1.0) * tangent;
    return direction * (x - p).transpose() / (2.0 * area);
}

/// Value of the field at x in triangle t.
inline Mat3 eval_field(const TriMesh& mesh, const TrtField& w, Index t, const Vec3& x)
{
    w.check_bound_to(mesh);
    detail::check_inside(mesh, t, x);
    const auto tg = field_geometry(mesh, &w.coefficients(), t);
    Mat3 m = Mat3::Zero();
    for (int i = 0; i < 3; ++i) m += tg.a[i] * (x - tg.p[(i + 2) % 3]).transpose();
    return m / (2.0 * tg.area);
}

/// The two degrees of freedom of edge E: the integrals over E of mu+^T W mu+ and
/// t^T W mu+, taken from the plus side. Both integrands are constant along E.
inline std::array<double, 2> dof_values(const TriMesh& mesh, const TrtField& w, Index edge_id)
{
    const EdgeFrame f = edge_frame(mesh, edge_id, true);
    const Mat3 wp = eval_field(mesh, w, mesh.edge(edge_id).triangle[0], f.midpoint);
    return {f.length * f.mu_plus.dot(wp * f.mu_plus), f.length * f.t.dot(wp * f.mu_plus)};
}

/// Piecewise Jacobian of W on triangle t: g (x) (I - n n^T), constant per triangle.
inline Tensor3 jacobian(const TriMesh& mesh, const TrtField& w, Index t)
{
    w.check_bound_to(mesh);
    const auto tg = field_geometry(mesh, &w.coefficients(), t);
    return Tensor3::outer(tg.g, Mat3::Identity() - tg.n * tg.n.transpose());
}

/// Endpoint values of the intrinsic jump P_{n- -> n+}(W- t) - W+ t, tangent to n+.
struct EdgeJump
{
    std::array<Vec3, 2> at{Vec3::Zero(), Vec3::Zero()}; ///< at X_{E,1} and X_{E,2}
};

inline EdgeJump jump(const TriMesh& mesh, const TrtField& w, Index edge_id)
{
    w.check_bound_to(mesh);
    const EdgeTopology& et = mesh.edge(edge_id);
    const auto plus = field_geometry(mesh, &w.coefficients(), et.triangle[0]);
    const auto minus = field_geometry(mesh, &w.coefficients(), et.triangle[1]);
    const Vec3 x1 = mesh.vertex(et.vertex[0]);
    const Vec3 x2 = mesh.vertex(et.vertex[1]);
    const Vec3 t = (x2 - x1).normalized();
    EdgeJump j;
    const std::array<Vec3, 2> xs{x1, x2};
    for (int i = 0; i < 2; ++i) {
        const Vec3 wm = kernel::apply_field<double>(minus, xs[i], t);
        const Vec3 wp = kernel::apply_field<double>(plus, xs[i], t);
        j.at[i] = parallel_transport(minus.n, plus.n, wm) - wp;
    }
    return j;
}

/// Coefficients representing the same field after reorienting edges. Exchanging the
/// E+/E- roles or negating t_E alone flips the sign of c2; doing both leaves it.
inline Eigen::VectorXd coefficients_after_reorientation(const Eigen::VectorXd& c, const std::vector<EdgeFlip>& flips)
{
    Eigen::VectorXd out = c;
    for (std::size_t e = 0; e < flips.size(); ++e)
        if (flips[e].swap_sides != flips[e].reverse_tangent) out[2 * e + 1] = -out[2 * e + 1];
    return out;
}

} // namespace ntgv
