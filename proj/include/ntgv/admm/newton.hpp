#pragma once

// Minimization of the augmented Lagrangian over vertex positions.
//
// The objective splits into per-vertex fidelity terms, per-triangle terms (barrier and
// the D1 block, 9 coordinates) and per-edge terms (d0 and d2 blocks, 12 coordinates of
// the edge endpoints and the two opposite vertices). Element gradients and Hessians come
// from second-order forward differentiation of the same kernels used for values.
//
// The fixed variables D1, Lambda1, d2, lambda2 live in tangent spaces of the mesh at the
// start of the Newton phase and are transported to the trial mesh. Transport preserves
// inner products, so only their pairing with the trial-mesh quantities varies:
//   Xt : D W = < P_{n_old -> n}(Xbar), g >,  Xbar_a = sum_bc X_abc (I - n_old n_old^T)_bc
//   < P(lambda2) - rho2 P(d2), J > = < P_{n+_old -> n+}(lambda2 - rho2 d2), J >.

#include "ntgv/admm/config.hpp"
#include "ntgv/admm/lagrangian.hpp"
#include "ntgv/admm/state.hpp"
#include "ntgv/jet.hpp"
#include "ntgv/kernels.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <limits>
#include <string>

namespace ntgv {

namespace detail {

struct EdgeElement
{
    std::array<Index, 4> vertex{};                 ///< tail, head, p+, p-
    std::array<std::array<int, 3>, 2> slot{};      ///< element slot of each corner of T+, T-
    std::array<std::array<kernel::LocalEdge, 3>, 2> local{};
    int plus_local = 0;                            ///< local index of this edge in T+
    double c1 = 0.0;
    double d0 = 0.0;
    double lambda0 = 0.0;
    std::array<Vec3, 2> q{};                       ///< lambda2 - rho2 d2 at the endpoints
    double d2_constant = 0.0;                      ///< sum_i alpha0 |d2| - <lambda2, d2> + rho2/2 |d2|^2
    Vec3 n_plus_old = Vec3::Zero();
};

struct TriangleElement
{
    Triangle vertex{};
    std::array<kernel::LocalEdge, 3> local{};
    Vec3 qbar = Vec3::Zero();                      ///< contracted Lambda1 - rho1 D1
    double constant = 0.0;                         ///< alpha0 |D1| - Lambda1 : D1 + rho1/2 |D1|^2
    Vec3 n_old = Vec3::Zero();
};

} // namespace detail

/// Augmented Lagrangian as a smooth function of the vertex positions, with W, d and
/// multipliers frozen at the state's values.
class ShapeObjective
{
public:
    ShapeObjective(const AdmmState& s, const SolverConfig& cfg, const Eigen::Matrix3Xd& reference)
        : m_cfg(cfg)
        , m_reference(reference)
        , m_topology(s.mesh.topology_ptr())
    {
        s.check_consistent();
        if (reference.cols() != s.mesh.num_vertices())
            throw Error(ErrorCode::SizeMismatch, "reference vertex count differs from mesh");
        const TriMesh& mesh = s.mesh;
        const Eigen::VectorXd& c = s.w.coefficients();
        const std::vector<Vec3> n_old = normals(mesh);

        m_edges.resize(mesh.num_edges());
        for (Index e = 0; e < mesh.num_edges(); ++e) {
            const EdgeTopology& et = mesh.edge(e);
            detail::EdgeElement& el = m_edges[e];
            el.vertex = {et.vertex[0], et.vertex[1], et.opposite[0], et.opposite[1]};
            for (int side = 0; side < 2; ++side) {
                const Triangle& tri = mesh.triangle(et.triangle[side]);
                for (int k = 0; k < 3; ++k) {
                    const Index v = tri[k];
                    el.slot[side][k] = v == el.vertex[0] ? 0 : (v == el.vertex[1] ? 1 : 2 + side);
                }
                el.local[side] = local_edges(mesh, et.triangle[side], &c);
            }
            el.plus_local = et.local[0];
            el.c1 = cfg.tv_mode ? 0.0 : c[2 * e];
            el.d0 = s.d0[e];
            el.lambda0 = s.lambda0[e];
            el.d2_constant = 0.0;
            for (int i = 0; i < 2; ++i) {
                const Vec3& d2 = s.d2[e][i];
                const Vec3& l2 = s.lambda2[e][i];
                el.q[i] = l2 - cfg.rho2 * d2;
                el.d2_constant += cfg.alpha0 * d2.norm() - l2.dot(d2) + 0.5 * cfg.rho2 * d2.squaredNorm();
            }
            el.n_plus_old = n_old[et.triangle[0]];
        }

        m_triangles.resize(mesh.num_triangles());
        for (Index t = 0; t < mesh.num_triangles(); ++t) {
            detail::TriangleElement& el = m_triangles[t];
            el.vertex = mesh.triangle(t);
            el.local = local_edges(mesh, t, &c);
            el.n_old = n_old[t];
            const Mat3 p = Mat3::Identity() - n_old[t] * n_old[t].transpose();
            const Tensor3& D = s.D1[t];
            const Tensor3& L = s.Lambda1[t];
            el.qbar = (L - cfg.rho1 * D).contract_last_two(p);
            el.constant = cfg.alpha0 * D.norm() - L.dot(D) + 0.5 * cfg.rho1 * D.squared_norm();
        }
    }

    Index num_vertices() const { return m_topology->vertex_count; }
    const std::vector<detail::EdgeElement>& edge_elements() const { return m_edges; }
    const std::vector<detail::TriangleElement>& triangle_elements() const { return m_triangles; }

    template <typename S>
    S edge_energy(const detail::EdgeElement& el, const std::array<Vec3T<S>, 4>& x) const
    {
        const auto& sp = el.slot[0];
        const auto& sm = el.slot[1];
        const auto tp = kernel::triangle_geometry<S>(x[sp[0]], x[sp[1]], x[sp[2]], el.local[0]);
        const auto tm = kernel::triangle_geometry<S>(x[sm[0]], x[sm[1]], x[sm[2]], el.local[1]);
        const Vec3T<S> d = x[1] - x[0];
        const S len = kernel::norm(d);
        const Vec3T<S> t = d / len;
        const S theta = kernel::signed_angle(tp.n, tm.n, tp.mu[el.plus_local]);
        const S half_cot = S(0.5) * (kernel::cot_at(x[2], x[0], x[1]) + kernel::cot_at(x[3], x[0], x[1]));
        const S g0 = theta + half_cot * el.c1;
        const S r0 = g0 - el.d0;
        S val = len * (m_cfg.first_order_weight() * std::abs(el.d0) + el.lambda0 * r0 +
                       S(0.5 * m_cfg.rho0) * r0 * r0);
        if (m_cfg.tv_mode) return val;
        S jump_part = S(el.d2_constant);
        for (int i = 0; i < 2; ++i) {
            const Vec3T<S> wm = kernel::apply_field<S>(tm, x[i], t);
            const Vec3T<S> wp = kernel::apply_field<S>(tp, x[i], t);
            const Vec3T<S> jv = kernel::transport<S>(tm.n, tp.n, wm) - wp;
            const Vec3T<S> q = kernel::transport<S>(el.n_plus_old, tp.n, Vec3T<S>(el.q[i].template cast<S>()));
            jump_part += kernel::dot(q, jv) + S(0.5 * m_cfg.rho2) * kernel::dot(jv, jv);
        }
        return val + S(0.5) * len * jump_part;
    }

    template <typename S>
    S triangle_energy(const detail::TriangleElement& el, const std::array<Vec3T<S>, 3>& x) const
    {
        if (m_cfg.tv_mode) {
            const S twice = kernel::norm(kernel::cross(Vec3T<S>(x[1] - x[0]), Vec3T<S>(x[2] - x[0])));
            return S(2.0 * m_cfg.tau) / twice;
        }
        const auto tg = kernel::triangle_geometry<S>(x[0], x[1], x[2], el.local);
        const Vec3T<S> q = kernel::transport<S>(el.n_old, tg.n, Vec3T<S>(el.qbar.template cast<S>()));
        const S inner = kernel::dot(q, tg.g) + S(m_cfg.rho1) * kernel::dot(tg.g, tg.g) + S(el.constant);
        return S(m_cfg.tau) / tg.area + tg.area * inner;
    }

    /// Objective value; +infinity if the positions are outside the admissible set.
    double value(const Eigen::Matrix3Xd& x) const
    {
        if (!admissible(x)) return std::numeric_limits<double>::infinity();
        double v = 0.5 * (x - m_reference).squaredNorm();
        for (const auto& el : m_triangles) {
            std::array<Vec3, 3> p{x.col(el.vertex[0]), x.col(el.vertex[1]), x.col(el.vertex[2])};
            v += triangle_energy<double>(el, p);
        }
        for (const auto& el : m_edges) {
            std::array<Vec3, 4> p{x.col(el.vertex[0]), x.col(el.vertex[1]), x.col(el.vertex[2]),
                                  x.col(el.vertex[3])};
            v += edge_energy<double>(el, p);
        }
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    }

    /// Stricter than kAntipodalTolerance so accepted iterates stay valid for later transports.
    static constexpr double kAdmissibleAntipodalMargin = 1e-6;

    /// Nondegenerate triangles and no antipodal pair among the normals that enter a
    /// log map or a transport.
    bool admissible(const Eigen::Matrix3Xd& x, std::string* reason = nullptr) const
    {
        if (!x.allFinite()) return fail(reason, "non-finite coordinates");
        const Topology& topo = *m_topology;
        double mean_sq = 0.0;
        for (const auto& e : topo.edges) mean_sq += (x.col(e.vertex[1]) - x.col(e.vertex[0])).squaredNorm();
        mean_sq /= static_cast<double>(topo.edges.size());
        const double threshold = 1e-14 * mean_sq;
        std::vector<Vec3> n(topo.triangles.size());
        for (std::size_t t = 0; t < topo.triangles.size(); ++t) {
            const Triangle& tri = topo.triangles[t];
            const Vec3 a = x.col(tri[0]);
            const Vec3 c = (Vec3(x.col(tri[1])) - a).cross(Vec3(x.col(tri[2])) - a);
            const double twice = c.norm();
            if (!(0.5 * twice >= threshold) || twice == 0.0) return fail(reason, "degenerate triangle");
            n[t] = c / twice;
            if (n[t].dot(m_triangles[t].n_old) < -1.0 + kAdmissibleAntipodalMargin)
                return fail(reason, "antipodal transport of a triangle variable");
        }
        for (std::size_t e = 0; e < topo.edges.size(); ++e) {
            const auto& et = topo.edges[e];
            if (n[et.triangle[0]].dot(n[et.triangle[1]]) < -1.0 + kAdmissibleAntipodalMargin)
                return fail(reason, "antipodal adjacent normals");
            if (n[et.triangle[0]].dot(m_edges[e].n_plus_old) < -1.0 + kAdmissibleAntipodalMargin)
                return fail(reason, "antipodal transport of an edge variable");
        }
        return true;
    }

    /// Gradient with respect to the flattened coordinates (x0, y0, z0, x1, ...).
    Eigen::VectorXd gradient(const Eigen::Matrix3Xd& x) const
    {
        Eigen::VectorXd g;
        assemble(x, g, nullptr);
        return g;
    }

    void gradient_hessian(const Eigen::Matrix3Xd& x, Eigen::VectorXd& g, Eigen::SparseMatrix<double>& h) const
    {
        assemble(x, g, &h);
    }

private:
    static bool fail(std::string* reason, const char* msg)
    {
        if (reason) *reason = msg;
        return false;
    }

    template <int N, std::size_t K, typename F>
    void accumulate(const Eigen::Matrix3Xd& x, const std::array<Index, K>& verts, F&& energy, Eigen::VectorXd& g,
                    std::vector<Eigen::Triplet<double>>* trip) const
    {
        static_assert(N == 3 * static_cast<int>(K));
        using J = Jet<N>;
        std::array<Vec3T<J>, K> p;
        for (std::size_t k = 0; k < K; ++k)
            for (int c = 0; c < 3; ++c)
                p[k][c] = J::variable(x(c, verts[k]), 3 * static_cast<int>(k) + c);
        const J val = energy(p);
        for (int i = 0; i < N; ++i) g[3 * verts[i / 3] + i % 3] += val.g[i];
        if (!trip) return;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                trip->emplace_back(3 * verts[i / 3] + i % 3, 3 * verts[j / 3] + j % 3, val.hessian(i, j));
    }

    void assemble(const Eigen::Matrix3Xd& x, Eigen::VectorXd& g, Eigen::SparseMatrix<double>* h) const
    {
        const Index n = 3 * num_vertices();
        const Eigen::Matrix3Xd diff = x - m_reference;
        g = Eigen::Map<const Eigen::VectorXd>(diff.data(), n);
        std::vector<Eigen::Triplet<double>> trip;
        std::vector<Eigen::Triplet<double>>* tp = h ? &trip : nullptr;
        if (h) {
            trip.reserve(static_cast<std::size_t>(n) + 81 * m_triangles.size() + 144 * m_edges.size());
            for (Index i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
        }
        for (const auto& el : m_triangles) {
            const std::array<Index, 3> v{el.vertex[0], el.vertex[1], el.vertex[2]};
            accumulate<9>(x, v, [&](const auto& p) { return triangle_energy(el, p); }, g, tp);
        }
        for (const auto& el : m_edges) {
            accumulate<12>(x, el.vertex, [&](const auto& p) { return edge_energy(el, p); }, g, tp);
        }
        if (h) {
            h->resize(n, n);
            h->setFromTriplets(trip.begin(), trip.end());
        }
    }

    SolverConfig m_cfg;
    Eigen::Matrix3Xd m_reference;
    std::shared_ptr<const Topology> m_topology;
    std::vector<detail::EdgeElement> m_edges;
    std::vector<detail::TriangleElement> m_triangles;
};

namespace detail {

/// Approximately solves (H + sigma I) p = -g by Jacobi-preconditioned CG, stopping at a
/// relative residual of eta. On a direction of nonpositive curvature the shift sigma is
/// increased and the solve restarts.
inline Eigen::VectorXd truncated_newton_direction(const Eigen::SparseMatrix<double>& h, const Eigen::VectorXd& g,
                                                  int max_iters, double& sigma)
{
    const double gnorm = g.norm();
    const double eta = std::min(0.1, std::sqrt(gnorm));
    const Eigen::VectorXd diag = h.diagonal();
    const double diag_scale = diag.cwiseAbs().mean();
    sigma = 0.0;
    for (int attempt = 0; attempt < 60; ++attempt) {
        Eigen::VectorXd precond = (diag.array() + sigma).matrix();
        for (Eigen::Index i = 0; i < precond.size(); ++i) precond[i] = precond[i] > 0.0 ? 1.0 / precond[i] : 1.0;
        Eigen::VectorXd p = Eigen::VectorXd::Zero(g.size());
        Eigen::VectorXd r = -g;
        Eigen::VectorXd z = precond.cwiseProduct(r);
        Eigen::VectorXd d = z;
        double rz = r.dot(z);
        bool negative = false;
        for (int k = 0; k < max_iters; ++k) {
            const Eigen::VectorXd hd = h * d + sigma * d;
            const double curv = d.dot(hd);
            if (!(curv > 1e-14 * d.squaredNorm() * std::max(diag_scale, 1.0))) {
                negative = true;
                break;
            }
            const double alpha = rz / curv;
            p += alpha * d;
            r -= alpha * hd;
            if (r.norm() <= eta * gnorm) break;
            z = precond.cwiseProduct(r);
            const double rz_new = r.dot(z);
            d = z + (rz_new / rz) * d;
            rz = rz_new;
        }
        if (!negative) return p;
        sigma = sigma == 0.0 ? 1e-3 * std::max(diag_scale, 1e-12) : 4.0 * sigma;
    }
    return -g;
}

} // namespace detail

struct NewtonReport
{
    int accepted_steps = 0;
    int rejected_trials = 0;
    bool line_search_failed = false;
    double value_before = 0.0;
    double value_after = 0.0;
};

/// A few globalized truncated Newton steps on the vertex positions. The returned mesh
/// shares the topology of s.mesh; s itself is not modified.
inline TriMesh newton_mesh_step(const AdmmState& s, const SolverConfig& cfg, const Eigen::Matrix3Xd& reference,
                                NewtonReport* report = nullptr)
{
    const ShapeObjective obj(s, cfg, reference);
    Eigen::Matrix3Xd x = s.mesh.vertices();
    const Index n = 3 * s.mesh.num_vertices();
    double f = obj.value(x);
    NewtonReport rep;
    rep.value_before = f;
    for (int step = 0; step < cfg.newton_steps; ++step) {
        Eigen::VectorXd g;
        Eigen::SparseMatrix<double> h;
        obj.gradient_hessian(x, g, h);
        if (g.norm() == 0.0) break;
        double sigma = 0.0;
        Eigen::VectorXd p = detail::truncated_newton_direction(h, g, cfg.newton_cg_max_iters, sigma);
        double slope = g.dot(p);
        if (!(slope < 0.0)) {
            p = -g;
            slope = -g.squaredNorm();
        }
        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= cfg.max_halvings; ++halving, alpha *= 0.5) {
            Eigen::Matrix3Xd trial = x + alpha * Eigen::Map<const Eigen::Matrix3Xd>(p.data(), 3, n / 3);
            if (cfg.antipodal_policy == AntipodalPolicy::Throw) {
                std::string why;
                if (!obj.admissible(trial, &why) && why.find("antipodal") != std::string::npos)
                    throw Error(ErrorCode::AntipodalPoints, why);
            }
            const double ft = obj.value(trial);
            if (ft <= f + cfg.armijo_c * alpha * slope) {
                x = std::move(trial);
                f = ft;
                accepted = true;
                break;
            }
            ++rep.rejected_trials;
        }
        if (!accepted) {
            rep.line_search_failed = true;
            warn("Newton line search failed after " + std::to_string(cfg.max_halvings) +
                 " halvings (slope " + std::to_string(slope) + ", |g| " + std::to_string(g.norm()) +
                 ", shift " + std::to_string(sigma) + "); keeping the current mesh");
            break;
        }
        ++rep.accepted_steps;
    }
    rep.value_after = f;
    if (report) *report = rep;
    return s.mesh.with_vertices(std::move(x));
}

} // namespace ntgv
