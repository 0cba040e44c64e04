#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace ntgv;
using namespace ntgv::test;
using Catch::Approx;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

std::string message_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("ntgv_test_" + name);
}

int euler_characteristic(const TriMesh& m)
{
    return static_cast<int>(m.num_vertices() - m.num_edges() + m.num_triangles());
}

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

} // namespace

TEST_CASE("OBJ parsing", "[io]")
{
    std::istringstream in("# tetrahedron\n"
                          "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1  # apex\n"
                          "vn 0 0 1\n"
                          "f 1 3 2\nf 1/1 2/2 4/3\nf 2//1 3//1 4//1\nf -4 -1 -2\n");
    const io::MeshData d = io::read_obj(in);
    CHECK(d.vertices.cols() == 4);
    REQUIRE(d.triangles.size() == 4u);
    CHECK(d.triangles[0] == Triangle{0, 2, 1});
    CHECK(d.triangles[1] == Triangle{0, 1, 3});
    CHECK(d.triangles[3] == Triangle{0, 3, 2});
    const TriMesh m = build_topology(d.vertices, d.triangles);
    CHECK(m.num_edges() == 6);

    std::istringstream quad("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n\nf 1 2 3 4\n");
    const std::string msg = message_of([&] { io::read_obj(quad); });
    CHECK(msg.find("line 6") != std::string::npos);
    CHECK(msg.find("non-triangular face") != std::string::npos);
    std::istringstream quad2("v 0 0 0\nf 1 2 3 4\n");
    CHECK(code_of([&] { io::read_obj(quad2); }) == ErrorCode::ParseError);
    std::istringstream bad_index("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
    CHECK(code_of([&] { io::read_obj(bad_index); }) == ErrorCode::ParseError);
    std::istringstream bad_coord("v 0 x 0\n");
    CHECK(message_of([&] { io::read_obj(bad_coord); }).find("line 1") != std::string::npos);
}

TEST_CASE("OFF parsing", "[io]")
{
    std::istringstream in("OFF\n# comment\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 1 2 3\n3 0 3 2\n");
    const io::MeshData d = io::read_off(in);
    CHECK(d.vertices.cols() == 4);
    CHECK(d.triangles.size() == 4u);
    CHECK(build_topology(d.vertices, d.triangles).num_edges() == 6);

    std::istringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
    const std::string msg = message_of([&] { io::read_off(quad); });
    CHECK(msg.find("line 7") != std::string::npos);
    CHECK(msg.find("non-triangular face") != std::string::npos);
    std::istringstream header("PLY\n");
    CHECK(code_of([&] { io::read_off(header); }) == ErrorCode::ParseError);
    std::istringstream truncated("OFF\n3 1 0\n0 0 0\n1 0 0\n");
    CHECK(code_of([&] { io::read_off(truncated); }) == ErrorCode::ParseError);
}

TEST_CASE("file round trips", "[io]")
{
    const TriMesh m = random_closed_mesh(4);
    for (const char* ext : {".obj", ".off", ".OBJ"}) {
        const auto path = temp_path(std::string("roundtrip") + ext);
        io::save_mesh(m, path);
        const TriMesh back = io::load_mesh(path);
        CHECK(back.vertices() == m.vertices());
        CHECK(back.topology().triangles == m.topology().triangles);
        std::filesystem::remove(path);
    }
    CHECK(code_of([] { io::format_from_path("mesh.ply"); }) == ErrorCode::UnsupportedFormat);
    CHECK(code_of([&] { io::save_mesh(m, temp_path("x.stl")); }) == ErrorCode::UnsupportedFormat);
    CHECK(code_of([] { io::load_mesh(temp_path("missing.obj")); }) == ErrorCode::ParseError);

    // Open surfaces are rejected when building the topology.
    const auto open = temp_path("open.obj");
    {
        std::ofstream out(open);
        out << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";
    }
    CHECK_THROWS_AS(io::load_mesh(open), Error);
    std::filesystem::remove(open);
}

TEST_CASE("hemisphere grid generator", "[io]")
{
    const double radius = 0.35, h = 0.04;
    const TriMesh m = io::generate_hemisphere_grid(1, 1, {radius}, {h});
    CHECK(euler_characteristic(m) == 2);
    CHECK(m.num_vertices() > 1000);
    CHECK(m.num_vertices() < 3000);
    CHECK(mean_edge_length(m) == Approx(h).epsilon(0.35));
    const Vec3 center(0.5, 0.5, 0.0);
    double sum = 0.0;
    int dome = 0, plate = 0;
    for (Index t = 0; t < m.num_triangles(); ++t) {
        const Triangle& tri = m.triangle(t);
        bool on_sphere = true;
        Vec3 centroid = Vec3::Zero();
        for (Index v : tri) {
            on_sphere = on_sphere && std::abs((m.vertex(v) - center).norm() - radius) < 1e-12;
            centroid += m.vertex(v) / 3.0;
        }
        const Vec3 n = triangle_normal(m, t);
        if (on_sphere && centroid.z() > 1e-9) {
            const double err = degrees(geodesic_distance(n, (centroid - center).normalized()));
            CHECK(err < 5.0);
            sum += err;
            ++dome;
        } else if (std::abs(centroid.z()) < 1e-12) {
            // Plate triangles face up, slab bottom faces down.
            CHECK(std::abs(std::abs(n.z()) - 1.0) < 1e-12);
            if (n.z() > 0) ++plate;
        }
    }
    CHECK(dome > 500);
    CHECK(plate > 50);
    CHECK(sum / dome < 2.0);
    CHECK_NOTHROW(validate_geometry(m));
}

TEST_CASE("half-cylinder and grid layouts", "[io]")
{
    const TriMesh c = io::generate_halfcylinder_grid(1, 1, {0.35}, {0.04});
    CHECK(euler_characteristic(c) == 2);
    // Lateral triangles have normals orthogonal to the axis (y) and radial in x-z.
    int lateral = 0;
    for (Index t = 0; t < c.num_triangles(); ++t) {
        const Triangle& tri = c.triangle(t);
        bool on_cyl = true;
        Vec3 centroid = Vec3::Zero();
        for (Index v : tri) {
            const Vec3 p = c.vertex(v);
            on_cyl = on_cyl && std::abs(std::hypot(p.x() - 0.5, p.z()) - 0.35) < 1e-12 && p.z() > 1e-9;
            centroid += p / 3.0;
        }
        if (!on_cyl) continue;
        const Vec3 n = triangle_normal(c, t);
        CHECK(std::abs(n.y()) < 1e-9);
        CHECK(degrees(geodesic_distance(n, Vec3(centroid.x() - 0.5, 0.0, centroid.z()).normalized())) < 5.0);
        ++lateral;
    }
    CHECK(lateral > 200);

    const TriMesh grid = io::generate_hemisphere_grid(3, 3, {}, {}, {.cell_size = 1.0});
    CHECK(euler_characteristic(grid) == 2);
    const Eigen::Vector3d lo = grid.vertices().rowwise().minCoeff(), hi = grid.vertices().rowwise().maxCoeff();
    CHECK(lo.x() == Approx(0.0).margin(1e-12));
    CHECK(hi.x() == Approx(3.0));
    CHECK(hi.y() == Approx(3.0));
    CHECK(hi.z() == Approx(0.38));
    CHECK(lo.z() == Approx(-0.1));
    const TriMesh grid2 = io::generate_hemisphere_grid(3, 3, {}, {}, {.cell_size = 1.0});
    CHECK(grid2.vertices() == grid.vertices());

    CHECK(code_of([] { io::generate_hemisphere_grid(2, 2, {0.3, 0.3, 0.3}); }) == ErrorCode::SizeMismatch);
    CHECK(code_of([] { io::generate_hemisphere_grid(1, 1, {0.6}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { io::generate_halfcylinder_grid(0, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("noise", "[io]")
{
    const TriMesh m = io::generate_hemisphere_grid(1, 1, {0.3}, {0.08});
    const TriMesh same = io::add_noise(m, 0.0, 1);
    CHECK(same.vertices() == m.vertices());
    CHECK(io::add_noise(m, 0.2, 5).vertices() == io::add_noise(m, 0.2, 5).vertices());
    CHECK(io::add_noise(m, 0.2, 5).vertices() != io::add_noise(m, 0.2, 6).vertices());
    CHECK(io::add_noise(m, 0.2, 5).shares_topology(m));
    CHECK(code_of([&] { io::add_noise(m, -1.0, 1); }) == ErrorCode::InvalidArgument);

    // Sample standard deviation over at least 1e5 coordinates.
    const double sigma = 0.2 * mean_edge_length(m);
    Eigen::ArrayXd samples(0);
    for (std::uint64_t seed = 0; samples.size() < 100000; ++seed) {
        const Eigen::Matrix3Xd d = io::add_noise(m, 0.2, seed).vertices() - m.vertices();
        Eigen::ArrayXd next(samples.size() + d.size());
        next << samples, Eigen::Map<const Eigen::ArrayXd>(d.data(), d.size());
        samples = std::move(next);
    }
    const double mean = samples.mean();
    const double sd = std::sqrt((samples - mean).square().mean());
    CHECK(std::abs(mean) < 0.01 * sigma);
    CHECK(sd == Approx(sigma).epsilon(0.02));
}

TEST_CASE("metrics", "[io]")
{
    const TriMesh m = io::generate_halfcylinder_grid(1, 1, {0.3}, {0.08});
    const io::MetricsReport self = io::compute_metrics(m, m);
    CHECK(self.mean_angular_normal_error_deg == 0.0);
    CHECK(self.rms_vertex_distance == 0.0);
    CHECK(self.max_vertex_distance == 0.0);
    CHECK(self.tv_normal == Approx(tv_normal(m)));
    CHECK(self.tgv.total == Approx(RegularizerWeights{}.alpha1 * tv_normal(m)).margin(1e-15));

    const Vec3 shift(0.3, -0.4, 1.2);
    const TriMesh moved = m.with_vertices(m.vertices().colwise() + shift);
    const io::MetricsReport r = io::compute_metrics(moved, m);
    CHECK(r.rms_vertex_distance == Approx(shift.norm()).epsilon(1e-12));
    CHECK(r.max_vertex_distance == Approx(shift.norm()).epsilon(1e-12));
    CHECK(r.mean_angular_normal_error_deg < 1e-6);

    // Independent mean of the per-triangle angles.
    const TriMesh noisy = io::add_noise(m, 0.2, 3);
    double sum = 0.0;
    for (Index t = 0; t < m.num_triangles(); ++t)
        sum += std::acos(std::clamp(triangle_normal(noisy, t).dot(triangle_normal(m, t)), -1.0, 1.0));
    CHECK(io::mean_angular_error_deg(noisy, m) == Approx(degrees(sum / m.num_triangles())).epsilon(1e-12));

    CHECK(code_of([&] { io::compute_metrics(m, io::generate_halfcylinder_grid(1, 1, {0.3}, {0.07})); }) ==
          ErrorCode::SizeMismatch);
}
