#pragma once

// Wavefront OBJ and OFF (ASCII, triangles only).

#include "ntgv/errors.hpp"
#include "ntgv/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ntgv::io {

enum class MeshFormat { Obj, Off };

/// Raw vertex and face payload of a mesh file.
struct MeshData
{
    Eigen::Matrix3Xd vertices;
    std::vector<Triangle> triangles;
};

inline MeshFormat format_from_path(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".obj") return MeshFormat::Obj;
    if (ext == ".off") return MeshFormat::Off;
    throw Error(ErrorCode::UnsupportedFormat, "unsupported mesh extension '" + ext + "' (expected .obj or .off)");
}

namespace detail {

[[noreturn]] inline void parse_error(std::size_t line, const std::string& what)
{
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline Eigen::Matrix3Xd to_matrix(const std::vector<Vec3>& v)
{
    Eigen::Matrix3Xd m(3, static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = v[i];
    return m;
}

inline bool parse_double(const std::string& token, double& out)
{
    try {
        std::size_t pos = 0;
        out = std::stod(token, &pos);
        return pos == token.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline bool parse_long(const std::string& token, long& out)
{
    try {
        std::size_t pos = 0;
        out = std::stol(token, &pos);
        return pos == token.size();
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace detail

/// Reads "v" and triangular "f" records; other record types are ignored. Face entries
/// may carry texture/normal indices ("f 1/2/3 ..."), which are dropped.
inline MeshData read_obj(std::istream& in)
{
    std::vector<Vec3> verts;
    std::vector<Triangle> tris;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            std::string tok[3];
            Vec3 p;
            for (int i = 0; i < 3; ++i) {
                if (!(ss >> tok[i]) || !detail::parse_double(tok[i], p[i]))
                    detail::parse_error(lineno, "vertex needs three numeric coordinates");
            }
            verts.push_back(p);
        } else if (tag == "f") {
            std::vector<std::string> entries;
            std::string tok;
            while (ss >> tok) entries.push_back(tok);
            if (entries.size() != 3)
                detail::parse_error(lineno, "non-triangular face with " + std::to_string(entries.size()) + " vertices");
            Triangle t{};
            for (int i = 0; i < 3; ++i) {
                const std::string idx = entries[i].substr(0, entries[i].find('/'));
                long v = 0;
                if (!detail::parse_long(idx, v) || v == 0) detail::parse_error(lineno, "invalid face index '" + entries[i] + "'");
                const long resolved = v > 0 ? v - 1 : static_cast<long>(verts.size()) + v;
                if (resolved < 0 || resolved >= static_cast<long>(verts.size()))
                    detail::parse_error(lineno, "face index " + std::to_string(v) + " out of range");
                t[i] = static_cast<Index>(resolved);
            }
            tris.push_back(t);
        }
    }
    return {detail::to_matrix(verts), std::move(tris)};
}

inline MeshData read_off(std::istream& in)
{
    std::size_t lineno = 0;
    // Yields the next non-empty line with comments stripped.
    auto next_line = [&](std::string& out) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                out = line;
                return true;
            }
        }
        return false;
    };

    std::string line;
    if (!next_line(line)) detail::parse_error(lineno, "empty file");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") detail::parse_error(lineno, "missing OFF header");
    long nv = -1, nf = -1, ne = 0;
    if (!(header >> nv)) {
        if (!next_line(line)) detail::parse_error(lineno, "missing element counts");
        header = std::istringstream(line);
        header >> nv;
    }
    if (!(header >> nf) || nv < 0 || nf < 0) detail::parse_error(lineno, "invalid element counts");
    header >> ne;

    std::vector<Vec3> verts(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!next_line(line)) detail::parse_error(lineno, "unexpected end of file in vertex list");
        std::istringstream ss(line);
        std::string tok;
        for (int c = 0; c < 3; ++c)
            if (!(ss >> tok) || !detail::parse_double(tok, verts[i][c]))
                detail::parse_error(lineno, "vertex needs three numeric coordinates");
    }
    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!next_line(line)) detail::parse_error(lineno, "unexpected end of file in face list");
        std::istringstream ss(line);
        long count = 0;
        if (!(ss >> count)) detail::parse_error(lineno, "invalid face record");
        if (count != 3) detail::parse_error(lineno, "non-triangular face with " + std::to_string(count) + " vertices");
        Triangle t{};
        for (int c = 0; c < 3; ++c) {
            long v = 0;
            std::string tok;
            if (!(ss >> tok) || !detail::parse_long(tok, v)) detail::parse_error(lineno, "invalid face index");
            if (v < 0 || v >= nv) detail::parse_error(lineno, "face index " + std::to_string(v) + " out of range");
            t[c] = static_cast<Index>(v);
        }
        tris.push_back(t);
    }
    return {detail::to_matrix(verts), std::move(tris)};
}

inline void write_obj(std::ostream& out, const Eigen::Matrix3Xd& v, const std::vector<Triangle>& tris)
{
    char buf[128];
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v(0, i), v(1, i), v(2, i));
        out << buf;
    }
    for (const Triangle& t : tris) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

inline void write_off(std::ostream& out, const Eigen::Matrix3Xd& v, const std::vector<Triangle>& tris)
{
    out << "OFF\n" << v.cols() << ' ' << tris.size() << " 0\n";
    char buf[128];
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v(0, i), v(1, i), v(2, i));
        out << buf;
    }
    for (const Triangle& t : tris) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

inline MeshData read_mesh_data(const std::filesystem::path& path)
{
    const MeshFormat fmt = format_from_path(path);
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
    return fmt == MeshFormat::Obj ? read_obj(in) : read_off(in);
}

/// Loads and validates a closed triangle mesh.
inline TriMesh load_mesh(const std::filesystem::path& path)
{
    MeshData d = read_mesh_data(path);
    return build_topology(std::move(d.vertices), std::move(d.triangles));
}

inline void save_mesh(const TriMesh& mesh, const std::filesystem::path& path)
{
    const MeshFormat fmt = format_from_path(path);
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
    if (fmt == MeshFormat::Obj) write_obj(out, mesh.vertices(), mesh.topology().triangles);
    else write_off(out, mesh.vertices(), mesh.topology().triangles);
    if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path.string() + "'");
}

} // namespace ntgv::io
