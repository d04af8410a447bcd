#include "diskmap/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string_view>

#include "diskmap/error.hpp"

namespace diskmap {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.precision(17);
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

double parse_double(std::string_view tok, std::size_t line) {
    // from_chars for double is unavailable on some libstdc++ builds; strtod is fine here.
    std::string s(tok);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ParseError("expected a number, got '" + s + "'", line);
    }
    return v;
}

long parse_long(std::string_view tok, std::size_t line) {
    long v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("expected an integer, got '" + std::string(tok) + "'", line);
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view strip_comment(std::string_view s) {
    const auto hash = s.find('#');
    return hash == std::string_view::npos ? s : s.substr(0, hash);
}

/// 1-based (or negative, relative) OBJ index to 0-based.
int resolve_obj_index(long idx, std::size_t count, std::size_t face, const char* what,
                      std::size_t line) {
    long resolved = idx > 0 ? idx - 1 : static_cast<long>(count) + idx;
    if (idx == 0 || resolved < 0 || resolved >= static_cast<long>(count)) {
        throw ParseError("face " + std::to_string(face + 1) + " references " + what + " " +
                             std::to_string(idx) + " but only " + std::to_string(count) +
                             " are defined",
                         line);
    }
    return static_cast<int>(resolved);
}

LoadedMesh read_obj(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<Vec3> positions;
    std::vector<Complex> texcoords;
    std::vector<Face> faces;
    std::vector<std::array<int, 3>> face_tex;
    bool any_tex = false;
    bool all_tex = true;

    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto tok = split(strip_comment(raw));
        if (tok.empty()) continue;
        const std::string_view kind = tok[0];
        if (kind == "v") {
            if (tok.size() < 4) throw ParseError("vertex needs 3 coordinates", line);
            positions.emplace_back(parse_double(tok[1], line), parse_double(tok[2], line),
                                   parse_double(tok[3], line));
        } else if (kind == "vt") {
            if (tok.size() < 3) throw ParseError("texture coordinate needs 2 components", line);
            texcoords.emplace_back(parse_double(tok[1], line), parse_double(tok[2], line));
        } else if (kind == "f") {
            if (tok.size() != 4) {
                throw ParseError("face " + std::to_string(faces.size() + 1) + " has " +
                                     std::to_string(tok.size() - 1) +
                                     " vertices; only triangles are supported",
                                 line);
            }
            Face f{};
            std::array<int, 3> t{-1, -1, -1};
            for (int k = 0; k < 3; ++k) {
                const std::string_view ref = tok[k + 1];
                const auto slash = ref.find('/');
                f[k] = resolve_obj_index(parse_long(ref.substr(0, slash), line), positions.size(),
                                         faces.size(), "vertex", line);
                if (slash != std::string_view::npos) {
                    const auto rest = ref.substr(slash + 1);
                    const auto slash2 = rest.find('/');
                    const auto vt = rest.substr(0, slash2);
                    if (!vt.empty()) {
                        t[k] = resolve_obj_index(parse_long(vt, line), texcoords.size(),
                                                 faces.size(), "texture coordinate", line);
                    }
                }
            }
            const bool has = t[0] >= 0 && t[1] >= 0 && t[2] >= 0;
            any_tex = any_tex || has;
            all_tex = all_tex && has;
            faces.push_back(f);
            face_tex.push_back(t);
        }
        // vn, g, o, s, usemtl, mtllib and others carry nothing we need.
    }

    LoadedMesh out{TriMesh(std::move(positions), std::move(faces)), std::nullopt};
    if (any_tex && all_tex) {
        // Per-vertex uv: every corner of a vertex must carry the same vt value.
        PlanarEmbedding uv(out.mesh.num_vertices(), Complex(std::nan(""), std::nan("")));
        std::vector<bool> set(out.mesh.num_vertices(), false);
        for (std::size_t f = 0; f < face_tex.size(); ++f) {
            for (int k = 0; k < 3; ++k) {
                const int v = out.mesh.face(static_cast<int>(f))[k];
                const Complex value = texcoords[face_tex[f][k]];
                if (set[v] && uv[v] != value) {
                    throw ParseError("vertex " + std::to_string(v + 1) +
                                         " has conflicting texture coordinates (seams are not supported)",
                                     0);
                }
                uv[v] = value;
                set[v] = true;
            }
        }
        out.uv = std::move(uv);
    }
    return out;
}

LoadedMesh read_off(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string raw;
    std::size_t line = 0;
    std::vector<std::string_view> tok;

    // Yields the tokens of the next non-empty line.
    auto next_tokens = [&]() -> bool {
        while (std::getline(in, raw)) {
            ++line;
            tok = split(strip_comment(raw));
            if (!tok.empty()) return true;
        }
        return false;
    };

    if (!next_tokens() || tok[0].substr(0, 3) != "OFF") {
        throw ParseError("missing OFF header", line);
    }
    if (tok[0] != "OFF") throw ParseError("unsupported OFF variant '" + std::string(tok[0]) + "'", line);
    std::vector<std::string_view> counts(tok.begin() + 1, tok.end());
    if (counts.empty()) {
        if (!next_tokens()) throw ParseError("missing element counts", line);
        counts = tok;
    }
    if (counts.size() < 2) throw ParseError("expected vertex and face counts", line);
    const long nv = parse_long(counts[0], line);
    const long nf = parse_long(counts[1], line);
    if (nv < 0 || nf < 0) throw ParseError("negative element count", line);

    std::vector<Vec3> positions;
    positions.reserve(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!next_tokens()) throw ParseError("unexpected end of file in vertex list", line);
        if (tok.size() < 3) throw ParseError("vertex needs 3 coordinates", line);
        positions.emplace_back(parse_double(tok[0], line), parse_double(tok[1], line),
                               parse_double(tok[2], line));
    }
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!next_tokens()) throw ParseError("unexpected end of file in face list", line);
        const long n = parse_long(tok[0], line);
        if (n != 3) {
            throw ParseError("face " + std::to_string(i) + " has " + std::to_string(n) +
                                 " vertices; only triangles are supported",
                             line);
        }
        if (tok.size() < 4) throw ParseError("face " + std::to_string(i) + " is truncated", line);
        Face f{};
        for (int k = 0; k < 3; ++k) {
            const long idx = parse_long(tok[k + 1], line);
            if (idx < 0 || idx >= nv) {
                throw ParseError("face " + std::to_string(i) + " references vertex " +
                                     std::to_string(idx) + " but only " + std::to_string(nv) +
                                     " are defined",
                                 line);
            }
            f[k] = static_cast<int>(idx);
        }
        faces.push_back(f);
    }
    return {TriMesh(std::move(positions), std::move(faces)), std::nullopt};
}

}  // namespace

MeshFormat parse_mesh_format(const std::string& name) {
    const std::string s = lower(name);
    if (s == "auto") return MeshFormat::auto_detect;
    if (s == "obj") return MeshFormat::obj;
    if (s == "off") return MeshFormat::off;
    throw Error("unknown mesh format '" + name + "' (expected auto, obj or off)");
}

MeshFormat detect_format(const std::filesystem::path& path, MeshFormat requested) {
    if (requested != MeshFormat::auto_detect) return requested;
    const std::string ext = lower(path.extension().string());
    if (ext == ".obj") return MeshFormat::obj;
    if (ext == ".off") return MeshFormat::off;
    std::ifstream in(path);
    std::string first;
    if (in >> first && first.rfind("OFF", 0) == 0) return MeshFormat::off;
    return MeshFormat::obj;
}

LoadedMesh load_mesh_with_uv(const std::filesystem::path& path, MeshFormat format) {
    return detect_format(path, format) == MeshFormat::off ? read_off(path) : read_obj(path);
}

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
    return load_mesh_with_uv(path, format).mesh;
}

void write_mesh(const std::filesystem::path& path, const TriMesh& mesh, MeshFormat format) {
    auto out = open_output(path);
    if (format == MeshFormat::auto_detect) {
        format = lower(path.extension().string()) == ".off" ? MeshFormat::off : MeshFormat::obj;
    }
    if (format == MeshFormat::off) {
        out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << " 0\n";
        for (const Vec3& p : mesh.vertices()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
        for (const Face& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    } else {
        for (const Vec3& p : mesh.vertices()) out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
        for (const Face& f : mesh.faces()) {
            out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
        }
    }
    finish_output(out, path);
}

void write_mesh_with_uv(const std::filesystem::path& path, const TriMesh& mesh,
                        const PlanarEmbedding& uv, const ObjUvOptions& options) {
    if (uv.size() != mesh.num_vertices()) {
        throw Error("uv has " + std::to_string(uv.size()) + " entries but the mesh has " +
                    std::to_string(mesh.num_vertices()) + " vertices");
    }
    auto out = open_output(path);
    if (!options.mtllib.empty()) out << "mtllib " << options.mtllib << '\n';
    for (const Vec3& p : mesh.vertices()) out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    for (const Complex& t : uv) {
        const Complex s = t * options.uv_scale;
        out << "vt " << s.real() << ' ' << s.imag() << '\n';
    }
    if (!options.material.empty()) out << "usemtl " << options.material << '\n';
    for (const Face& f : mesh.faces()) {
        out << "f " << f[0] + 1 << '/' << f[0] + 1 << ' ' << f[1] + 1 << '/' << f[1] + 1 << ' '
            << f[2] + 1 << '/' << f[2] + 1 << '\n';
    }
    finish_output(out, path);
}

}  // namespace diskmap
