#include "diskmap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "diskmap/error.hpp"

namespace diskmap {

namespace {

std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

int key_first(std::uint64_t k) { return static_cast<int>(k >> 32); }
int key_second(std::uint64_t k) { return static_cast<int>(k & 0xffffffffu); }

std::vector<std::uint64_t> sorted_half_edges(const TriMesh& mesh) {
    std::vector<std::uint64_t> half;
    half.reserve(3 * mesh.num_faces());
    for (const Face& f : mesh.faces()) {
        for (int k = 0; k < 3; ++k) half.push_back(key(f[k], f[(k + 1) % 3]));
    }
    std::sort(half.begin(), half.end());
    return half;
}

/// Directed boundary half-edges, assuming no directed edge repeats.
std::vector<std::uint64_t> boundary_half_edges(const std::vector<std::uint64_t>& half) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t h : half) {
        const std::uint64_t rev = key(key_second(h), key_first(h));
        if (!std::binary_search(half.begin(), half.end(), rev)) out.push_back(h);
    }
    return out;
}

std::string join_indices(const std::vector<int>& ids, std::size_t limit = 10) {
    std::string s;
    for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
        if (i) s += ", ";
        s += std::to_string(ids[i]);
    }
    if (ids.size() > limit) s += ", ...";
    return s;
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> trace_loops(std::size_t num_vertices,
                                          const std::vector<std::uint64_t>& boundary) {
    std::vector<int> next(num_vertices, -1);
    for (std::uint64_t h : boundary) next[key_first(h)] = key_second(h);

    std::vector<std::vector<int>> loops;
    std::vector<bool> seen(num_vertices, false);
    for (std::size_t v = 0; v < num_vertices; ++v) {
        if (next[v] < 0 || seen[v]) continue;
        std::vector<int> loop;
        int cur = static_cast<int>(v);
        while (!seen[cur]) {
            seen[cur] = true;
            loop.push_back(cur);
            cur = next[cur];
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

}  // namespace

// ---------------------------------------------------------------------------
// TriMesh
// ---------------------------------------------------------------------------

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
    const int n = static_cast<int>(vertices_.size());
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        for (int idx : faces_[f]) {
            if (idx < 0 || idx >= n) {
                throw MeshError("face " + std::to_string(f) + " references vertex " +
                                    std::to_string(idx) + " outside [0, " + std::to_string(n) + ")",
                                {static_cast<int>(f)});
            }
        }
    }
    for (const Vec3& p : vertices_) {
        if (!p.allFinite()) throw MeshError("non-finite vertex coordinate");
    }

    const double diag = bounding_box_diagonal();
    const double min_area = 1e-12 * diag * diag;
    std::vector<int> bad;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const Face& t = faces_[f];
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2] ||
            face_area(static_cast<int>(f)) <= min_area) {
            bad.push_back(static_cast<int>(f));
        }
    }
    if (!bad.empty()) {
        throw MeshError(std::to_string(bad.size()) + " degenerate face(s): " + join_indices(bad),
                        std::move(bad));
    }
}

double TriMesh::bounding_box_diagonal() const {
    if (vertices_.empty()) return 0.0;
    Vec3 lo = vertices_.front();
    Vec3 hi = vertices_.front();
    for (const Vec3& p : vertices_) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

double TriMesh::face_area(int f) const {
    const Face& t = face(f);
    return 0.5 * (vertex(t[1]) - vertex(t[0])).cross(vertex(t[2]) - vertex(t[0])).norm();
}

double TriMesh::total_area() const {
    double sum = 0.0;
    for (std::size_t f = 0; f < faces_.size(); ++f) sum += face_area(static_cast<int>(f));
    return sum;
}

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

std::vector<Edge> edge_list(const TriMesh& mesh) {
    std::vector<std::uint64_t> keys;
    keys.reserve(3 * mesh.num_faces());
    for (const Face& f : mesh.faces()) {
        for (int k = 0; k < 3; ++k) {
            const int a = f[k];
            const int b = f[(k + 1) % 3];
            keys.push_back(key(std::min(a, b), std::max(a, b)));
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<Edge> edges;
    edges.reserve(keys.size());
    for (std::uint64_t k : keys) edges.push_back({key_first(k), key_second(k)});
    return edges;
}

TopologyReport validate_topology(const TriMesh& mesh) {
    const std::size_t nv = mesh.num_vertices();

    // Undirected edge multiplicity.
    std::vector<std::uint64_t> undirected;
    undirected.reserve(3 * mesh.num_faces());
    for (const Face& f : mesh.faces()) {
        for (int k = 0; k < 3; ++k) {
            const int a = f[k];
            const int b = f[(k + 1) % 3];
            undirected.push_back(key(std::min(a, b), std::max(a, b)));
        }
    }
    std::sort(undirected.begin(), undirected.end());
    std::size_t num_edges = 0;
    for (std::size_t i = 0; i < undirected.size();) {
        std::size_t j = i;
        while (j < undirected.size() && undirected[j] == undirected[i]) ++j;
        if (j - i > 2) {
            throw TopologyError(TopologyDefect::non_manifold_edge,
                                "edge (" + std::to_string(key_first(undirected[i])) + ", " +
                                    std::to_string(key_second(undirected[i])) + ") is shared by " +
                                    std::to_string(j - i) + " faces",
                                {key_first(undirected[i]), key_second(undirected[i])});
        }
        ++num_edges;
        i = j;
    }

    const auto half = sorted_half_edges(mesh);
    for (std::size_t i = 1; i < half.size(); ++i) {
        if (half[i] == half[i - 1]) {
            throw TopologyError(TopologyDefect::inconsistent_orientation,
                                "half-edge (" + std::to_string(key_first(half[i])) + ", " +
                                    std::to_string(key_second(half[i])) +
                                    ") is used twice; face orientation is inconsistent",
                                {key_first(half[i]), key_second(half[i])});
        }
    }

    // Each vertex's incident faces must form a single fan.
    std::vector<std::vector<std::pair<int, int>>> fans(nv);
    for (const Face& f : mesh.faces()) {
        for (int k = 0; k < 3; ++k) fans[f[k]].emplace_back(f[(k + 1) % 3], f[(k + 2) % 3]);
    }
    std::vector<int> unreferenced;
    for (std::size_t v = 0; v < nv; ++v) {
        const auto& links = fans[v];
        if (links.empty()) {
            unreferenced.push_back(static_cast<int>(v));
            continue;
        }
        std::unordered_map<int, int> next;
        std::unordered_map<int, int> indegree;
        for (auto [a, b] : links) {
            next[a] = b;
            ++indegree[b];
        }
        int start = links.front().first;
        for (auto [a, b] : links) {
            if (!indegree.count(a)) {
                start = a;
                break;
            }
        }
        std::size_t visited = 0;
        int cur = start;
        while (visited <= links.size()) {
            auto it = next.find(cur);
            if (it == next.end()) break;
            ++visited;
            cur = it->second;
            if (cur == start) break;
        }
        if (visited != links.size()) {
            throw TopologyError(TopologyDefect::non_manifold_vertex,
                                "vertex " + std::to_string(v) + " is non-manifold",
                                {static_cast<int>(v)});
        }
    }
    if (!unreferenced.empty()) {
        throw TopologyError(TopologyDefect::multiple_components,
                            std::to_string(unreferenced.size()) +
                                " vertex/vertices not referenced by any face: " +
                                join_indices(unreferenced),
                            unreferenced);
    }

    DisjointSets sets(nv);
    for (const Face& f : mesh.faces()) {
        sets.unite(f[0], f[1]);
        sets.unite(f[1], f[2]);
    }
    std::size_t components = 0;
    for (std::size_t v = 0; v < nv; ++v) components += sets.find(static_cast<int>(v)) == static_cast<int>(v);
    if (components > 1) {
        throw TopologyError(TopologyDefect::multiple_components,
                            "mesh has " + std::to_string(components) + " connected components");
    }

    const auto boundary = boundary_half_edges(half);
    TopologyReport report;
    report.num_vertices = nv;
    report.num_edges = num_edges;
    report.num_faces = mesh.num_faces();
    report.euler_characteristic = static_cast<long>(nv) - static_cast<long>(num_edges) +
                                  static_cast<long>(mesh.num_faces());
    report.num_boundary_edges = boundary.size();
    report.num_boundary_loops = trace_loops(nv, boundary).size();
    report.is_disk_topology = report.euler_characteristic == 1 && report.num_boundary_loops == 1;
    return report;
}

std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh) {
    return trace_loops(mesh.num_vertices(), boundary_half_edges(sorted_half_edges(mesh)));
}

std::vector<int> boundary_loop(const TriMesh& mesh) {
    auto loops = boundary_loops(mesh);
    if (loops.size() != 1) {
        throw TopologyError(TopologyDefect::not_disk,
                            "expected exactly one boundary loop, found " + std::to_string(loops.size()));
    }
    return std::move(loops.front());
}

std::vector<bool> boundary_vertex_mask(const TriMesh& mesh) {
    std::vector<bool> mask(mesh.num_vertices(), false);
    for (const auto& loop : boundary_loops(mesh)) {
        for (int v : loop) mask[v] = true;
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Per-face geometry
// ---------------------------------------------------------------------------

double corner_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 u = b - a;
    const Vec3 v = c - a;
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

double corner_angle(Complex a, Complex b, Complex c) {
    const Complex u = b - a;
    const Complex v = c - a;
    const double cross = u.real() * v.imag() - u.imag() * v.real();
    const double dot = u.real() * v.real() + u.imag() * v.imag();
    return std::atan2(std::abs(cross), dot);
}

CornerAngles corner_angles(const TriMesh& mesh) {
    CornerAngles angles(mesh.num_faces());
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& t = mesh.face(static_cast<int>(f));
        for (int k = 0; k < 3; ++k) {
            const Vec3& a = mesh.vertex(t[k]);
            const Vec3& b = mesh.vertex(t[(k + 1) % 3]);
            const Vec3& c = mesh.vertex(t[(k + 2) % 3]);
            if ((b - a).squaredNorm() == 0.0 || (c - a).squaredNorm() == 0.0) {
                throw MeshError("face " + std::to_string(f) + " has a zero-length edge",
                                {static_cast<int>(f)});
            }
            angles[f][k] = corner_angle(a, b, c);
        }
    }
    return angles;
}

CornerAngles corner_angles(std::span<const Face> faces, const PlanarEmbedding& uv) {
    CornerAngles angles(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        for (int k = 0; k < 3; ++k) {
            const Complex a = uv[t[k]];
            const Complex b = uv[t[(k + 1) % 3]];
            const Complex c = uv[t[(k + 2) % 3]];
            angles[f][k] = (b == a || c == a) ? std::nan("") : corner_angle(a, b, c);
        }
    }
    return angles;
}

std::array<Complex, 3> layout_in_plane(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const double len1 = e1.norm();
    return {Complex(0.0, 0.0), Complex(len1, 0.0),
            Complex(e1.dot(e2) / len1, e1.cross(e2).norm() / len1)};
}

}  // namespace diskmap
