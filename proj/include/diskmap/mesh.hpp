#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace diskmap {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;
using Face = std::array<int, 3>;

/// Per-vertex planar coordinates z = x + iy over some mesh's connectivity.
using PlanarEmbedding = std::vector<Complex>;
/// Per-vertex points on the unit sphere.
using SphereEmbedding = std::vector<Vec3>;

// ---------------------------------------------------------------------------
// TriMesh
// ---------------------------------------------------------------------------

/// Indexed triangle mesh. Immutable once constructed.
///
/// The constructor rejects out-of-range indices, faces with repeated
/// indices and faces whose area falls below 1e-12 times the squared
/// bounding-box diagonal. Topological checks (manifoldness, orientation,
/// boundary structure) live in validate_topology().
class TriMesh {
public:
    TriMesh() = default;
    TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

    [[nodiscard]] std::size_t num_vertices() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t num_faces() const noexcept { return faces_.size(); }

    [[nodiscard]] const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<Face>& faces() const noexcept { return faces_; }
    [[nodiscard]] const Vec3& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const Face& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }

    [[nodiscard]] double bounding_box_diagonal() const;
    [[nodiscard]] double face_area(int f) const;
    [[nodiscard]] double total_area() const;

private:
    std::vector<Vec3> vertices_;
    std::vector<Face> faces_;
};

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

struct TopologyReport {
    std::size_t num_vertices = 0;
    std::size_t num_edges = 0;
    std::size_t num_faces = 0;
    long euler_characteristic = 0;
    std::size_t num_boundary_loops = 0;
    std::size_t num_boundary_edges = 0;
    bool is_disk_topology = false;
};

/// Undirected edge with `a < b`.
struct Edge {
    int a;
    int b;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Unique undirected edges of the mesh, sorted lexicographically.
[[nodiscard]] std::vector<Edge> edge_list(const TriMesh& mesh);

/// Counts elements and boundary loops. Throws TopologyError for
/// non-manifold edges or vertices, inconsistent orientation, or more than
/// one connected component.
[[nodiscard]] TopologyReport validate_topology(const TriMesh& mesh);

/// All boundary loops, each following boundary half-edge orientation and
/// starting at its lowest vertex index; loops ordered by that start index.
[[nodiscard]] std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh);

/// The single boundary loop of a disk-like mesh. Throws TopologyError when
/// the mesh has zero or several boundary loops.
[[nodiscard]] std::vector<int> boundary_loop(const TriMesh& mesh);

/// Vertex mask: true for vertices on a boundary edge.
[[nodiscard]] std::vector<bool> boundary_vertex_mask(const TriMesh& mesh);

// ---------------------------------------------------------------------------
// Per-face geometry
// ---------------------------------------------------------------------------

/// Interior angles in radians, per face, ordered like the face's corners.
using CornerAngles = std::vector<std::array<double, 3>>;

/// Interior angle at `a` of triangle (a, b, c).
[[nodiscard]] double corner_angle(const Vec3& a, const Vec3& b, const Vec3& c);
[[nodiscard]] double corner_angle(Complex a, Complex b, Complex c);

/// Corner angles of every face. Throws MeshError on zero-length edges.
[[nodiscard]] CornerAngles corner_angles(const TriMesh& mesh);

/// Corner angles of the planar image of `faces` under `uv`. Degenerate
/// images yield NaN angles rather than throwing.
[[nodiscard]] CornerAngles corner_angles(std::span<const Face> faces, const PlanarEmbedding& uv);

/// Twice the signed area of the planar triangle (a, b, c); positive when
/// counter-clockwise.
[[nodiscard]] inline double signed_area2(Complex a, Complex b, Complex c) noexcept {
    const Complex u = b - a;
    const Complex v = c - a;
    return u.real() * v.imag() - u.imag() * v.real();
}

/// Lays a 3D triangle flat preserving edge lengths: first vertex at the
/// origin, second on the positive real axis, third in the upper half plane.
[[nodiscard]] std::array<Complex, 3> layout_in_plane(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace diskmap
