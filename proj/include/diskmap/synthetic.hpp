#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "diskmap/mesh.hpp"

namespace diskmap::synthetic {

// ---------------------------------------------------------------------------
// Ring meshes
// ---------------------------------------------------------------------------

/// Concentric ring of vertices at polar radius `radius`. A ring with
/// count 1 is a single vertex (only valid as the innermost ring).
struct Ring {
    double radius;
    int count;
    double phase = 0.0;
};

/// Position of the parameter point (r, theta) on the surface.
using Embedding = std::function<Vec3(double r, double theta)>;

/// Triangulates consecutive rings with a zipper that always advances along
/// the ring whose next vertex has the smaller polar angle. Faces are
/// counter-clockwise in the (r, theta) parameter disk.
[[nodiscard]] TriMesh ring_mesh(const std::vector<Ring>& rings, const Embedding& embed);

/// Rings for a unit disk with near-equilateral faces and roughly
/// `target_faces` faces: n_k ~ 2 pi k vertices on ring k of m.
[[nodiscard]] std::vector<Ring> disk_rings(std::size_t target_faces);

// ---------------------------------------------------------------------------
// Test surfaces
// ---------------------------------------------------------------------------

[[nodiscard]] TriMesh flat_disk(std::size_t target_faces);

/// Unit hemisphere (z <= 0) with its pole at the disk center.
[[nodiscard]] TriMesh hemisphere(std::size_t target_faces);

/// Unit disk lifted by three Gaussian bumps (amplitude 0.3, sigma 0.2).
[[nodiscard]] TriMesh bumpy_disk(std::size_t target_faces);

/// Unit disk lifted to z = (x^2 - y^2) / 2.
[[nodiscard]] TriMesh saddle(std::size_t target_faces);

/// Flat disk with jittered vertices, uneven ring counts and a few closely
/// spaced ring pairs.
[[nodiscard]] TriMesh irregular_disk(std::size_t target_faces, std::uint64_t seed = 7);

/// Flat disk where every third ring has a companion ring offset by 1.5% of
/// the ring spacing, producing needle triangles with angles below 2 degrees.
[[nodiscard]] TriMesh sliver_disk(std::size_t target_faces);

/// Builds one of the surfaces above by name: flat, hemisphere, bumpy,
/// saddle, irregular, sliver. Throws Error for unknown names.
[[nodiscard]] TriMesh by_name(const std::string& kind, std::size_t target_faces);

[[nodiscard]] const std::vector<std::string>& kinds();

// ---------------------------------------------------------------------------
// Small fixtures
// ---------------------------------------------------------------------------

[[nodiscard]] TriMesh single_triangle();
[[nodiscard]] TriMesh tetra_minus_face();
[[nodiscard]] TriMesh closed_tetrahedron();
/// Unit square split along the (0,0)-(1,1) diagonal.
[[nodiscard]] TriMesh two_triangle_square();
/// Two triangles sharing only vertex 0.
[[nodiscard]] TriMesh bowtie();

}  // namespace diskmap::synthetic
