#pragma once

#include <cstdint>
#include <vector>

#include "diskmap/mesh.hpp"
#include "diskmap/sparse.hpp"

namespace diskmap {

enum class CopyTag : std::uint8_t { original, mirror, seam };

/// Closed genus-0 mesh obtained by gluing a disk to its reversed copy.
///
/// Layout: glued vertices [0, V) are the source vertices (seam vertices keep
/// their source index); the mirror copies of the V - r interior vertices
/// follow at [V, 2V - r). Faces [0, F) are the source faces and face F + i
/// is source face i with its last two corners swapped and every vertex
/// replaced by its mirror.
struct GluedMesh {
    TriMesh mesh;
    std::size_t source_vertices = 0;
    std::size_t source_faces = 0;
    /// Per glued vertex.
    std::vector<CopyTag> copy;
    /// Per glued vertex: the source vertex it duplicates.
    std::vector<int> to_original;
    /// Involution pairing original and mirror vertices; identity on the seam.
    std::vector<int> mirror_of;
    /// Seam vertices in the cyclic order of the source boundary loop.
    std::vector<int> seam;
    /// Per source face cotangents, shared by each mirror face.
    FaceCotangents source_cotangents;

    [[nodiscard]] bool is_original_face(int f) const noexcept {
        return static_cast<std::size_t>(f) < source_faces;
    }
};

/// Builds the double cover. Throws TopologyError when the input is not a
/// topological disk.
[[nodiscard]] GluedMesh double_cover(const TriMesh& mesh);

/// Glued indices of the seam in source boundary order.
[[nodiscard]] const std::vector<int>& seam_vertices(const GluedMesh& glued);

/// Cotangent Laplacian of the glued mesh, computing cotangents only for the
/// source faces and reusing them for their mirror twins.
[[nodiscard]] SparseMatrix cotangent_laplacian(const GluedMesh& glued);

}  // namespace diskmap
