#include "diskmap/double_cover.hpp"

#include "diskmap/error.hpp"

namespace diskmap {

GluedMesh double_cover(const TriMesh& mesh) {
    const TopologyReport topo = validate_topology(mesh);
    if (!topo.is_disk_topology) {
        throw TopologyError(TopologyDefect::not_disk,
                            "not disk topology: Euler characteristic " +
                                std::to_string(topo.euler_characteristic) + ", " +
                                std::to_string(topo.num_boundary_loops) + " boundary loop(s)");
    }
    const std::vector<int> loop = boundary_loop(mesh);
    const std::size_t nv = mesh.num_vertices();
    const std::size_t nf = mesh.num_faces();

    std::vector<bool> on_seam(nv, false);
    for (int v : loop) on_seam[v] = true;

    GluedMesh g;
    g.source_vertices = nv;
    g.source_faces = nf;
    const std::size_t total = 2 * nv - loop.size();
    g.copy.assign(total, CopyTag::original);
    g.to_original.resize(total);
    g.mirror_of.resize(total);

    std::vector<Vec3> positions(mesh.vertices());
    positions.reserve(total);
    for (std::size_t v = 0; v < nv; ++v) {
        g.to_original[v] = static_cast<int>(v);
        if (on_seam[v]) {
            g.copy[v] = CopyTag::seam;
            g.mirror_of[v] = static_cast<int>(v);
        } else {
            const int m = static_cast<int>(positions.size());
            positions.push_back(mesh.vertex(static_cast<int>(v)));
            g.copy[m] = CopyTag::mirror;
            g.to_original[m] = static_cast<int>(v);
            g.mirror_of[v] = m;
            g.mirror_of[m] = static_cast<int>(v);
        }
    }

    std::vector<Face> faces(mesh.faces());
    faces.reserve(2 * nf);
    for (const Face& f : mesh.faces()) {
        faces.push_back({g.mirror_of[f[0]], g.mirror_of[f[2]], g.mirror_of[f[1]]});
    }

    g.mesh = TriMesh(std::move(positions), std::move(faces));
    g.seam = loop;
    g.source_cotangents = face_cotangents(mesh);
    return g;
}

const std::vector<int>& seam_vertices(const GluedMesh& glued) { return glued.seam; }

SparseMatrix cotangent_laplacian(const GluedMesh& glued) {
    FaceCotangents cot;
    cot.reserve(2 * glued.source_faces);
    cot.insert(cot.end(), glued.source_cotangents.begin(), glued.source_cotangents.end());
    // Mirror face [u', w', v'] has the corner order (u, w, v).
    for (const auto& c : glued.source_cotangents) cot.push_back({c[0], c[2], c[1]});
    return laplacian_from_cotangents(glued.mesh.num_vertices(), glued.mesh.faces(), cot);
}

}  // namespace diskmap
