#pragma once

#include <string>
#include <vector>

#include "diskmap/double_cover.hpp"
#include "diskmap/mesh.hpp"
#include "diskmap/quasiconformal.hpp"
#include "diskmap/sparse.hpp"
#include "diskmap/spherical.hpp"

namespace diskmap {

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

/// Rotates the sphere so the area-weighted centroid of the original copy's
/// faces points at the South pole, then applies z -> z / c in North-pole
/// stereographic coordinates, c being the geometric mean of the seam moduli.
/// A vanishing centroid falls back to the normal of the seam's best-fit plane.
[[nodiscard]] SphereEmbedding mobius_to_hemispheres(const SphereEmbedding& sphere, const GluedMesh& glued);

/// Puts the listed vertices on the unit circle (v / |v|); other vertices are
/// copied. Throws Error for a listed vertex at the origin.
[[nodiscard]] PlanarEmbedding normalize_boundary(PlanarEmbedding region, std::span<const int> boundary);

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

struct PipelineOptions {
    bool skip_south_pole = false;
    SolveOptions solve;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct Provenance {
    int anchor_face = -1;          ///< glued face index
    int anchor_source_face = -1;   ///< source face it duplicates
    bool anchor_on_mirror = false;
    bool skip_south_pole = false;
    double tolerance = 0.0;
    std::size_t south_pole_fixed = 0;
    ClampReport south_pole_clamp;
    ClampReport final_clamp;
    std::size_t region_flips = 0;  ///< clockwise faces in the normalized region
    SolveLog solves;
};

struct DiskParameterization {
    PlanarEmbedding uv;
    std::vector<int> boundary;
    /// Normalized stereographic image of the original copy, before the
    /// final Beltrami correction.
    PlanarEmbedding region;
    Provenance provenance;
    std::vector<StageTiming> timings;

    [[nodiscard]] double total_seconds() const;
};

/// Runs the whole pipeline. Throws TopologyError for non-disk input and
/// PipelineError (stage name plus offending faces) if the result violates
/// the boundary or orientation invariants.
[[nodiscard]] DiskParameterization disk_conformal_parameterize(const TriMesh& mesh,
                                                               const PipelineOptions& options = {});

struct InvariantCheck {
    double max_boundary_error = 0.0;  ///< max | |uv| - 1 | on the boundary
    std::vector<int> outside;         ///< interior vertices with |uv| >= 1
    std::vector<int> flipped;         ///< faces with signed area <= 0

    [[nodiscard]] bool ok() const noexcept {
        return max_boundary_error < 1e-9 && outside.empty() && flipped.empty();
    }
};

[[nodiscard]] InvariantCheck check_invariants(const TriMesh& mesh, const PlanarEmbedding& uv,
                                              std::span<const int> boundary);

}  // namespace diskmap
