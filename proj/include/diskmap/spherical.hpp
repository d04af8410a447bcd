#pragma once

#include <array>
#include <cstddef>

#include "diskmap/double_cover.hpp"
#include "diskmap/mesh.hpp"
#include "diskmap/quasiconformal.hpp"
#include "diskmap/sparse.hpp"

namespace diskmap {

// ---------------------------------------------------------------------------
// Anchor triangle
// ---------------------------------------------------------------------------

/// Face pinned in the planar harmonic solve, and where its corners go.
struct AnchorTriangle {
    int face = -1;
    std::array<int, 3> vertices{};
    std::array<Complex, 3> target{};
};

/// Target layout for face `f`: first corner at 0, second on the positive
/// real axis, third in the lower half plane, similar to the 3D face with
/// its longest edge scaled to 10 * sqrt(source area). The mirrored layout
/// makes every other face come out counter-clockwise in the plane.
[[nodiscard]] AnchorTriangle anchor_from_face(const GluedMesh& glued, int f);

/// The mirror-copy face touching no seam vertex with the largest minimum
/// angle (lowest index on ties). Falls back to any face off the seam, then
/// to any face.
[[nodiscard]] AnchorTriangle choose_anchor_face(const GluedMesh& glued);

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

/// Discrete harmonic map of the glued mesh to the plane with the anchor
/// corners pinned.
[[nodiscard]] PlanarEmbedding harmonic_plane_map(const GluedMesh& glued, const AnchorTriangle& anchor,
                                                 const SolveOptions& options = {}, SolveLog* log = nullptr);

/// z -> (2x, 2y, |z|^2 - 1) / (1 + |z|^2).
[[nodiscard]] Vec3 inverse_stereographic(Complex z);
[[nodiscard]] SphereEmbedding inverse_stereographic(const PlanarEmbedding& plane);

/// Projection from the North pole: (x, y, z) -> (x + iy) / (1 - z). Throws
/// Error for a point within 1e-12 of the North pole.
[[nodiscard]] Complex stereographic_project(const Vec3& p);
[[nodiscard]] PlanarEmbedding stereographic_project(const SphereEmbedding& sphere);

struct SouthPoleReport {
    std::size_t fixed = 0;
    std::size_t perturbed = 0;
    ClampReport clamp;
};

/// Quasi-conformal correction in the South-pole chart w = (x + iy) / (1 + z):
/// vertices with |w| > 2 * median |w| keep their position, the rest are
/// recomputed by the linear Beltrami solver so that the chart map becomes
/// conformal to the glued surface. The result is re-projected to the unit
/// sphere.
[[nodiscard]] SphereEmbedding south_pole_correction(const SphereEmbedding& sphere, const GluedMesh& glued,
                                                    const SolveOptions& options = {},
                                                    SolveLog* log = nullptr,
                                                    SouthPoleReport* report = nullptr);

struct SphericalOptions {
    bool skip_south_pole = false;
    SolveOptions solve;
};

struct SphericalResult {
    SphereEmbedding sphere;
    AnchorTriangle anchor;
    SouthPoleReport south_pole;
};

/// Anchor choice and harmonic map. The plane map then has its global affine
/// stretch removed, is centered and scaled so both poles see comparable
/// triangle sizes, and is projected back to the sphere. The South-pole
/// correction runs last unless skipped.
[[nodiscard]] SphericalResult spherical_conformal_map(const GluedMesh& glued, const SphericalOptions& options = {},
                                                      SolveLog* log = nullptr);

/// Per-face |mu| of the map from the flat spherical triangles to the glued
/// surface.
[[nodiscard]] std::vector<double> sphere_distortion(const GluedMesh& glued, const SphereEmbedding& sphere);

/// Number of faces whose orientation det[p0, p1, p2] disagrees with the
/// majority sign.
[[nodiscard]] std::size_t sphere_orientation_outliers(std::span<const Face> faces, const SphereEmbedding& sphere);

}  // namespace diskmap
