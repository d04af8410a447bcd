#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "diskmap/mesh.hpp"
#include "diskmap/quasiconformal.hpp"

namespace diskmap {

struct HistogramOptions {
    std::size_t bins = 100;
    double lo = -10.0;
    double hi = 10.0;
};

/// Uniform bins over [lo, hi) plus outlier counts on both sides; the last
/// bin also takes values equal to hi.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    std::size_t underflow = 0;
    std::size_t overflow = 0;

    [[nodiscard]] std::size_t total() const;
};

[[nodiscard]] Histogram make_histogram(std::span<const double> values, const HistogramOptions& options = {});

struct DistortionReport {
    /// uv angle minus surface angle in degrees, per face corner; NaN on
    /// excluded faces.
    std::vector<std::array<double, 3>> corner_deg;
    double mean_abs_deg = 0.0;
    double sd_abs_deg = 0.0;  ///< sample standard deviation of |distortion|
    double max_abs_deg = 0.0;
    std::size_t included_corners = 0;
    /// Faces with a degenerate uv image, left out of the statistics.
    std::vector<int> degenerate_faces;
    Histogram histogram;
    std::size_t flips = 0;
};

/// Per-corner angular distortion statistics of a parameterization.
/// Throws Error when uv does not have one entry per vertex.
[[nodiscard]] DistortionReport angular_distortion(const TriMesh& mesh, const PlanarEmbedding& uv,
                                                  const HistogramOptions& options = {});

struct BijectivityReport {
    std::vector<int> flipped_faces;  ///< signed uv area <= 0
    bool boundary_simple = false;

    [[nodiscard]] std::size_t flips() const noexcept { return flipped_faces.size(); }
};

[[nodiscard]] BijectivityReport bijectivity_report(const TriMesh& mesh, const PlanarEmbedding& uv);

/// True when the closed polygon has no self-intersections. Consecutive
/// edges may only meet at their shared vertex.
[[nodiscard]] bool polygon_is_simple(std::span<const Complex> polygon);

/// |mu| statistics of the surface -> uv map.
[[nodiscard]] DilationSummary conformality_stats(const TriMesh& mesh, const PlanarEmbedding& uv);

}  // namespace diskmap
