#pragma once

#include <array>
#include <map>
#include <vector>

#include "diskmap/mesh.hpp"
#include "diskmap/sparse.hpp"

namespace diskmap {

/// Per-face Beltrami coefficient mu = f_zbar / f_z.
using BeltramiField = std::vector<Complex>;

// ---------------------------------------------------------------------------
// Per-face stencils
// ---------------------------------------------------------------------------

/// Coefficients of the elliptic operator div(A grad u) for a given mu.
/// The matrix [[a1, a2], [a2, a3]] has unit determinant when |mu| < 1.
struct AlphaCoefficients {
    double a1;
    double a2;
    double a3;
};

[[nodiscard]] AlphaCoefficients alpha_coefficients(Complex mu);

/// Gradient of the linear interpolant on a planar triangle: for corner
/// values w, d/dx = dx . w and d/dy = dy . w. `area` is the signed area,
/// so the stencil stays exact on clockwise triangles.
struct FaceDerivativeStencil {
    std::array<double, 3> dx;
    std::array<double, 3> dy;
    double area;
};

[[nodiscard]] FaceDerivativeStencil derivative_stencil(Complex p0, Complex p1, Complex p2);

/// Discrete divergence weights: A_i = (h_j - h_k) / area, B_i = (g_k - g_j) / area
/// for the cyclic corner triple (i, j, k) and p = g + i h.
struct DivergenceStencil {
    std::array<double, 3> a;
    std::array<double, 3> b;
};

[[nodiscard]] DivergenceStencil divergence_stencil(Complex p0, Complex p1, Complex p2);

/// Wirtinger derivatives of a piecewise-linear map, per face.
struct Wirtinger {
    Complex fz;
    Complex fzbar;
};

[[nodiscard]] std::vector<Wirtinger> wirtinger_derivatives(std::span<const Face> faces,
                                                          const PlanarEmbedding& source,
                                                          const PlanarEmbedding& target);

// ---------------------------------------------------------------------------
// Beltrami coefficients
// ---------------------------------------------------------------------------

/// mu of the piecewise-linear map source -> target (plane to plane). Faces
/// whose image collapses get |mu| = 1. Throws MeshError on degenerate source
/// faces.
[[nodiscard]] BeltramiField beltrami_coefficient(std::span<const Face> faces,
                                                 const PlanarEmbedding& source,
                                                 const PlanarEmbedding& target);

/// mu of a plane -> surface map. Each target triangle is laid flat with
/// layout_in_plane(). On clockwise source faces the coefficient of the
/// induced metric, 1 / conj(mu), is returned so that the value always
/// describes the conformal structure the surface imposes on the plane.
[[nodiscard]] BeltramiField beltrami_coefficient(std::span<const Face> faces,
                                                 const PlanarEmbedding& source,
                                                 const std::vector<Vec3>& target);

/// mu between two triangulated surfaces, each face laid flat with
/// layout_in_plane() on both sides.
[[nodiscard]] BeltramiField beltrami_coefficient(std::span<const Face> faces,
                                                 const std::vector<Vec3>& source,
                                                 const std::vector<Vec3>& target);

/// mu of a surface -> plane map; each source face is laid flat with
/// layout_in_plane(), so a target face with the opposite orientation gets
/// |mu| > 1.
[[nodiscard]] BeltramiField beltrami_coefficient(std::span<const Face> faces,
                                                 const std::vector<Vec3>& source,
                                                 const PlanarEmbedding& target);

/// Beltrami coefficient of g o f from mu_f, mu_g (sampled at f) and the
/// per-face ratio conj(f_z) / f_z. Faces with a vanishing denominator get
/// NaN and are appended to `flagged`.
[[nodiscard]] BeltramiField compose_beltrami(const BeltramiField& mu_f, const BeltramiField& mu_g_of_f,
                                             const std::vector<Complex>& fz_ratio,
                                             std::vector<int>* flagged = nullptr);

// ---------------------------------------------------------------------------
// Linear Beltrami solver
// ---------------------------------------------------------------------------

struct ClampReport {
    std::size_t clamped = 0;
    double max_input_modulus = 0.0;
};

inline constexpr double kMuClamp = 0.98;

/// Rescales every coefficient with |mu| >= limit to modulus `limit`.
[[nodiscard]] BeltramiField clamp_beltrami(BeltramiField mu, double limit = kMuClamp,
                                           ClampReport* report = nullptr);

/// Stiffness matrix sum_T |area_T| grad(phi_i)^T A_T grad(phi_j); symmetric
/// positive semidefinite. `mu` is used as given (clamp first).
[[nodiscard]] SparseMatrix lbs_matrix(std::span<const Face> faces, const PlanarEmbedding& domain,
                                      const BeltramiField& mu);

/// Reconstructs the map with Beltrami coefficient `mu` and Dirichlet data
/// `boundary`. Coefficients are clamped to kMuClamp first.
[[nodiscard]] PlanarEmbedding lbs_reconstruct(std::span<const Face> faces, const PlanarEmbedding& domain,
                                              const BeltramiField& mu,
                                              const std::map<int, Complex>& boundary,
                                              const SolveOptions& options = {}, SolveLog* log = nullptr,
                                              ClampReport* clamp = nullptr);

// ---------------------------------------------------------------------------
// Dilation
// ---------------------------------------------------------------------------

struct DilationSummary {
    std::vector<double> abs_mu;
    double mean_abs_mu = 0.0;
    double sup_abs_mu = 0.0;
    /// (1 + sup) / (1 - sup); +inf when sup >= 1.
    double K = 1.0;
    bool K_infinite = false;
    /// Histogram of |mu| over [0, 1) in uniform bins; `overflow` counts |mu| >= 1.
    std::vector<double> hist_edges;
    std::vector<std::size_t> hist_counts;
    std::size_t hist_overflow = 0;
};

[[nodiscard]] DilationSummary dilation_summary(const BeltramiField& mu, std::size_t bins = 20);

}  // namespace diskmap
