#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "diskmap/mesh.hpp"

namespace diskmap {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Per-face cotangents of the three corner angles, ordered like the face.
using FaceCotangents = std::vector<std::array<double, 3>>;

[[nodiscard]] FaceCotangents face_cotangents(const TriMesh& mesh);

/// Laplacian from per-face cotangents: A_ij = k_ij = cot a + cot b for
/// adjacent i != j, A_ii = -sum_j k_ij. Diagonal entries are accumulated in
/// face order so that meshes with identical face sequences get bit-identical
/// rows.
[[nodiscard]] SparseMatrix laplacian_from_cotangents(std::size_t num_vertices,
                                                     std::span<const Face> faces,
                                                     const FaceCotangents& cot);

/// Cotangent Laplacian of a triangle mesh (negative semidefinite, rows sum
/// to zero). Negative weights from obtuse angles are kept.
[[nodiscard]] SparseMatrix cotangent_laplacian(const TriMesh& mesh);

/// Cotangent weight of every undirected edge, keyed by (min, max) vertex.
[[nodiscard]] std::map<std::pair<int, int>, double> cotangent_weights(const TriMesh& mesh);

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

struct SolveOptions {
    /// Required relative residual ||Ax - b|| / ||b|| per right-hand side.
    double tolerance = 1e-10;
};

/// Bookkeeping shared across a pipeline run.
struct SolveLog {
    int systems = 0;  ///< factorized systems
    int columns = 0;  ///< right-hand sides solved
    double max_relative_residual = 0.0;
    std::vector<std::string> warnings;
};

/// Solves A X = B for symmetric positive definite A. Tries a sparse
/// Cholesky factorization first, then LDL^T (with a warning) and finally
/// conjugate gradients. Throws SolverError when no method meets the
/// residual tolerance or the matrix is numerically singular.
[[nodiscard]] Eigen::MatrixXd solve_spd(const SparseMatrix& A, const Eigen::MatrixXd& B,
                                        const SolveOptions& options = {}, SolveLog* log = nullptr);

/// Solves the free rows of A x = rhs with x fixed on `fixed`. Works with a
/// Laplacian of either sign: if the free block has a negative diagonal it is
/// negated before factorization. `rhs` may be empty (zero). Both the real and
/// imaginary parts share one factorization.
[[nodiscard]] std::vector<Complex> solve_with_dirichlet(const SparseMatrix& A,
                                                        const std::map<int, Complex>& fixed,
                                                        const std::vector<Complex>& rhs = {},
                                                        const SolveOptions& options = {},
                                                        SolveLog* log = nullptr);

}  // namespace diskmap
