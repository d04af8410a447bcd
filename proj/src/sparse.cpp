#include "diskmap/sparse.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include "diskmap/error.hpp"

namespace diskmap {

// ---------------------------------------------------------------------------
// Cotangent Laplacian
// ---------------------------------------------------------------------------

FaceCotangents face_cotangents(const TriMesh& mesh) {
    FaceCotangents cot(mesh.num_faces());
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& t = mesh.face(static_cast<int>(f));
        for (int k = 0; k < 3; ++k) {
            const Vec3 u = mesh.vertex(t[(k + 1) % 3]) - mesh.vertex(t[k]);
            const Vec3 v = mesh.vertex(t[(k + 2) % 3]) - mesh.vertex(t[k]);
            const double cross = u.cross(v).norm();
            if (cross == 0.0) {
                throw MeshError("face " + std::to_string(f) + " is degenerate", {static_cast<int>(f)});
            }
            cot[f][k] = u.dot(v) / cross;
        }
    }
    return cot;
}

SparseMatrix laplacian_from_cotangents(std::size_t num_vertices, std::span<const Face> faces,
                                       const FaceCotangents& cot) {
    std::vector<Triplet> triplets;
    triplets.reserve(6 * faces.size() + num_vertices);
    std::vector<double> diag(num_vertices, 0.0);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        for (int k = 0; k < 3; ++k) {
            const int i = t[(k + 1) % 3];
            const int j = t[(k + 2) % 3];
            triplets.emplace_back(i, j, cot[f][k]);
            triplets.emplace_back(j, i, cot[f][k]);
        }
        // The two edges at corner k are opposite the other two corners.
        for (int k = 0; k < 3; ++k) diag[t[k]] -= cot[f][(k + 1) % 3] + cot[f][(k + 2) % 3];
    }
    for (std::size_t i = 0; i < num_vertices; ++i) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diag[i]);
    }
    const auto n = static_cast<Eigen::Index>(num_vertices);
    SparseMatrix A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    return A;
}

SparseMatrix cotangent_laplacian(const TriMesh& mesh) {
    return laplacian_from_cotangents(mesh.num_vertices(), mesh.faces(), face_cotangents(mesh));
}

std::map<std::pair<int, int>, double> cotangent_weights(const TriMesh& mesh) {
    const auto cot = face_cotangents(mesh);
    std::map<std::pair<int, int>, double> w;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& t = mesh.face(static_cast<int>(f));
        for (int k = 0; k < 3; ++k) {
            const int i = t[(k + 1) % 3];
            const int j = t[(k + 2) % 3];
            w[{std::min(i, j), std::max(i, j)}] += cot[f][k];
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

namespace {

double max_relative_residual(const SparseMatrix& A, const Eigen::MatrixXd& X, const Eigen::MatrixXd& B) {
    const Eigen::MatrixXd R = A * X - B;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < B.cols(); ++c) {
        const double bn = B.col(c).norm();
        const double rn = R.col(c).norm();
        worst = std::max(worst, bn > 0.0 ? rn / bn : rn);
    }
    return std::isfinite(worst) ? worst : std::numeric_limits<double>::infinity();
}

template <class Solver>
bool refine(const Solver& solver, const SparseMatrix& A, const Eigen::MatrixXd& B,
            Eigen::MatrixXd& X, double tol, double& residual) {
    residual = max_relative_residual(A, X, B);
    for (int iter = 0; iter < 3 && residual > tol; ++iter) {
        const Eigen::MatrixXd D = solver.solve(B - A * X);
        X += D;
        residual = max_relative_residual(A, X, B);
    }
    return residual <= tol;
}

void warn(SolveLog* log, std::string msg) {
    if (log) log->warnings.push_back(std::move(msg));
}

}  // namespace

Eigen::MatrixXd solve_spd(const SparseMatrix& A, const Eigen::MatrixXd& B, const SolveOptions& options,
                          SolveLog* log) {
    if (A.rows() != A.cols() || A.rows() != B.rows()) {
        throw SolverError("dimension mismatch: matrix " + std::to_string(A.rows()) + "x" +
                          std::to_string(A.cols()) + ", right-hand side " + std::to_string(B.rows()) +
                          " rows");
    }
    if (log) {
        ++log->systems;
        log->columns += static_cast<int>(B.cols());
    }
    if (A.rows() == 0) return Eigen::MatrixXd(0, B.cols());

    const double tol = options.tolerance;
    double residual = std::numeric_limits<double>::infinity();
    auto record = [&](const Eigen::MatrixXd& X) {
        if (log) log->max_relative_residual = std::max(log->max_relative_residual, residual);
        return X;
    };

    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(A);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd X = llt.solve(B);
        if (refine(llt, A, B, X, tol, residual)) return record(X);
    }
    const std::string llt_state =
        llt.info() == Eigen::Success ? "Cholesky residual " + std::to_string(residual) : "Cholesky failed";

    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(A);
    if (ldlt.info() == Eigen::Success) {
        Eigen::MatrixXd X = ldlt.solve(B);
        if (refine(ldlt, A, B, X, tol, residual)) {
            warn(log, "matrix of size " + std::to_string(A.rows()) +
                          " is not numerically positive definite (" + llt_state +
                          "); solved as symmetric indefinite");
            return record(X);
        }
    }

    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(tol * 0.1);
    cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * A.rows()));
    cg.compute(A);
    if (cg.info() == Eigen::Success) {
        Eigen::MatrixXd X = cg.solve(B);
        residual = max_relative_residual(A, X, B);
        if (residual <= tol) {
            warn(log, "direct factorizations failed for size " + std::to_string(A.rows()) +
                          "; conjugate gradients converged");
            return record(X);
        }
    }
    throw SolverError("could not solve system of size " + std::to_string(A.rows()) + " (" + llt_state +
                      "; best relative residual " + std::to_string(residual) + ", tolerance " +
                      std::to_string(tol) + "); the matrix is singular or not positive definite");
}

std::vector<Complex> solve_with_dirichlet(const SparseMatrix& A, const std::map<int, Complex>& fixed,
                                          const std::vector<Complex>& rhs, const SolveOptions& options,
                                          SolveLog* log) {
    const auto n = static_cast<std::size_t>(A.rows());
    if (A.rows() != A.cols()) throw SolverError("matrix is not square");
    if (fixed.empty()) throw SolverError("Dirichlet solve needs at least one fixed vertex");
    if (!rhs.empty() && rhs.size() != n) throw SolverError("right-hand side has the wrong length");

    std::vector<Complex> x(n, Complex(0.0, 0.0));
    std::vector<int> free_index(n, -1);
    std::vector<int> free_vertices;
    for (const auto& [v, value] : fixed) {
        if (v < 0 || static_cast<std::size_t>(v) >= n) {
            throw SolverError("fixed vertex " + std::to_string(v) + " out of range");
        }
        x[v] = value;
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (!fixed.count(static_cast<int>(v))) {
            free_index[v] = static_cast<int>(free_vertices.size());
            free_vertices.push_back(static_cast<int>(v));
        }
    }
    const auto m = static_cast<Eigen::Index>(free_vertices.size());
    if (m == 0) return x;

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!rhs.empty()) {
            B(i, 0) = rhs[free_vertices[i]].real();
            B(i, 1) = rhs[free_vertices[i]].imag();
        }
    }

    std::vector<Triplet> triplets;
    std::vector<int> parent(static_cast<std::size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::vector<bool> touches_fixed(static_cast<std::size_t>(m), false);
    double diag_sum = 0.0;

    for (Eigen::Index col = 0; col < A.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
            const int fi = free_index[it.row()];
            if (fi < 0 || it.value() == 0.0) continue;
            const int fj = free_index[it.col()];
            if (fj >= 0) {
                triplets.emplace_back(fi, fj, it.value());
                if (fi == fj) diag_sum += it.value();
                else parent[find(fi)] = find(fj);
            } else {
                const Complex xc = x[it.col()];
                B(fi, 0) -= it.value() * xc.real();
                B(fi, 1) -= it.value() * xc.imag();
                touches_fixed[fi] = true;
            }
        }
    }

    std::vector<bool> anchored(static_cast<std::size_t>(m), false);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (touches_fixed[i]) anchored[find(static_cast<int>(i))] = true;
    }
    std::size_t floating = 0;
    for (Eigen::Index i = 0; i < m; ++i) floating += !anchored[find(static_cast<int>(i))];
    if (floating > 0) {
        warn(log, std::to_string(floating) +
                      " free vertices belong to components without any fixed vertex; the system is singular");
    }

    SparseMatrix Aff(m, m);
    Aff.setFromTriplets(triplets.begin(), triplets.end());
    if (diag_sum < 0.0) {
        Aff = -Aff;
        B = -B;
    }
    const Eigen::MatrixXd X = solve_spd(Aff, B, options, log);
    for (Eigen::Index i = 0; i < m; ++i) x[free_vertices[i]] = Complex(X(i, 0), X(i, 1));
    return x;
}

}  // namespace diskmap
