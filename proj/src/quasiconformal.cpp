#include "diskmap/quasiconformal.hpp"

#include <cmath>
#include <limits>

#include "diskmap/error.hpp"

namespace diskmap {

// ---------------------------------------------------------------------------
// Per-face stencils
// ---------------------------------------------------------------------------

AlphaCoefficients alpha_coefficients(Complex mu) {
    const double rho = mu.real();
    const double eta = mu.imag();
    const double denom = 1.0 - rho * rho - eta * eta;
    return {((rho - 1.0) * (rho - 1.0) + eta * eta) / denom, -2.0 * eta / denom,
            ((1.0 + rho) * (1.0 + rho) + eta * eta) / denom};
}

FaceDerivativeStencil derivative_stencil(Complex p0, Complex p1, Complex p2) {
    const double area2 = signed_area2(p0, p1, p2);
    if (area2 == 0.0) throw MeshError("degenerate planar triangle");
    const double a0 = p0.real(), a1 = p1.real(), a2 = p2.real();
    const double b0 = p0.imag(), b1 = p1.imag(), b2 = p2.imag();
    return {{(b1 - b2) / area2, (b2 - b0) / area2, (b0 - b1) / area2},
            {(a2 - a1) / area2, (a0 - a2) / area2, (a1 - a0) / area2},
            0.5 * area2};
}

DivergenceStencil divergence_stencil(Complex p0, Complex p1, Complex p2) {
    const double area = 0.5 * signed_area2(p0, p1, p2);
    if (area == 0.0) throw MeshError("degenerate planar triangle");
    const std::array<Complex, 3> p{p0, p1, p2};
    DivergenceStencil s{};
    for (int i = 0; i < 3; ++i) {
        const Complex pj = p[(i + 1) % 3];
        const Complex pk = p[(i + 2) % 3];
        s.a[i] = (pj.imag() - pk.imag()) / area;
        s.b[i] = (pk.real() - pj.real()) / area;
    }
    return s;
}

namespace {

Wirtinger face_wirtinger(const FaceDerivativeStencil& s, Complex w0, Complex w1, Complex w2) {
    const Complex fx = s.dx[0] * w0 + s.dx[1] * w1 + s.dx[2] * w2;
    const Complex fy = s.dy[0] * w0 + s.dy[1] * w1 + s.dy[2] * w2;
    const Complex i(0.0, 1.0);
    return {0.5 * (fx - i * fy), 0.5 * (fx + i * fy)};
}

Complex mu_of(const Wirtinger& d) {
    if (d.fz == Complex(0.0, 0.0)) return {1.0, 0.0};
    return d.fzbar / d.fz;
}

FaceDerivativeStencil source_stencil(const Face& t, const PlanarEmbedding& source, std::size_t f) {
    const Complex p0 = source[t[0]], p1 = source[t[1]], p2 = source[t[2]];
    if (signed_area2(p0, p1, p2) == 0.0) {
        throw MeshError("source face " + std::to_string(f) + " is degenerate", {static_cast<int>(f)});
    }
    return derivative_stencil(p0, p1, p2);
}

}  // namespace

std::vector<Wirtinger> wirtinger_derivatives(std::span<const Face> faces, const PlanarEmbedding& source,
                                            const PlanarEmbedding& target) {
    std::vector<Wirtinger> out(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        out[f] = face_wirtinger(source_stencil(t, source, f), target[t[0]], target[t[1]], target[t[2]]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Beltrami coefficients
// ---------------------------------------------------------------------------

BeltramiField beltrami_coefficient(std::span<const Face> faces, const PlanarEmbedding& source,
                                   const PlanarEmbedding& target) {
    BeltramiField mu(faces.size());
    const auto d = wirtinger_derivatives(faces, source, target);
    for (std::size_t f = 0; f < faces.size(); ++f) mu[f] = mu_of(d[f]);
    return mu;
}

BeltramiField beltrami_coefficient(std::span<const Face> faces, const PlanarEmbedding& source,
                                   const std::vector<Vec3>& target) {
    BeltramiField mu(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        const auto s = source_stencil(t, source, f);
        const auto q = layout_in_plane(target[t[0]], target[t[1]], target[t[2]]);
        const Wirtinger d = face_wirtinger(s, q[0], q[1], q[2]);
        if (s.area > 0.0) {
            mu[f] = mu_of(d);
        } else if (d.fzbar == Complex(0.0, 0.0)) {
            mu[f] = Complex(1.0, 0.0);  // collapsed image
        } else {
            // 1 / conj(fzbar / fz), written so an exactly anti-conformal face gives 0.
            mu[f] = std::conj(d.fz / d.fzbar);
        }
    }
    return mu;
}

BeltramiField beltrami_coefficient(std::span<const Face> faces, const std::vector<Vec3>& source,
                                   const std::vector<Vec3>& target) {
    BeltramiField mu(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        const auto p = layout_in_plane(source[t[0]], source[t[1]], source[t[2]]);
        if (!(signed_area2(p[0], p[1], p[2]) > 0.0)) {
            throw MeshError("source face " + std::to_string(f) + " is degenerate", {static_cast<int>(f)});
        }
        const auto q = layout_in_plane(target[t[0]], target[t[1]], target[t[2]]);
        mu[f] = mu_of(face_wirtinger(derivative_stencil(p[0], p[1], p[2]), q[0], q[1], q[2]));
    }
    return mu;
}

BeltramiField beltrami_coefficient(std::span<const Face> faces, const std::vector<Vec3>& source,
                                   const PlanarEmbedding& target) {
    BeltramiField mu(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        const auto p = layout_in_plane(source[t[0]], source[t[1]], source[t[2]]);
        if (!(signed_area2(p[0], p[1], p[2]) > 0.0)) {
            throw MeshError("source face " + std::to_string(f) + " is degenerate", {static_cast<int>(f)});
        }
        mu[f] = mu_of(face_wirtinger(derivative_stencil(p[0], p[1], p[2]), target[t[0]], target[t[1]],
                                     target[t[2]]));
    }
    return mu;
}

BeltramiField compose_beltrami(const BeltramiField& mu_f, const BeltramiField& mu_g_of_f,
                               const std::vector<Complex>& fz_ratio, std::vector<int>* flagged) {
    if (mu_f.size() != mu_g_of_f.size() || mu_f.size() != fz_ratio.size()) {
        throw Error("compose_beltrami: field sizes differ");
    }
    BeltramiField out(mu_f.size());
    for (std::size_t f = 0; f < mu_f.size(); ++f) {
        const Complex r = fz_ratio[f];
        const Complex denom = 1.0 + r * std::conj(mu_f[f]) * mu_g_of_f[f];
        if (std::abs(denom) < 1e-14) {
            out[f] = Complex(std::nan(""), std::nan(""));
            if (flagged) flagged->push_back(static_cast<int>(f));
            continue;
        }
        out[f] = (mu_f[f] + r * mu_g_of_f[f]) / denom;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Linear Beltrami solver
// ---------------------------------------------------------------------------

BeltramiField clamp_beltrami(BeltramiField mu, double limit, ClampReport* report) {
    for (Complex& m : mu) {
        const double r = std::abs(m);
        if (report) report->max_input_modulus = std::max(report->max_input_modulus, r);
        if (!(r < limit)) {
            m = std::isfinite(r) && r > 0.0 ? m * (limit / r) : Complex(0.0, 0.0);
            if (report) ++report->clamped;
        }
    }
    return mu;
}

SparseMatrix lbs_matrix(std::span<const Face> faces, const PlanarEmbedding& domain, const BeltramiField& mu) {
    if (mu.size() != faces.size()) throw Error("Beltrami field size does not match face count");
    std::vector<Triplet> triplets;
    triplets.reserve(9 * faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        const auto s = source_stencil(t, domain, f);
        const auto al = alpha_coefficients(mu[f]);
        const double w = std::abs(s.area);
        for (int i = 0; i < 3; ++i) {
            // A grad(phi_i)
            const double gx = al.a1 * s.dx[i] + al.a2 * s.dy[i];
            const double gy = al.a2 * s.dx[i] + al.a3 * s.dy[i];
            for (int j = 0; j < 3; ++j) {
                triplets.emplace_back(t[i], t[j], w * (gx * s.dx[j] + gy * s.dy[j]));
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(domain.size());
    SparseMatrix K(n, n);
    K.setFromTriplets(triplets.begin(), triplets.end());
    return K;
}

PlanarEmbedding lbs_reconstruct(std::span<const Face> faces, const PlanarEmbedding& domain,
                                const BeltramiField& mu, const std::map<int, Complex>& boundary,
                                const SolveOptions& options, SolveLog* log, ClampReport* clamp) {
    if (boundary.empty()) throw Error("lbs_reconstruct needs boundary constraints");
    const BeltramiField safe = clamp_beltrami(mu, kMuClamp, clamp);
    return solve_with_dirichlet(lbs_matrix(faces, domain, safe), boundary, {}, options, log);
}

// ---------------------------------------------------------------------------
// Dilation
// ---------------------------------------------------------------------------

DilationSummary dilation_summary(const BeltramiField& mu, std::size_t bins) {
    DilationSummary s;
    s.abs_mu.reserve(mu.size());
    s.hist_counts.assign(bins, 0);
    for (std::size_t b = 0; b <= bins; ++b) s.hist_edges.push_back(static_cast<double>(b) / bins);
    double sum = 0.0;
    for (const Complex& m : mu) {
        double r = std::abs(m);
        if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
        s.abs_mu.push_back(r);
        sum += r;
        s.sup_abs_mu = std::max(s.sup_abs_mu, r);
        if (r >= 1.0) {
            ++s.hist_overflow;
        } else {
            ++s.hist_counts[std::min(bins - 1, static_cast<std::size_t>(r * bins))];
        }
    }
    s.mean_abs_mu = mu.empty() ? 0.0 : sum / static_cast<double>(mu.size());
    if (s.sup_abs_mu >= 1.0) {
        s.K_infinite = true;
        s.K = std::numeric_limits<double>::infinity();
    } else {
        s.K = (1.0 + s.sup_abs_mu) / (1.0 - s.sup_abs_mu);
    }
    return s;
}

}  // namespace diskmap
