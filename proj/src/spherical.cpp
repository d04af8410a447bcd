#include "diskmap/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diskmap/error.hpp"

namespace diskmap {

// ---------------------------------------------------------------------------
// Anchor triangle
// ---------------------------------------------------------------------------

namespace {

double source_area(const GluedMesh& glued) {
    double a = 0.0;
    for (std::size_t f = 0; f < glued.source_faces; ++f) a += glued.mesh.face_area(static_cast<int>(f));
    return a;
}

double min_angle(const TriMesh& mesh, int f) {
    const Face& t = mesh.face(f);
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        m = std::min(m, corner_angle(mesh.vertex(t[k]), mesh.vertex(t[(k + 1) % 3]), mesh.vertex(t[(k + 2) % 3])));
    }
    return m;
}

int best_face(const GluedMesh& glued, bool (*accept)(const GluedMesh&, int)) {
    int best = -1;
    double best_angle = -1.0;
    for (std::size_t f = 0; f < glued.mesh.num_faces(); ++f) {
        const int fi = static_cast<int>(f);
        if (!accept(glued, fi)) continue;
        const double a = min_angle(glued.mesh, fi);
        if (a > best_angle) {
            best_angle = a;
            best = fi;
        }
    }
    return best;
}

bool off_seam(const GluedMesh& g, int f) {
    for (int v : g.mesh.face(f)) {
        if (g.copy[v] == CopyTag::seam) return false;
    }
    return true;
}

bool mirror_off_seam(const GluedMesh& g, int f) { return !g.is_original_face(f) && off_seam(g, f); }

bool any_face(const GluedMesh&, int) { return true; }

}  // namespace

AnchorTriangle anchor_from_face(const GluedMesh& glued, int f) {
    const Face& t = glued.mesh.face(f);
    const auto q = layout_in_plane(glued.mesh.vertex(t[0]), glued.mesh.vertex(t[1]), glued.mesh.vertex(t[2]));
    const double longest = std::max({std::abs(q[1] - q[0]), std::abs(q[2] - q[1]), std::abs(q[2] - q[0])});
    const double scale = 10.0 * std::sqrt(source_area(glued)) / longest;
    AnchorTriangle a;
    a.face = f;
    a.vertices = t;
    for (int k = 0; k < 3; ++k) a.target[k] = std::conj(q[k]) * scale;
    return a;
}

AnchorTriangle choose_anchor_face(const GluedMesh& glued) {
    int f = best_face(glued, mirror_off_seam);
    if (f < 0) f = best_face(glued, off_seam);
    if (f < 0) f = best_face(glued, any_face);
    if (f < 0) throw Error("cannot choose an anchor face on an empty mesh");
    return anchor_from_face(glued, f);
}

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

PlanarEmbedding harmonic_plane_map(const GluedMesh& glued, const AnchorTriangle& anchor,
                                   const SolveOptions& options, SolveLog* log) {
    std::map<int, Complex> fixed;
    for (int k = 0; k < 3; ++k) fixed[anchor.vertices[k]] = anchor.target[k];
    if (fixed.size() != 3) throw Error("anchor vertices must be distinct");
    return solve_with_dirichlet(cotangent_laplacian(glued), fixed, {}, options, log);
}

Vec3 inverse_stereographic(Complex z) {
    const double r2 = std::norm(z);
    const double d = 1.0 + r2;
    Vec3 p(2.0 * z.real() / d, 2.0 * z.imag() / d, (r2 - 1.0) / d);
    return p / p.norm();
}

SphereEmbedding inverse_stereographic(const PlanarEmbedding& plane) {
    SphereEmbedding out(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) out[i] = inverse_stereographic(plane[i]);
    return out;
}

Complex stereographic_project(const Vec3& p) {
    const double d = 1.0 - p.z();
    if (d < 1e-12) throw Error("cannot project a point at the North pole");
    return {p.x() / d, p.y() / d};
}

PlanarEmbedding stereographic_project(const SphereEmbedding& sphere) {
    PlanarEmbedding out(sphere.size());
    for (std::size_t i = 0; i < sphere.size(); ++i) out[i] = stereographic_project(sphere[i]);
    return out;
}

SphereEmbedding south_pole_correction(const SphereEmbedding& sphere, const GluedMesh& glued,
                                      const SolveOptions& options, SolveLog* log, SouthPoleReport* report) {
    const std::size_t n = sphere.size();
    SouthPoleReport local;
    PlanarEmbedding w(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 p = sphere[i];
        if (1.0 + p.z() < 1e-12) {
            p = Vec3(p.x() + 1e-9, p.y(), p.z()).normalized();
            ++local.perturbed;
        }
        const double d = 1.0 + p.z();
        w[i] = Complex(p.x() / d, p.y() / d);
    }
    if (local.perturbed && log) {
        log->warnings.push_back(std::to_string(local.perturbed) +
                                " vertex/vertices at the South pole were perturbed by 1e-9");
    }

    std::vector<double> modulus(n);
    for (std::size_t i = 0; i < n; ++i) modulus[i] = std::abs(w[i]);
    std::vector<double> sorted = modulus;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(n / 2), sorted.end());
    const double radius = 2.0 * sorted[n / 2];

    std::map<int, Complex> fixed;
    for (std::size_t i = 0; i < n; ++i) {
        if (modulus[i] > radius) fixed[static_cast<int>(i)] = w[i];
    }
    local.fixed = fixed.size();
    if (fixed.empty() || fixed.size() == n) {
        if (report) *report = local;
        return sphere;
    }

    const auto& faces = glued.mesh.faces();
    const BeltramiField mu = beltrami_coefficient(faces, w, glued.mesh.vertices());
    const PlanarEmbedding corrected = lbs_reconstruct(faces, w, mu, fixed, options, log, &local.clamp);

    SphereEmbedding out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (fixed.count(static_cast<int>(i))) {
            out[i] = sphere[i];
            continue;
        }
        const Complex v = corrected[i];
        const double r2 = std::norm(v);
        const double d = 1.0 + r2;
        out[i] = Vec3(2.0 * v.real() / d, 2.0 * v.imag() / d, (1.0 - r2) / d).normalized();
    }
    if (report) *report = local;
    return out;
}

namespace {

/// Similarity of the plane before lifting to the sphere: the vertex mean goes
/// to the origin and the scale balances the anchor triangle (near the North
/// pole) against the innermost triangle (near the South pole).
// The three-point harmonic map is a conformal map followed by a global
// affine stretch w -> a w + b conj(w), so the Beltrami coefficient of the
// plane -> surface map is close to one constant nu. Composing with
// w -> w + nu conj(w) cancels it.
void remove_affine_stretch(PlanarEmbedding& z, const GluedMesh& glued, const AnchorTriangle& anchor) {
    const auto& faces = glued.mesh.faces();
    for (int iter = 0; iter < 3; ++iter) {
        const BeltramiField mu = beltrami_coefficient(faces, z, glued.mesh.vertices());
        Complex nu(0.0, 0.0);
        double weight = 0.0;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (static_cast<int>(f) == anchor.face || !std::isfinite(std::abs(mu[f]))) continue;
            const double a = glued.mesh.face_area(static_cast<int>(f));
            nu += a * mu[f];
            weight += a;
        }
        if (!(weight > 0.0)) return;
        nu /= weight;
        if (!(std::abs(nu) < 0.5)) return;
        if (std::abs(nu) < 1e-12) return;
        for (Complex& c : z) c += nu * std::conj(c);
    }
}

void balance_plane(PlanarEmbedding& z, const GluedMesh& glued, const AnchorTriangle& anchor) {
    Complex mean(0.0, 0.0);
    for (const Complex& c : z) mean += c;
    mean /= static_cast<double>(z.size());
    for (Complex& c : z) c -= mean;

    const auto& faces = glued.mesh.faces();
    auto mean_side = [&](const Face& t, auto&& coord) {
        return (std::abs(coord(t[0]) - coord(t[1])) + std::abs(coord(t[1]) - coord(t[2])) +
                std::abs(coord(t[2]) - coord(t[0]))) /
               3.0;
    };
    int inner = -1;
    double inner_sum = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (static_cast<int>(f) == anchor.face) continue;
        const Face& t = faces[f];
        const double s = std::abs(z[t[0]]) + std::abs(z[t[1]]) + std::abs(z[t[2]]);
        if (s < inner_sum) {
            inner_sum = s;
            inner = static_cast<int>(f);
        }
    }
    if (inner < 0) return;
    const double north = mean_side(faces[anchor.face], [&](int v) { return z[v]; });
    // South-pole chart coordinate 1 / conj(z); the innermost face never
    // contains the origin as a vertex in practice, guard anyway.
    const Face& t = faces[inner];
    for (int v : t) {
        if (z[v] == Complex(0.0, 0.0)) return;
    }
    const double south = mean_side(t, [&](int v) { return 1.0 / std::conj(z[v]); });
    if (!(north > 0.0) || !(south > 0.0) || !std::isfinite(south)) return;
    const double scale = std::sqrt(south / north);
    for (Complex& c : z) c *= scale;
}

}  // namespace

SphericalResult spherical_conformal_map(const GluedMesh& glued, const SphericalOptions& options, SolveLog* log) {
    SphericalResult r;
    r.anchor = choose_anchor_face(glued);
    PlanarEmbedding z = harmonic_plane_map(glued, r.anchor, options.solve, log);
    remove_affine_stretch(z, glued, r.anchor);
    balance_plane(z, glued, r.anchor);
    r.sphere = inverse_stereographic(z);
    if (!options.skip_south_pole) {
        r.sphere = south_pole_correction(r.sphere, glued, options.solve, log, &r.south_pole);
    }
    return r;
}

std::vector<double> sphere_distortion(const GluedMesh& glued, const SphereEmbedding& sphere) {
    const BeltramiField mu = beltrami_coefficient(glued.mesh.faces(), sphere, glued.mesh.vertices());
    std::vector<double> out(mu.size());
    for (std::size_t f = 0; f < mu.size(); ++f) out[f] = std::abs(mu[f]);
    return out;
}

std::size_t sphere_orientation_outliers(std::span<const Face> faces, const SphereEmbedding& sphere) {
    std::size_t pos = 0;
    std::size_t neg = 0;
    for (const Face& t : faces) {
        const double det = sphere[t[0]].dot(sphere[t[1]].cross(sphere[t[2]]));
        if (det > 0.0) ++pos;
        else ++neg;
    }
    return std::min(pos, neg);
}

}  // namespace diskmap
