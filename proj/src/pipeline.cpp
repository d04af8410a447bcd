#include "diskmap/pipeline.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "diskmap/error.hpp"

namespace diskmap {

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

namespace {

Vec3 seam_plane_normal(const SphereEmbedding& sphere, const GluedMesh& glued) {
    Vec3 mean = Vec3::Zero();
    for (int v : glued.seam) mean += sphere[v];
    mean /= static_cast<double>(glued.seam.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int v : glued.seam) {
        const Vec3 d = sphere[v] - mean;
        cov += d * d.transpose();
    }
    Vec3 n = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(cov).eigenvectors().col(0);
    Vec3 interior = Vec3::Zero();
    for (std::size_t v = 0; v < glued.source_vertices; ++v) {
        if (glued.copy[v] == CopyTag::original) interior += sphere[v];
    }
    if (n.dot(interior - mean) < 0.0) n = -n;
    return n;
}

}  // namespace

SphereEmbedding mobius_to_hemispheres(const SphereEmbedding& sphere, const GluedMesh& glued) {
    Vec3 centroid = Vec3::Zero();
    double weight = 0.0;
    for (std::size_t f = 0; f < glued.source_faces; ++f) {
        const Face& t = glued.mesh.face(static_cast<int>(f));
        const Vec3& a = sphere[t[0]];
        const Vec3& b = sphere[t[1]];
        const Vec3& c = sphere[t[2]];
        const double area = 0.5 * (b - a).cross(c - a).norm();
        centroid += area * (a + b + c) / 3.0;
        weight += area;
    }
    Vec3 dir = centroid;
    if (!(dir.norm() > 1e-12 * std::max(weight, 1e-300))) dir = seam_plane_normal(sphere, glued);
    const Eigen::Quaterniond rot = Eigen::Quaterniond::FromTwoVectors(dir.normalized(), Vec3(0.0, 0.0, -1.0));

    SphereEmbedding out(sphere.size());
    for (std::size_t i = 0; i < sphere.size(); ++i) out[i] = (rot * sphere[i]).normalized();

    // |P(p)| = sqrt((1 + z) / (1 - z)), so log |P(p)| = atanh(z) and scaling
    // the plane by 1/c shifts atanh(z) by -log c.
    double log_c = 0.0;
    for (int v : glued.seam) log_c += std::atanh(std::clamp(out[v].z(), -1.0, 1.0));
    log_c /= static_cast<double>(glued.seam.size());
    if (!std::isfinite(log_c)) throw PipelineError("mobius", "a seam vertex sits on a pole");

    for (Vec3& p : out) {
        const double z = std::tanh(std::atanh(std::clamp(p.z(), -1.0, 1.0)) - log_c);
        const double r = std::hypot(p.x(), p.y());
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        if (r > 0.0) {
            p = Vec3(p.x() / r * s, p.y() / r * s, z);
        } else {
            p = Vec3(0.0, 0.0, z < 0.0 ? -1.0 : 1.0);
        }
    }
    return out;
}

PlanarEmbedding normalize_boundary(PlanarEmbedding region, std::span<const int> boundary) {
    for (int v : boundary) {
        const double r = std::abs(region[v]);
        if (r == 0.0) throw Error("boundary vertex " + std::to_string(v) + " is at the origin");
        region[v] /= r;
    }
    return region;
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

double DiskParameterization::total_seconds() const {
    double s = 0.0;
    for (const auto& t : timings) s += t.seconds;
    return s;
}

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& out) : out_(out) {}
    void lap(const char* stage) {
        const auto now = std::chrono::steady_clock::now();
        out_.push_back({stage, std::chrono::duration<double>(now - start_).count()});
        start_ = now;
    }

private:
    std::vector<StageTiming>& out_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

DiskParameterization disk_conformal_parameterize(const TriMesh& mesh, const PipelineOptions& options) {
    DiskParameterization result;
    Provenance& prov = result.provenance;
    prov.skip_south_pole = options.skip_south_pole;
    prov.tolerance = options.solve.tolerance;
    StageClock clock(result.timings);

    const GluedMesh glued = double_cover(mesh);
    clock.lap("double_cover");

    // The South-pole step is run separately below so it gets its own timing.
    SphericalOptions so;
    so.skip_south_pole = true;
    so.solve = options.solve;
    SphericalResult sph = spherical_conformal_map(glued, so, &prov.solves);
    prov.anchor_face = sph.anchor.face;
    prov.anchor_on_mirror = !glued.is_original_face(sph.anchor.face);
    prov.anchor_source_face = sph.anchor.face % static_cast<int>(glued.source_faces);
    clock.lap("harmonic");

    if (!options.skip_south_pole) {
        SouthPoleReport sp;
        sph.sphere = south_pole_correction(sph.sphere, glued, options.solve, &prov.solves, &sp);
        prov.south_pole_fixed = sp.fixed;
        prov.south_pole_clamp = sp.clamp;
    }
    clock.lap("south_pole");

    const SphereEmbedding placed = mobius_to_hemispheres(sph.sphere, glued);
    PlanarEmbedding plane(mesh.num_vertices());
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        try {
            plane[v] = stereographic_project(placed[v]);
        } catch (const Error& e) {
            throw PipelineError("projection", "vertex " + std::to_string(v) + ": " + e.what());
        }
    }
    clock.lap("mobius_projection");

    result.boundary = glued.seam;
    try {
        result.region = normalize_boundary(std::move(plane), result.boundary);
    } catch (const Error& e) {
        throw PipelineError("normalization", e.what());
    }
    for (const Face& t : mesh.faces()) {
        if (signed_area2(result.region[t[0]], result.region[t[1]], result.region[t[2]]) <= 0.0) {
            ++prov.region_flips;
        }
    }
    clock.lap("normalization");

    std::map<int, Complex> fixed;
    for (int v : result.boundary) fixed[v] = result.region[v];
    try {
        const BeltramiField mu = beltrami_coefficient(mesh.faces(), result.region, mesh.vertices());
        result.uv = lbs_reconstruct(mesh.faces(), result.region, mu, fixed, options.solve, &prov.solves,
                                    &prov.final_clamp);
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError("lbs", e.what());
    }
    clock.lap("lbs");

    const InvariantCheck check = check_invariants(mesh, result.uv, result.boundary);
    if (!check.flipped.empty()) {
        throw PipelineError("lbs", std::to_string(check.flipped.size()) + " flipped face(s) in the result",
                            check.flipped);
    }
    if (!check.ok()) {
        throw PipelineError("lbs", std::to_string(check.outside.size()) +
                                       " interior vertices on or outside the unit circle; max boundary error " +
                                       std::to_string(check.max_boundary_error));
    }
    return result;
}

InvariantCheck check_invariants(const TriMesh& mesh, const PlanarEmbedding& uv, std::span<const int> boundary) {
    InvariantCheck c;
    std::vector<bool> on_boundary(mesh.num_vertices(), false);
    for (int v : boundary) {
        on_boundary[v] = true;
        c.max_boundary_error = std::max(c.max_boundary_error, std::abs(std::abs(uv[v]) - 1.0));
    }
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        if (!on_boundary[v] && !(std::abs(uv[v]) < 1.0)) c.outside.push_back(static_cast<int>(v));
    }
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& t = mesh.face(static_cast<int>(f));
        if (!(signed_area2(uv[t[0]], uv[t[1]], uv[t[2]]) > 0.0)) c.flipped.push_back(static_cast<int>(f));
    }
    return c;
}

}  // namespace diskmap
