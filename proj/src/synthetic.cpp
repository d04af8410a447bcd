#include "diskmap/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "diskmap/error.hpp"

namespace diskmap::synthetic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 planar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta), 0.0}; }

}  // namespace

// ---------------------------------------------------------------------------
// Ring meshes
// ---------------------------------------------------------------------------

TriMesh ring_mesh(const std::vector<Ring>& rings, const Embedding& embed) {
    std::vector<Vec3> positions;
    std::vector<int> start;
    for (const Ring& ring : rings) {
        if (ring.count < 1 || (ring.count == 1 && !start.empty())) throw Error("invalid ring layout");
        if (ring.count == 2) throw Error("a ring needs one or at least three vertices");
        start.push_back(static_cast<int>(positions.size()));
        for (int j = 0; j < ring.count; ++j) {
            positions.push_back(embed(ring.radius, ring.phase + kTwoPi * j / ring.count));
        }
    }

    std::vector<Face> faces;
    for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
        const Ring& A = rings[k];
        const Ring& B = rings[k + 1];
        const int a = A.count;
        const int b = B.count;
        const int sa = start[k];
        const int sb = start[k + 1];
        if (a == 1) {
            for (int j = 0; j < b; ++j) faces.push_back({sa, sb + j, sb + (j + 1) % b});
            continue;
        }
        // Start B at the vertex angularly closest to A's first vertex.
        const double a0 = A.phase;
        const int j0 = static_cast<int>(std::lround((a0 - B.phase) * b / kTwoPi)) % b;
        const int jstart = (j0 + b) % b;
        double offset = std::remainder(B.phase + kTwoPi * jstart / b - a0, kTwoPi);
        auto angle_a = [&](int i) { return a0 + kTwoPi * i / a; };
        auto angle_b = [&](int t) { return a0 + offset + kTwoPi * t / b; };
        auto va = [&](int i) { return sa + i % a; };
        auto vb = [&](int t) { return sb + (jstart + t) % b; };
        int i = 0;
        int t = 0;
        while (i < a || t < b) {
            const bool advance_a = t >= b || (i < a && angle_a(i + 1) < angle_b(t + 1));
            if (advance_a) {
                faces.push_back({va(i), vb(t), va(i + 1)});
                ++i;
            } else {
                faces.push_back({va(i), vb(t), vb(t + 1)});
                ++t;
            }
        }
    }
    return TriMesh(std::move(positions), std::move(faces));
}

std::vector<Ring> disk_rings(std::size_t target_faces) {
    const int m = std::max(1, static_cast<int>(std::lround(std::sqrt(target_faces / kTwoPi))));
    std::vector<Ring> rings{{0.0, 1}};
    for (int k = 1; k <= m; ++k) {
        rings.push_back({static_cast<double>(k) / m, std::max(3, static_cast<int>(std::lround(kTwoPi * k)))});
    }
    return rings;
}

// ---------------------------------------------------------------------------
// Test surfaces
// ---------------------------------------------------------------------------

TriMesh flat_disk(std::size_t target_faces) { return ring_mesh(disk_rings(target_faces), planar); }

TriMesh hemisphere(std::size_t target_faces) {
    const int m = std::max(1, static_cast<int>(std::lround(std::sqrt(kPi * target_faces / 16.0))));
    std::vector<Ring> rings{{0.0, 1}};
    for (int k = 1; k <= m; ++k) {
        const double polar = 0.5 * kPi * k / m;
        rings.push_back({static_cast<double>(k) / m,
                         std::max(3, static_cast<int>(std::lround(4.0 * m * std::sin(polar))))});
    }
    return ring_mesh(rings, [](double r, double theta) {
        const double polar = 0.5 * kPi * r;
        return Vec3(std::sin(polar) * std::cos(theta), std::sin(polar) * std::sin(theta), -std::cos(polar));
    });
}

TriMesh bumpy_disk(std::size_t target_faces) {
    static const std::array<std::array<double, 2>, 3> centers{{{0.3, 0.2}, {-0.35, 0.25}, {0.05, -0.4}}};
    return ring_mesh(disk_rings(target_faces), [](double r, double theta) {
        Vec3 p = planar(r, theta);
        for (const auto& c : centers) {
            const double dx = p.x() - c[0];
            const double dy = p.y() - c[1];
            p.z() += 0.3 * std::exp(-(dx * dx + dy * dy) / (2.0 * 0.2 * 0.2));
        }
        return p;
    });
}

TriMesh saddle(std::size_t target_faces) {
    return ring_mesh(disk_rings(target_faces), [](double r, double theta) {
        Vec3 p = planar(r, theta);
        p.z() = 0.5 * (p.x() * p.x() - p.y() * p.y());
        return p;
    });
}

TriMesh irregular_disk(std::size_t target_faces, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> count_scale(0.8, 1.25);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);

    const auto base = disk_rings(target_faces);
    const int m = static_cast<int>(base.size()) - 1;
    const double h = 1.0 / m;
    std::vector<Ring> rings{{0.0, 1}};
    for (int k = 1; k <= m; ++k) {
        const int count = std::max(3, static_cast<int>(std::lround(kTwoPi * k * count_scale(rng))));
        rings.push_back({static_cast<double>(k) / m, count, phase(rng)});
        if (k % 4 == 2 && k < m) {
            // A closely spaced companion ring.
            rings.push_back({(k + 0.2) / m, count + 1, phase(rng)});
        }
    }
    // Jitter each vertex radially by up to 5% of the ring spacing and along
    // its ring by up to 20% of the vertex spacing. Boundary radii stay at 1.
    std::vector<int> counts;
    for (const Ring& r : rings) counts.push_back(r.count);
    std::size_t ring = 0;
    int left = rings.front().count;
    return ring_mesh(rings, [&](double r, double theta) {
        if (left == 0) left = rings[++ring].count;
        --left;
        const double dr = r > 0.0 && r < 1.0 ? 0.05 * h * unit(rng) : 0.0;
        const double dt = 0.2 * kTwoPi / counts[ring] * unit(rng);
        return planar(r + dr, theta + dt);
    });
}

TriMesh sliver_disk(std::size_t target_faces) {
    const auto base = disk_rings(target_faces);
    const int m = static_cast<int>(base.size()) - 1;
    std::vector<Ring> rings;
    for (int k = 0; k <= m; ++k) {
        rings.push_back(base[k]);
        if (k > 0 && k < m && k % 3 == 0) {
            const Ring& r = base[k];
            rings.push_back({r.radius + 0.015 / m, r.count, kPi / r.count});
        }
    }
    return ring_mesh(rings, planar);
}

const std::vector<std::string>& kinds() {
    static const std::vector<std::string> names{"flat", "irregular", "hemisphere", "bumpy", "saddle", "sliver"};
    return names;
}

TriMesh by_name(const std::string& kind, std::size_t target_faces) {
    if (kind == "flat") return flat_disk(target_faces);
    if (kind == "hemisphere") return hemisphere(target_faces);
    if (kind == "bumpy") return bumpy_disk(target_faces);
    if (kind == "saddle") return saddle(target_faces);
    if (kind == "irregular") return irregular_disk(target_faces);
    if (kind == "sliver") return sliver_disk(target_faces);
    throw Error("unknown synthetic mesh kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Small fixtures
// ---------------------------------------------------------------------------

TriMesh single_triangle() {
    return TriMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

TriMesh tetra_minus_face() {
    // Apex 3 above the base triangle; the base face (0, 2, 1) is missing.
    return TriMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.3, 0.3, 1}}, {{0, 1, 3}, {1, 2, 3}, {2, 0, 3}});
}

TriMesh closed_tetrahedron() {
    return TriMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0.3, 0.3, 1}},
                   {{0, 1, 3}, {1, 2, 3}, {2, 0, 3}, {0, 2, 1}});
}

TriMesh two_triangle_square() {
    return TriMesh({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}});
}

TriMesh bowtie() {
    return TriMesh({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {-1, 0, 0}, {-1, -1, 0}}, {{0, 1, 2}, {0, 3, 4}});
}

}  // namespace diskmap::synthetic
