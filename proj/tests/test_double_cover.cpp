#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "diskmap/double_cover.hpp"
#include "diskmap/error.hpp"
#include "diskmap/synthetic.hpp"

using namespace diskmap;

namespace {

// Flat disk with exactly V = 100 vertices and r = 28 on the boundary.
TriMesh disk_100_28() {
    const std::vector<synthetic::Ring> rings{{0.0, 1}, {0.2, 10}, {0.4, 16}, {0.6, 21}, {0.8, 24}, {1.0, 28}};
    return synthetic::ring_mesh(rings, [](double r, double t) { return Vec3(r * std::cos(t), r * std::sin(t), 0); });
}

long euler(const TriMesh& m) {
    const TopologyReport r = validate_topology(m);
    return static_cast<long>(r.num_vertices) - static_cast<long>(r.num_edges) + static_cast<long>(r.num_faces);
}

}  // namespace

TEST_CASE("counts of the small examples") {
    SUBCASE("single triangle becomes a pillow") {
        const GluedMesh g = double_cover(synthetic::single_triangle());
        CHECK(g.mesh.num_vertices() == 3);
        CHECK(g.mesh.num_faces() == 2);
        CHECK(validate_topology(g.mesh).num_edges == 3);
        CHECK(euler(g.mesh) == 2);
    }
    SUBCASE("tetrahedron minus a face") {
        const GluedMesh g = double_cover(synthetic::tetra_minus_face());
        CHECK(g.mesh.num_vertices() == 5);
        CHECK(validate_topology(g.mesh).num_edges == 9);
        CHECK(g.mesh.num_faces() == 6);
        CHECK(euler(g.mesh) == 2);
    }
    SUBCASE("flat disk with V=100, r=28") {
        const TriMesh m = disk_100_28();
        REQUIRE(m.num_vertices() == 100);
        REQUIRE(boundary_loop(m).size() == 28);
        REQUIRE(m.num_faces() == 170);
        const GluedMesh g = double_cover(m);
        CHECK(g.mesh.num_vertices() == 172);
        CHECK(g.mesh.num_faces() == 340);
        CHECK(euler(g.mesh) == 2);
    }
}

TEST_CASE("seam vertices") {
    CHECK(seam_vertices(double_cover(synthetic::single_triangle())) == std::vector<int>{0, 1, 2});
    const auto seam = seam_vertices(double_cover(synthetic::tetra_minus_face()));
    CHECK(std::set<int>(seam.begin(), seam.end()) == std::set<int>{0, 1, 2});
    for (const std::string& kind : synthetic::kinds()) {
        const TriMesh m = synthetic::by_name(kind, 700);
        const GluedMesh g = double_cover(m);
        CHECK(seam_vertices(g) == boundary_loop(m));
    }
}

TEST_CASE("closed or non-manifold input is rejected") {
    try {
        (void)double_cover(synthetic::closed_tetrahedron());
        FAIL("expected TopologyError");
    } catch (const TopologyError& e) {
        CHECK(e.defect() == TopologyDefect::not_disk);
        CHECK(std::string(e.what()).find("not disk topology") != std::string::npos);
    }
    CHECK_THROWS_AS((void)double_cover(synthetic::bowtie()), TopologyError);
}

TEST_CASE("glued structure on the suite") {
    for (const std::string& kind : synthetic::kinds()) {
        CAPTURE(kind);
        const TriMesh m = synthetic::by_name(kind, 1200);
        const GluedMesh g = double_cover(m);
        const TopologyReport r = validate_topology(g.mesh);
        CHECK(r.euler_characteristic == 2);
        CHECK(r.num_boundary_edges == 0);
        CHECK(g.mesh.num_vertices() == 2 * m.num_vertices() - g.seam.size());
        CHECK(g.mesh.num_faces() == 2 * m.num_faces());

        // Every undirected edge is traversed once in each direction.
        std::map<std::pair<int, int>, int> directed;
        for (const Face& f : g.mesh.faces()) {
            for (int k = 0; k < 3; ++k) ++directed[{f[k], f[(k + 1) % 3]}];
        }
        for (const auto& [e, n] : directed) {
            CHECK(n == 1);
            CHECK(directed.count({e.second, e.first}) == 1);
        }

        // Mirror involution and geometry.
        for (std::size_t v = 0; v < g.mesh.num_vertices(); ++v) {
            const int w = g.mirror_of[v];
            CHECK(g.mirror_of[w] == static_cast<int>(v));
            CHECK((g.copy[v] == CopyTag::seam) == (w == static_cast<int>(v)));
            CHECK(g.mesh.vertex(static_cast<int>(v)) == m.vertex(g.to_original[v]));
        }
    }
}

TEST_CASE("mirror cotangent weights are exactly equal") {
    for (const std::string& kind : synthetic::kinds()) {
        CAPTURE(kind);
        const GluedMesh g = double_cover(synthetic::by_name(kind, 1200));
        const SparseMatrix L = cotangent_laplacian(g);
        // Independent assembly from the glued faces' own geometry.
        const auto w = cotangent_weights(g.mesh);
        std::size_t checked = 0;
        for (const auto& [e, k] : w) {
            const int u = e.first;
            const int v = e.second;
            CHECK(L.coeff(u, v) == doctest::Approx(k).epsilon(1e-12));
            if (g.copy[u] == CopyTag::original && g.copy[v] == CopyTag::original) {
                const int mu = g.mirror_of[u];
                const int mv = g.mirror_of[v];
                CHECK(L.coeff(mu, mv) == L.coeff(u, v));
                ++checked;
            }
        }
        CHECK(checked > 0);

        // Rows of mirror vertices equal their partners' rows under relabeling,
        // including the diagonal.
        for (std::size_t v = 0; v < g.mesh.num_vertices(); ++v) {
            if (g.copy[v] != CopyTag::mirror) continue;
            const int o = g.mirror_of[v];
            CHECK(L.coeff(static_cast<int>(v), static_cast<int>(v)) == L.coeff(o, o));
            for (SparseMatrix::InnerIterator it(L, o); it; ++it) {
                const int j = static_cast<int>(it.row());
                CHECK(L.coeff(g.mirror_of[j], static_cast<int>(v)) == it.value());
            }
        }
    }
}
