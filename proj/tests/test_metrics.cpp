#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "diskmap/error.hpp"
#include "diskmap/metrics.hpp"
#include "diskmap/synthetic.hpp"

using namespace diskmap;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

PlanarEmbedding planar_coords(const TriMesh& m) {
    PlanarEmbedding z;
    for (const Vec3& p : m.vertices()) z.emplace_back(p.x(), p.y());
    return z;
}

template <typename F>
PlanarEmbedding mapped(const PlanarEmbedding& z, F&& f) {
    PlanarEmbedding out;
    for (const Complex& c : z) out.push_back(f(c));
    return out;
}

// Law of cosines, independent of the library's angle code.
double angle_from_sides(double opposite, double s1, double s2) {
    return std::acos((s1 * s1 + s2 * s2 - opposite * opposite) / (2.0 * s1 * s2));
}

}  // namespace

TEST_CASE("similarity maps have zero distortion") {
    const TriMesh m = synthetic::irregular_disk(800);
    const auto z = planar_coords(m);
    const auto uv = mapped(z, [](Complex c) { return Complex(0.3, -1.7) * c + Complex(4, 5); });
    const DistortionReport d = angular_distortion(m, uv);
    CHECK(d.mean_abs_deg < 1e-9);
    CHECK(d.max_abs_deg < 1e-9);
    CHECK(d.flips == 0);
    CHECK(d.included_corners == 3 * m.num_faces());
}

TEST_CASE("x + 2iy on the right isoceles triangle") {
    const TriMesh m = synthetic::single_triangle();
    const PlanarEmbedding uv{{0, 0}, {1, 0}, {0, 2}};
    const DistortionReport d = angular_distortion(m, uv);
    const double expected = std::atan(2.0) * kDeg - 45.0;
    CHECK(expected == doctest::Approx(18.43494882292201).epsilon(1e-12));
    CHECK(std::abs(d.corner_deg[0][0]) < 1e-12);
    CHECK(d.corner_deg[0][1] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(d.corner_deg[0][2] == doctest::Approx(-expected).epsilon(1e-12));
}

TEST_CASE("mean and SD agree with a brute-force enumeration") {
    const TriMesh m({{0, 0, 0}, {2, 0, 0}, {1.3, 1.1, 0.4}, {0.2, 1.5, -0.3}}, {{0, 1, 2}, {0, 2, 3}});
    const PlanarEmbedding uv{{0, 0}, {1.8, 0.1}, {1.0, 1.3}, {-0.1, 1.2}};
    const DistortionReport d = angular_distortion(m, uv);

    std::vector<double> diffs;
    for (const Face& f : m.faces()) {
        for (int k = 0; k < 3; ++k) {
            const int a = f[k], b = f[(k + 1) % 3], c = f[(k + 2) % 3];
            const double s3 = angle_from_sides((m.vertex(b) - m.vertex(c)).norm(), (m.vertex(a) - m.vertex(b)).norm(),
                                               (m.vertex(a) - m.vertex(c)).norm());
            const double s2 = angle_from_sides(std::abs(uv[b] - uv[c]), std::abs(uv[a] - uv[b]), std::abs(uv[a] - uv[c]));
            diffs.push_back(std::abs(s2 - s3) * kDeg);
        }
    }
    double mean = 0.0;
    for (double x : diffs) mean += x;
    mean /= 6.0;
    double ss = 0.0;
    for (double x : diffs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / 5.0);
    CHECK(d.mean_abs_deg == doctest::Approx(mean).epsilon(1e-10));
    CHECK(d.sd_abs_deg == doctest::Approx(sd).epsilon(1e-10));
}

TEST_CASE("distortion is invariant under similarities of uv") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const TriMesh m = synthetic::bumpy_disk(900);
    PlanarEmbedding uv = planar_coords(m);
    for (Complex& c : uv) c += 0.02 * Complex(u(rng), u(rng));
    const DistortionReport base = angular_distortion(m, uv);
    // Order-one transforms: larger offsets round the inputs themselves past 1e-12 degrees.
    for (int i = 0; i < 5; ++i) {
        const Complex a = std::polar(0.5 + 1.5 * std::abs(u(rng)), 3.0 * u(rng));
        const Complex b(u(rng), u(rng));
        const DistortionReport d = angular_distortion(m, mapped(uv, [&](Complex c) { return a * c + b; }));
        CHECK(std::abs(d.mean_abs_deg - base.mean_abs_deg) < 1e-12);
        CHECK(std::abs(d.sd_abs_deg - base.sd_abs_deg) < 1e-12);
        for (std::size_t f = 0; f < m.num_faces(); ++f) {
            for (int k = 0; k < 3; ++k) CHECK(std::abs(d.corner_deg[f][k] - base.corner_deg[f][k]) < 1e-12);
        }
    }
}

TEST_CASE("exactly representable similarities give identical reports") {
    const TriMesh m = synthetic::irregular_disk(600);
    const auto z = planar_coords(m);
    const DistortionReport base = angular_distortion(m, z);
    const DistortionReport d = angular_distortion(m, mapped(z, [](Complex c) { return Complex(0, 4) * c; }));
    CHECK(d.mean_abs_deg == base.mean_abs_deg);
    CHECK(d.corner_deg == base.corner_deg);
}

TEST_CASE("zero distortion exactly when mu vanishes") {
    const TriMesh m = synthetic::irregular_disk(500);
    const auto z = planar_coords(m);
    const auto check = [&](const PlanarEmbedding& uv) {
        const DistortionReport d = angular_distortion(m, uv);
        const DilationSummary s = conformality_stats(m, uv);
        for (std::size_t f = 0; f < m.num_faces(); ++f) {
            double worst = 0.0;
            for (double c : d.corner_deg[f]) worst = std::max(worst, std::abs(c));
            CHECK((worst < 1e-9) == (s.abs_mu[f] < 1e-9));
        }
    };
    check(mapped(z, [](Complex c) { return Complex(2, 1) * c; }));
    check(mapped(z, [](Complex c) { return c + 0.2 * std::conj(c) * c; }));
    check(mapped(z, [](Complex c) { return std::exp(c); }));
}

TEST_CASE("histogram partitions the included corners") {
    const TriMesh m = synthetic::saddle(700);
    const auto z = planar_coords(m);
    const auto uv = mapped(z, [](Complex c) { return c + 0.3 * std::conj(c) * std::conj(c); });
    const DistortionReport d = angular_distortion(m, uv);
    CHECK(d.histogram.total() == d.included_corners);
    CHECK(d.histogram.counts.size() == 100);
    CHECK(d.histogram.edges.front() == -10.0);
    CHECK(d.histogram.edges.back() == 10.0);
    CHECK(d.histogram.underflow + d.histogram.overflow > 0);

    const Histogram h = make_histogram(std::vector<double>{-10.0, -9.9, 0.0, 9.99, 10.0, 10.5, -11.0},
                                       HistogramOptions{4, -10.0, 10.0});
    CHECK(h.counts == std::vector<std::size_t>{2, 0, 1, 2});
    CHECK(h.underflow == 1);
    CHECK(h.overflow == 1);
    CHECK_THROWS_AS((void)make_histogram(std::vector<double>{}, HistogramOptions{0, 0.0, 1.0}), Error);
}

TEST_CASE("degenerate uv faces are excluded and counted") {
    const TriMesh m = synthetic::two_triangle_square();
    const PlanarEmbedding uv{{0, 0}, {1, 0}, {2, 0}, {0, 1}};
    const DistortionReport d = angular_distortion(m, uv);
    CHECK(d.degenerate_faces == std::vector<int>{0});
    CHECK(d.included_corners == 3);
    CHECK(std::isnan(d.corner_deg[0][0]));
    CHECK(d.flips == 1);
    CHECK_THROWS_AS((void)angular_distortion(m, PlanarEmbedding(3)), Error);
}

TEST_CASE("bijectivity report") {
    const TriMesh m = synthetic::flat_disk(600);
    auto uv = planar_coords(m);
    BijectivityReport r = bijectivity_report(m, uv);
    CHECK(r.flips() == 0);
    CHECK(r.boundary_simple);

    // Swap two interior vertices.
    const auto mask = boundary_vertex_mask(m);
    int a = -1, b = -1;
    for (std::size_t v = 0; v < m.num_vertices() && b < 0; ++v) {
        if (mask[v]) continue;
        (a < 0 ? a : b) = static_cast<int>(v);
    }
    std::swap(uv[a], uv[b]);
    CHECK(bijectivity_report(m, uv).flips() >= 1);
}

TEST_CASE("polygon simplicity") {
    CHECK(polygon_is_simple(std::vector<Complex>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    CHECK_FALSE(polygon_is_simple(std::vector<Complex>{{0, 0}, {1, 1}, {1, 0}, {0, 1}}));  // bow tie
    CHECK_FALSE(polygon_is_simple(std::vector<Complex>{{0, 0}, {2, 0}, {1, 0}, {1, 1}}));  // folds back
    CHECK_FALSE(polygon_is_simple(std::vector<Complex>{{0, 0}, {1, 0}}));
    CHECK_FALSE(polygon_is_simple(std::vector<Complex>{{0, 0}, {2, 0}, {2, 2}, {1, 0}, {0, 2}}));  // touches
    std::vector<Complex> circle;
    for (int k = 0; k < 1000; ++k) circle.push_back(std::polar(1.0, 2 * std::numbers::pi * k / 1000));
    CHECK(polygon_is_simple(circle));
    std::swap(circle[10], circle[500]);
    CHECK_FALSE(polygon_is_simple(circle));
}

TEST_CASE("conformality stats") {
    const TriMesh m = synthetic::flat_disk(500);
    const auto z = planar_coords(m);
    const DilationSummary id = conformality_stats(m, z);
    CHECK(id.K == doctest::Approx(1.0).epsilon(1e-12));
    const DilationSummary s = conformality_stats(m, mapped(z, [](Complex c) { return Complex(c.real(), 2 * c.imag()); }));
    for (double a : s.abs_mu) CHECK(a == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(s.K == doctest::Approx(2.0).epsilon(1e-12));
    std::size_t n = s.hist_overflow;
    for (std::size_t c : s.hist_counts) n += c;
    CHECK(n == m.num_faces());
}
