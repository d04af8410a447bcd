#include "diskmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "diskmap/error.hpp"

namespace diskmap {

std::size_t Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), underflow + overflow);
}

Histogram make_histogram(std::span<const double> values, const HistogramOptions& options) {
    if (options.bins == 0 || !(options.hi > options.lo)) throw Error("invalid histogram range");
    Histogram h;
    h.counts.assign(options.bins, 0);
    const double width = (options.hi - options.lo) / static_cast<double>(options.bins);
    const double n = static_cast<double>(options.bins);
    for (std::size_t b = 0; b <= options.bins; ++b) {
        const double t = static_cast<double>(b);
        h.edges.push_back((options.lo * (n - t) + options.hi * t) / n);
    }
    for (double v : values) {
        if (std::isnan(v)) continue;
        if (v < options.lo) {
            ++h.underflow;
        } else if (v > options.hi) {
            ++h.overflow;
        } else {
            auto b = static_cast<std::size_t>((v - options.lo) / width);
            b = std::min(b, options.bins - 1);
            // Keep bin membership consistent with the printed edges.
            while (b > 0 && v < h.edges[b]) --b;
            while (b + 1 < options.bins && v >= h.edges[b + 1]) ++b;
            ++h.counts[b];
        }
    }
    return h;
}

DistortionReport angular_distortion(const TriMesh& mesh, const PlanarEmbedding& uv, const HistogramOptions& options) {
    if (uv.size() != mesh.num_vertices()) {
        throw Error("uv has " + std::to_string(uv.size()) + " entries but the mesh has " +
                    std::to_string(mesh.num_vertices()) + " vertices");
    }
    const CornerAngles surface = corner_angles(mesh);
    const CornerAngles plane = corner_angles(mesh.faces(), uv);
    constexpr double to_deg = 180.0 / std::numbers::pi;

    DistortionReport r;
    r.corner_deg.resize(mesh.num_faces());
    std::vector<double> included;
    included.reserve(3 * mesh.num_faces());
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& t = mesh.face(static_cast<int>(f));
        const double area2 = signed_area2(uv[t[0]], uv[t[1]], uv[t[2]]);
        if (!(area2 > 0.0)) ++r.flips;
        const bool degenerate = area2 == 0.0 || std::isnan(area2) || std::isnan(plane[f][0]) ||
                                std::isnan(plane[f][1]) || std::isnan(plane[f][2]);
        if (degenerate) {
            r.degenerate_faces.push_back(static_cast<int>(f));
            r.corner_deg[f].fill(std::nan(""));
            continue;
        }
        for (int k = 0; k < 3; ++k) {
            r.corner_deg[f][k] = (plane[f][k] - surface[f][k]) * to_deg;
            included.push_back(r.corner_deg[f][k]);
        }
    }

    r.included_corners = included.size();
    double sum = 0.0;
    for (double d : included) {
        sum += std::abs(d);
        r.max_abs_deg = std::max(r.max_abs_deg, std::abs(d));
    }
    const auto n = static_cast<double>(included.size());
    r.mean_abs_deg = included.empty() ? 0.0 : sum / n;
    double ss = 0.0;
    for (double d : included) {
        const double e = std::abs(d) - r.mean_abs_deg;
        ss += e * e;
    }
    r.sd_abs_deg = included.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    r.histogram = make_histogram(included, options);
    return r;
}

// ---------------------------------------------------------------------------
// Bijectivity
// ---------------------------------------------------------------------------

namespace {

double orient(Complex a, Complex b, Complex c) { return signed_area2(a, b, c); }

bool on_segment(Complex a, Complex b, Complex p) {
    return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
    const int o1 = sign(orient(a, b, c));
    const int o2 = sign(orient(a, b, d));
    const int o3 = sign(orient(c, d, a));
    const int o4 = sign(orient(c, d, b));
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace

bool polygon_is_simple(std::span<const Complex> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return false;
    for (const Complex& p : polygon) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) return false;
    }

    // Consecutive edges (a, b), (b, c) only fail when they fold back onto
    // each other.
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = polygon[i];
        const Complex b = polygon[(i + 1) % n];
        const Complex c = polygon[(i + 2) % n];
        if (a == b) return false;
        const Complex u = b - a;
        const Complex v = c - b;
        if (u.real() * v.imag() - u.imag() * v.real() == 0.0 && u.real() * v.real() + u.imag() * v.imag() < 0.0) {
            return false;
        }
    }

    // Sweep over x: segments sorted by left end, compared only while their
    // x-ranges overlap.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto xmin = [&](std::size_t i) { return std::min(polygon[i].real(), polygon[(i + 1) % n].real()); };
    auto xmax = [&](std::size_t i) { return std::max(polygon[i].real(), polygon[(i + 1) % n].real()); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xmin(a) < xmin(b); });

    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t i = order[s];
        const double reach = xmax(i);
        for (std::size_t t = s + 1; t < n && xmin(order[t]) <= reach; ++t) {
            const std::size_t j = order[t];
            const bool adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if (adjacent) continue;
            if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

BijectivityReport bijectivity_report(const TriMesh& mesh, const PlanarEmbedding& uv) {
    if (uv.size() != mesh.num_vertices()) throw Error("uv size does not match the vertex count");
    BijectivityReport r;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& t = mesh.face(static_cast<int>(f));
        if (!(signed_area2(uv[t[0]], uv[t[1]], uv[t[2]]) > 0.0)) r.flipped_faces.push_back(static_cast<int>(f));
    }
    const auto loops = boundary_loops(mesh);
    if (loops.size() == 1) {
        std::vector<Complex> polygon;
        polygon.reserve(loops.front().size());
        for (int v : loops.front()) polygon.push_back(uv[v]);
        r.boundary_simple = polygon_is_simple(polygon);
    }
    return r;
}

DilationSummary conformality_stats(const TriMesh& mesh, const PlanarEmbedding& uv) {
    if (uv.size() != mesh.num_vertices()) throw Error("uv size does not match the vertex count");
    return dilation_summary(beltrami_coefficient(mesh.faces(), mesh.vertices(), uv));
}

}  // namespace diskmap
