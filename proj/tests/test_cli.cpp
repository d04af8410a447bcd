#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "diskmap/mesh_io.hpp"
#include "diskmap/synthetic.hpp"

using namespace diskmap;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "diskmap");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "diskmap_test_cli";
    fs::create_directories(dir);
    return dir;
}

fs::path write_synthetic(const std::string& kind, std::size_t faces) {
    const fs::path p = scratch_dir() / (kind + "_" + std::to_string(faces) + ".obj");
    write_mesh(p, synthetic::by_name(kind, faces));
    return p;
}

// Text report as key -> rest of line.
std::map<std::string, std::string> parse_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto sp = line.find(' ');
        if (sp == std::string::npos) continue;
        kv[line.substr(0, sp)] = line.substr(sp + 1);
    }
    return kv;
}

std::size_t count_prefix(const fs::path& p, const std::string& prefix) {
    std::ifstream in(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
    return n;
}

std::string data(const std::string& name) { return std::string(DISKMAP_TEST_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("param writes a uv OBJ and a summary") {
    const fs::path in = write_synthetic("hemisphere", 800);
    const fs::path out = scratch_dir() / "hemi_uv.obj";
    const Result r = run_cli({"param", "--in", in.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const TriMesh m = load_mesh(in);
    CHECK(count_prefix(out, "vt ") == m.num_vertices());
    const auto kv = parse_text(r.out);
    CHECK(kv.at("flips") == "0");
    CHECK(kv.at("boundary_simple") == "true");
    CHECK(kv.at("invariants_ok") == "true");
    CHECK(kv.count("mean_abs_deg") == 1);
    CHECK(kv.count("time_s.total") == 1);
    CHECK(kv.at("solves.systems") == "3");

    const LoadedMesh back = load_mesh_with_uv(out);
    REQUIRE(back.uv);
    CHECK(back.mesh.faces() == m.faces());
}

TEST_CASE("report values match the library") {
    const fs::path in = write_synthetic("bumpy", 700);
    const fs::path out = scratch_dir() / "bumpy_uv.obj";
    const Result r = run_cli({"param", "--in", in.string(), "--out", out.string()});
    REQUIRE(r.code == 0);
    const TriMesh m = load_mesh(in);
    const DiskParameterization p = disk_conformal_parameterize(m);
    const DistortionReport d = angular_distortion(m, p.uv);
    const auto kv = parse_text(r.out);
    CHECK(kv.at("mean_abs_deg") == cli::format_number(d.mean_abs_deg));
    CHECK(kv.at("sd_abs_deg") == cli::format_number(d.sd_abs_deg));
    CHECK(kv.at("max_abs_deg") == cli::format_number(d.max_abs_deg));
    CHECK(kv.at("included_corners") == std::to_string(d.included_corners));
}

TEST_CASE("closed input fails with a topology error") {
    const fs::path out = scratch_dir() / "closed_uv.obj";
    fs::remove(out);
    const Result r = run_cli({"param", "--in", data("closed_tetra.obj"), "--out", out.string()});
    CHECK(r.code != 0);
    CHECK(r.err.find("not disk topology") != std::string::npos);
    CHECK(r.err.find("error [topology/not_disk]") != std::string::npos);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("parse errors name the line") {
    const Result r = run_cli({"param", "--in", data("bad_index.obj"), "--out", (scratch_dir() / "x.obj").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("error [parse]") != std::string::npos);
    CHECK(r.err.find("line 6") != std::string::npos);
}

TEST_CASE("skip-south-pole is recorded") {
    const fs::path in = write_synthetic("hemisphere", 800);
    const fs::path out = scratch_dir() / "hemi_skip.obj";
    const Result r = run_cli({"param", "--in", in.string(), "--out", out.string(), "--skip-south-pole", "--report", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["provenance"]["skip_south_pole"] == true);
    CHECK(j["solves"]["systems"] == 2);
    CHECK(j["timings_s"].contains("south_pole"));
}

TEST_CASE("metrics on an existing uv") {
    SUBCASE("identity uv") {
        const Result r = run_cli({"metrics", "--in", data("square_uv.obj"), "--uv", data("square_uv.obj")});
        REQUIRE(r.code == 0);
        const auto kv = parse_text(r.out);
        CHECK(std::stod(kv.at("mean_abs_deg")) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(kv.at("flips") == "0");
        CHECK(kv.count("time_s.total") == 0);
    }
    SUBCASE("json keys") {
        const Result r = run_cli({"metrics", "--in", data("square_uv.obj"), "--uv", data("square_uv.obj"), "--report", "json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        for (const char* key : {"mean_abs_deg", "sd_abs_deg", "max_abs_deg", "included_corners", "degenerate_faces",
                                "flips", "boundary_simple", "K", "K_infinite", "mean_abs_mu", "max_abs_mu", "histogram"}) {
            CAPTURE(key);
            CHECK(j.contains(key));
        }
        CHECK(j["histogram"]["counts"].size() == 100);
        CHECK(j["histogram"]["edges"].size() == 101);
        CHECK_FALSE(j.contains("provenance"));
    }
    SUBCASE("connectivity mismatch") {
        const Result r = run_cli({"metrics", "--in", data("triangle.obj"), "--uv", data("square_uv.obj")});
        CHECK(r.code == 1);
        CHECK(r.err.find("connectivity mismatch") != std::string::npos);
    }
    SUBCASE("uv file without vt") {
        const Result r = run_cli({"metrics", "--in", data("triangle.obj"), "--uv", data("triangle.obj")});
        CHECK(r.code == 1);
        CHECK(r.err.find("no vt") != std::string::npos);
    }
}

TEST_CASE("checkerboard texture output") {
    const fs::path in = write_synthetic("flat", 600);
    const fs::path out = scratch_dir() / "flat_tex.obj";
    const Result r = run_cli({"texture", "--in", in.string(), "--out", out.string(), "--density", "8"});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(scratch_dir() / "flat_tex.mtl"));
    CHECK(fs::exists(scratch_dir() / "flat_tex_checker.png"));
    CHECK(count_prefix(out, "mtllib flat_tex.mtl") == 1);
    CHECK(count_prefix(out, "usemtl checker") == 1);

    std::ifstream png(scratch_dir() / "flat_tex_checker.png", std::ios::binary);
    char sig[8] = {};
    png.read(sig, 8);
    CHECK(std::string(sig + 1, 3) == "PNG");

    // vt = density * uv of the plain run.
    const fs::path plain = scratch_dir() / "flat_plain.obj";
    REQUIRE(run_cli({"param", "--in", in.string(), "--out", plain.string()}).code == 0);
    const LoadedMesh a = load_mesh_with_uv(out);
    const LoadedMesh b = load_mesh_with_uv(plain);
    REQUIRE(a.uv);
    REQUIRE(b.uv);
    for (std::size_t v = 0; v < a.uv->size(); ++v) CHECK(std::abs((*a.uv)[v] - 8.0 * (*b.uv)[v]) < 1e-12);

    // Same output through param --texture.
    const fs::path via_param = scratch_dir() / "flat_tex2.obj";
    REQUIRE(run_cli({"param", "--in", in.string(), "--out", via_param.string(), "--texture", "checkerboard"}).code == 0);
    CHECK(fs::exists(scratch_dir() / "flat_tex2.mtl"));
}

TEST_CASE("configuration errors") {
    const fs::path in = write_synthetic("flat", 300);
    const std::string out = (scratch_dir() / "cfg.obj").string();
    CHECK(run_cli({"texture", "--in", in.string(), "--out", out, "--density", "0"}).code == 2);
    CHECK(run_cli({"param", "--in", in.string(), "--out", out, "--tolerance", "1e-3"}).code == 2);
    CHECK(run_cli({"param", "--in", in.string(), "--out", out, "--tolerance", "0"}).code == 2);
    CHECK(run_cli({"param", "--in", in.string(), "--out", out, "--tolerance", "1e-4"}).code == 0);
    CHECK(run_cli({"param", "--in", in.string(), "--out", out, "--report", "xml"}).code == 2);
    CHECK(run_cli({"param", "--in", in.string(), "--out", out, "--texture", "stripes"}).code == 2);
    CHECK(run_cli({"param", "--in", in.string()}).code != 0);
    CHECK(run_cli({}).code != 0);

    cli::RunConfig c;
    CHECK_NOTHROW(cli::validate(c));
    c.tolerance = -1.0;
    CHECK_THROWS_AS(cli::validate(c), cli::ConfigError);
}

TEST_CASE("generate writes every kind") {
    for (const std::string& kind : synthetic::kinds()) {
        const fs::path out = scratch_dir() / ("gen_" + kind + ".off");
        const Result r = run_cli({"generate", "--kind", kind, "--faces", "400", "--out", out.string()});
        CHECK(r.code == 0);
        CHECK(load_mesh(out).num_faces() > 0);
    }
    CHECK(run_cli({"generate", "--kind", "teapot", "--out", (scratch_dir() / "t.obj").string()}).code == 1);
}

TEST_CASE("format_number round trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) CHECK(std::stod(cli::format_number(v)) == v);
    CHECK(cli::format_number(std::numeric_limits<double>::infinity()) == "inf");
}
