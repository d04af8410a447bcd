#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "diskmap/synthetic.hpp"
#include "texture.hpp"

namespace diskmap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void validate(const RunConfig& config) {
    if (!(config.tolerance > 0.0 && config.tolerance <= 1e-4)) {
        throw ConfigError("tolerance must be in (0, 1e-4], got " + format_number(config.tolerance));
    }
    if (config.density < 1) throw ConfigError("density must be at least 1, got " + std::to_string(config.density));
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    const std::string n = lower(name);
    if (n == "text") return ReportFormat::text;
    if (n == "json") return ReportFormat::json;
    throw ConfigError("unknown report format '" + name + "' (expected text or json)");
}

TextureMode parse_texture_mode(const std::string& name) {
    const std::string n = lower(name);
    if (n == "none") return TextureMode::none;
    if (n == "checkerboard") return TextureMode::checkerboard;
    throw ConfigError("unknown texture mode '" + name + "' (expected none or checkerboard)");
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

Report make_report(const TriMesh& mesh, const PlanarEmbedding& uv, const DiskParameterization* param) {
    Report r;
    r.distortion = angular_distortion(mesh, uv);
    r.bijectivity = bijectivity_report(mesh, uv);
    r.dilation = conformality_stats(mesh, uv);
    r.param = param;
    if (param) r.invariants_ok = check_invariants(mesh, uv, param->boundary).ok();
    return r;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json clamp_json(const ClampReport& c) {
    return {{"clamped", c.clamped}, {"max_input_modulus", c.max_input_modulus}};
}

}  // namespace

json report_json(const Report& report) {
    const DistortionReport& d = report.distortion;
    json j;
    j["mean_abs_deg"] = d.mean_abs_deg;
    j["sd_abs_deg"] = d.sd_abs_deg;
    j["max_abs_deg"] = d.max_abs_deg;
    j["included_corners"] = d.included_corners;
    j["degenerate_faces"] = d.degenerate_faces.size();
    j["flips"] = report.bijectivity.flips();
    j["boundary_simple"] = report.bijectivity.boundary_simple;
    j["K"] = number_or_null(report.dilation.K);
    j["K_infinite"] = report.dilation.K_infinite;
    j["mean_abs_mu"] = report.dilation.mean_abs_mu;
    j["max_abs_mu"] = report.dilation.sup_abs_mu;
    j["histogram"] = {{"edges", d.histogram.edges},
                      {"counts", d.histogram.counts},
                      {"underflow", d.histogram.underflow},
                      {"overflow", d.histogram.overflow}};

    if (const DiskParameterization* p = report.param) {
        json timings = json::object();
        for (const StageTiming& t : p->timings) timings[t.stage] = t.seconds;
        timings["total"] = p->total_seconds();
        j["timings_s"] = timings;

        const Provenance& pr = p->provenance;
        j["provenance"] = {{"anchor_face", pr.anchor_face},
                           {"anchor_source_face", pr.anchor_source_face},
                           {"anchor_on_mirror", pr.anchor_on_mirror},
                           {"skip_south_pole", pr.skip_south_pole},
                           {"tolerance", pr.tolerance},
                           {"south_pole_fixed", pr.south_pole_fixed},
                           {"south_pole_clamp", clamp_json(pr.south_pole_clamp)},
                           {"final_clamp", clamp_json(pr.final_clamp)},
                           {"region_flips", pr.region_flips}};
        j["solves"] = {{"systems", pr.solves.systems},
                       {"columns", pr.solves.columns},
                       {"max_relative_residual", pr.solves.max_relative_residual},
                       {"warnings", pr.solves.warnings}};
        j["invariants_ok"] = report.invariants_ok;
    }
    return j;
}

void write_report_text(std::ostream& out, const Report& report) {
    const DistortionReport& d = report.distortion;
    auto kv = [&](const std::string& key, const std::string& value) { out << key << ' ' << value << '\n'; };
    auto num = [&](const std::string& key, double v) { kv(key, format_number(v)); };
    auto flag = [&](const std::string& key, bool b) { kv(key, b ? "true" : "false"); };

    num("mean_abs_deg", d.mean_abs_deg);
    num("sd_abs_deg", d.sd_abs_deg);
    num("max_abs_deg", d.max_abs_deg);
    kv("included_corners", std::to_string(d.included_corners));
    kv("degenerate_faces", std::to_string(d.degenerate_faces.size()));
    kv("flips", std::to_string(report.bijectivity.flips()));
    flag("boundary_simple", report.bijectivity.boundary_simple);
    num("K", report.dilation.K);
    flag("K_infinite", report.dilation.K_infinite);
    num("mean_abs_mu", report.dilation.mean_abs_mu);
    num("max_abs_mu", report.dilation.sup_abs_mu);

    if (const DiskParameterization* p = report.param) {
        for (const StageTiming& t : p->timings) num("time_s." + t.stage, t.seconds);
        num("time_s.total", p->total_seconds());
        const Provenance& pr = p->provenance;
        kv("anchor_face", std::to_string(pr.anchor_face));
        kv("anchor_source_face", std::to_string(pr.anchor_source_face));
        flag("anchor_on_mirror", pr.anchor_on_mirror);
        flag("skip_south_pole", pr.skip_south_pole);
        num("tolerance", pr.tolerance);
        kv("south_pole_fixed", std::to_string(pr.south_pole_fixed));
        kv("south_pole_clamped", std::to_string(pr.south_pole_clamp.clamped));
        kv("final_clamped", std::to_string(pr.final_clamp.clamped));
        kv("region_flips", std::to_string(pr.region_flips));
        kv("solves.systems", std::to_string(pr.solves.systems));
        kv("solves.columns", std::to_string(pr.solves.columns));
        num("solves.max_relative_residual", pr.solves.max_relative_residual);
        for (const std::string& w : pr.solves.warnings) kv("solves.warning", w);
        flag("invariants_ok", report.invariants_ok);
    }

    out << "histogram.edges";
    for (double e : d.histogram.edges) out << ' ' << format_number(e);
    out << "\nhistogram.counts";
    for (std::size_t c : d.histogram.counts) out << ' ' << c;
    out << '\n';
    kv("histogram.underflow", std::to_string(d.histogram.underflow));
    kv("histogram.overflow", std::to_string(d.histogram.overflow));
}

namespace {

void emit(std::ostream& out, const Report& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        out << report_json(report).dump(2) << '\n';
    } else {
        write_report_text(out, report);
    }
}

// Prints the failure as "error [stage]: message" and returns the exit code.
int fail(std::ostream& err, const std::string& stage, const std::string& msg, const std::vector<int>& where = {}) {
    err << "error [" << stage << "]: " << msg << '\n';
    if (!where.empty()) {
        err << "  at:";
        const std::size_t shown = std::min<std::size_t>(where.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) err << ' ' << where[i];
        if (shown < where.size()) err << " ... (" << where.size() << " total)";
        err << '\n';
    }
    return 1;
}

const char* defect_name(TopologyDefect d) {
    switch (d) {
        case TopologyDefect::non_manifold_edge: return "non_manifold_edge";
        case TopologyDefect::non_manifold_vertex: return "non_manifold_vertex";
        case TopologyDefect::inconsistent_orientation: return "inconsistent_orientation";
        case TopologyDefect::multiple_components: return "multiple_components";
        case TopologyDefect::not_disk: return "not_disk";
    }
    return "topology";
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "error [config]: " << e.what() << '\n';
        return 2;
    } catch (const PipelineError& e) {
        return fail(err, e.stage(), e.what(), e.faces());
    } catch (const TopologyError& e) {
        return fail(err, std::string("topology/") + defect_name(e.defect()), e.what(), e.where());
    } catch (const ParseError& e) {
        return fail(err, "parse", e.what());
    } catch (const MeshError& e) {
        return fail(err, "mesh", e.what(), e.faces());
    } catch (const IoError& e) {
        return fail(err, "io", e.what());
    } catch (const SolverError& e) {
        return fail(err, "solver", e.what());
    } catch (const Error& e) {
        return fail(err, "error", e.what());
    } catch (const std::exception& e) {
        return fail(err, "internal", e.what());
    }
}

void require_paths(const RunConfig& config, bool need_output) {
    if (config.input.empty()) throw ConfigError("--in is required");
    if (need_output && config.output.empty()) throw ConfigError("--out is required");
}

int param_impl(const RunConfig& config, bool texture, std::ostream& out, std::ostream& err) {
    validate(config);
    require_paths(config, true);
    const TriMesh mesh = load_mesh(config.input, config.format);

    PipelineOptions options;
    options.skip_south_pole = config.skip_south_pole;
    options.solve.tolerance = config.tolerance;
    const DiskParameterization result = disk_conformal_parameterize(mesh, options);

    const Report report = make_report(mesh, result.uv, &result);
    if (!report.invariants_ok) {
        return fail(err, "invariants", "result violates the disk invariants; no output written");
    }

    const fs::path obj = config.output;
    if (texture) {
        const fs::path mtl = fs::path(obj).replace_extension(".mtl");
        const fs::path png = obj.parent_path() / (obj.stem().string() + "_checker.png");
        write_checker_png(png);
        write_checker_mtl(mtl, "checker", png.filename().string());
        ObjUvOptions uv_opts;
        uv_opts.uv_scale = config.density;
        uv_opts.mtllib = mtl.filename().string();
        uv_opts.material = "checker";
        write_mesh_with_uv(obj, mesh, result.uv, uv_opts);
    } else {
        write_mesh_with_uv(obj, mesh, result.uv);
    }

    for (const std::string& w : result.provenance.solves.warnings) err << "warning: " << w << '\n';
    emit(out, report, config.report);
    return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_param(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return param_impl(config, config.texture == TextureMode::checkerboard, out, err); });
}

int cmd_texture(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return param_impl(config, true, out, err); });
}

int cmd_metrics(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        validate(config);
        require_paths(config, false);
        if (config.uv_path.empty()) throw ConfigError("--uv is required");
        const TriMesh mesh = load_mesh(config.input, config.format);
        const LoadedMesh uv_file = load_mesh_with_uv(config.uv_path, MeshFormat::obj);
        if (!uv_file.uv) throw Error(config.uv_path + " has no vt records");
        const TriMesh& other = uv_file.mesh;
        if (other.num_vertices() != mesh.num_vertices() || other.num_faces() != mesh.num_faces()) {
            throw Error("connectivity mismatch: mesh has " + std::to_string(mesh.num_vertices()) + " vertices / " +
                        std::to_string(mesh.num_faces()) + " faces, uv file has " +
                        std::to_string(other.num_vertices()) + " / " + std::to_string(other.num_faces()));
        }
        for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
            if (mesh.face(static_cast<int>(f)) != other.face(static_cast<int>(f))) {
                throw Error("connectivity mismatch at face " + std::to_string(f));
            }
        }
        emit(out, make_report(mesh, *uv_file.uv), config.report);
        return 0;
    });
}

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (config.output.empty()) throw ConfigError("--out is required");
        if (config.faces < 1) throw ConfigError("--faces must be positive");
        const TriMesh mesh = synthetic::by_name(config.kind, config.faces);
        write_mesh(config.output, mesh, config.format);
        out << "wrote " << config.output << ": " << mesh.num_vertices() << " vertices, " << mesh.num_faces()
            << " faces\n";
        return 0;
    });
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Disk conformal parameterization of triangle meshes"};
    app.require_subcommand(1);

    RunConfig config;
    std::string format = "auto";
    std::string report = "text";
    std::string texture = "none";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--in", config.input, "Input mesh (OBJ or OFF)")->required();
        sub->add_option("--format", format, "Input format: auto, obj or off");
        sub->add_option("--tolerance", config.tolerance, "Relative residual tolerance of the linear solves");
        sub->add_option("--report", report, "Report format: text or json");
    };

    CLI::App* param = app.add_subcommand("param", "Parameterize a disk-topology mesh onto the unit disk");
    common(param);
    param->add_option("--out", config.output, "Output OBJ with vt records")->required();
    param->add_flag("--skip-south-pole", config.skip_south_pole, "Skip the South-pole correction step");
    param->add_option("--texture", texture, "Texture mode: none or checkerboard");
    param->add_option("--density", config.density, "Checkerboard repeats across the unit disk");

    CLI::App* texture_cmd = app.add_subcommand("texture", "Parameterize and write a checkerboard-textured OBJ");
    common(texture_cmd);
    texture_cmd->add_option("--out", config.output, "Output OBJ")->required();
    texture_cmd->add_flag("--skip-south-pole", config.skip_south_pole, "Skip the South-pole correction step");
    texture_cmd->add_option("--density", config.density, "Checkerboard repeats across the unit disk");

    CLI::App* metrics = app.add_subcommand("metrics", "Distortion report of an existing uv OBJ");
    common(metrics);
    metrics->add_option("--uv", config.uv_path, "OBJ with vt records over the same connectivity")->required();

    CLI::App* generate = app.add_subcommand("generate", "Write a synthetic test surface");
    std::string kinds;
    for (const std::string& k : synthetic::kinds()) kinds += (kinds.empty() ? "" : ", ") + k;
    generate->add_option("--kind", config.kind, "One of: " + kinds)->required();
    generate->add_option("--faces", config.faces, "Approximate face count");
    generate->add_option("--out", config.output, "Output mesh (OBJ or OFF)")->required();
    generate->add_option("--format", format, "Output format: auto, obj or off");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        config.format = parse_mesh_format(format);
        config.report = parse_report_format(report);
        config.texture = parse_texture_mode(texture);
    } catch (const Error& e) {
        err << "error [config]: " << e.what() << '\n';
        return 2;
    }

    if (param->parsed()) return cmd_param(config, out, err);
    if (texture_cmd->parsed()) return cmd_texture(config, out, err);
    if (metrics->parsed()) return cmd_metrics(config, out, err);
    return cmd_generate(config, out, err);
}

}  // namespace diskmap::cli
