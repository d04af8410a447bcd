#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "diskmap/error.hpp"
#include "diskmap/mesh_io.hpp"
#include "diskmap/metrics.hpp"
#include "diskmap/pipeline.hpp"

namespace diskmap::cli {

enum class ReportFormat { text, json };
enum class TextureMode { none, checkerboard };

/// Invalid command-line configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    std::string input;
    std::string output;
    std::string uv_path;  ///< metrics: OBJ carrying the uv to evaluate
    MeshFormat format = MeshFormat::auto_detect;
    bool skip_south_pole = false;
    double tolerance = 1e-10;
    ReportFormat report = ReportFormat::text;
    TextureMode texture = TextureMode::none;
    int density = 8;

    // generate
    std::string kind;
    std::size_t faces = 20000;
};

/// Throws ConfigError unless tolerance is in (0, 1e-4] and density >= 1.
void validate(const RunConfig& config);

[[nodiscard]] ReportFormat parse_report_format(const std::string& name);
[[nodiscard]] TextureMode parse_texture_mode(const std::string& name);

/// Everything a report prints. `param` is null for metrics-only runs.
struct Report {
    DistortionReport distortion;
    BijectivityReport bijectivity;
    DilationSummary dilation;
    const DiskParameterization* param = nullptr;
    bool invariants_ok = true;
};

[[nodiscard]] Report make_report(const TriMesh& mesh, const PlanarEmbedding& uv,
                                 const DiskParameterization* param = nullptr);

[[nodiscard]] nlohmann::json report_json(const Report& report);

/// One `key value...` pair per line; see docs/formats.md.
void write_report_text(std::ostream& out, const Report& report);

/// Parameterizes the input and writes an OBJ with vt records. With
/// --texture checkerboard the texture files are written as well.
int cmd_param(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Reports distortion of an existing uv OBJ against the input mesh.
int cmd_metrics(const RunConfig& config, std::ostream& out, std::ostream& err);

/// cmd_param with the checkerboard texture forced on.
int cmd_texture(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes one of the synthetic test surfaces.
int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand. Returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form of v.
[[nodiscard]] std::string format_number(double v);

}  // namespace diskmap::cli
