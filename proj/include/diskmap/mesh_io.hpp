#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "diskmap/mesh.hpp"

namespace diskmap {

enum class MeshFormat { auto_detect, obj, off };

/// Parses "auto", "obj" or "off" (case-insensitive). Throws Error otherwise.
[[nodiscard]] MeshFormat parse_mesh_format(const std::string& name);

/// Resolves auto_detect from the file extension, falling back to sniffing an
/// "OFF" header.
[[nodiscard]] MeshFormat detect_format(const std::filesystem::path& path, MeshFormat requested);

/// A mesh with optional per-vertex texture coordinates (OBJ only).
struct LoadedMesh {
    TriMesh mesh;
    std::optional<PlanarEmbedding> uv;
};

/// Reads an OBJ or OFF file. Vertex and face order follow the file.
/// OBJ faces may use `v`, `v/vt`, `v//vn` or `v/vt/vn` references, with
/// negative indices counting back from the last record. Only triangles are
/// accepted.
[[nodiscard]] LoadedMesh load_mesh_with_uv(const std::filesystem::path& path,
                                           MeshFormat format = MeshFormat::auto_detect);

[[nodiscard]] TriMesh load_mesh(const std::filesystem::path& path,
                                MeshFormat format = MeshFormat::auto_detect);

void write_mesh(const std::filesystem::path& path, const TriMesh& mesh,
                MeshFormat format = MeshFormat::auto_detect);

struct ObjUvOptions {
    /// Multiplies uv before writing the vt records.
    double uv_scale = 1.0;
    /// Emitted as `mtllib` / `usemtl` when non-empty.
    std::string mtllib;
    std::string material;
};

/// Writes an OBJ with one `vt` per vertex (same index as its `v`) and faces
/// as `f a/a b/b c/c`. Coordinates use 17 significant digits.
void write_mesh_with_uv(const std::filesystem::path& path, const TriMesh& mesh,
                        const PlanarEmbedding& uv, const ObjUvOptions& options = {});

}  // namespace diskmap
