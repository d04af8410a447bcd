#pragma once

#include <filesystem>
#include <string>

namespace diskmap::cli {

/// Writes a 2x2 checkerboard tile as an 8-bit RGB PNG, `check_px` pixels per
/// square. Throws IoError on failure.
void write_checker_png(const std::filesystem::path& path, int check_px = 64);

/// Writes a one-material MTL file whose diffuse map is `image`.
void write_checker_mtl(const std::filesystem::path& path, const std::string& material, const std::string& image);

}  // namespace diskmap::cli
