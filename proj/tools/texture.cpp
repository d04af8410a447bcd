#include "texture.hpp"

#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <vector>

#include <png.h>

#include "diskmap/error.hpp"

namespace diskmap::cli {

void write_checker_png(const std::filesystem::path& path, int check_px) {
    if (check_px < 1) throw Error("check size must be positive");
    const int size = 2 * check_px;

    std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!file) throw IoError("cannot write " + path.string());

    // Allocated before setjmp so a libpng longjmp skips no destructors.
    std::vector<unsigned char> row(3 * static_cast<std::size_t>(size));
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng failed writing " + path.string());
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, size, size, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    static constexpr unsigned char light[3] = {240, 240, 240};
    static constexpr unsigned char dark[3] = {40, 60, 160};
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const bool odd = ((x / check_px) + (y / check_px)) % 2 == 1;
            const unsigned char* c = odd ? dark : light;
            for (int k = 0; k < 3; ++k) row[3 * x + k] = c[k];
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_checker_mtl(const std::filesystem::path& path, const std::string& material, const std::string& image) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "newmtl " << material << "\n"
        << "Ka 1 1 1\n"
        << "Kd 1 1 1\n"
        << "Ks 0 0 0\n"
        << "map_Kd " << image << "\n";
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace diskmap::cli
