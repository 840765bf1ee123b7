#include "egoflow/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace egoflow {
namespace {

int read_pnm_token(std::istream& in) {
    // Skips whitespace and '#' comments between header fields.
    for (;;) {
        const int c = in.peek();
        if (c == EOF) throw IoError("pgm: truncated header");
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        break;
    }
    int value = 0;
    in >> value;
    if (!in) throw IoError("pgm: malformed header field");
    return value;
}

GrayImage load_pgm(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open " + file.string());
    char magic[2] = {};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw IoError("pgm: expected binary P5 in " + file.string());
    const int width = read_pnm_token(in);
    const int height = read_pnm_token(in);
    const int maxval = read_pnm_token(in);
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
        throw IoError("pgm: unsupported geometry or maxval in " + file.string());
    in.get();  // single whitespace after maxval
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("pgm: truncated pixel data in " + file.string());
    GrayImage img(width, height);
    auto& px = img.pixels();
    for (std::size_t i = 0; i < raw.size(); ++i) px[i] = raw[i];
    return img;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

GrayImage load_png_gray(const std::filesystem::path& file) {
    FilePtr fp(std::fopen(file.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + file.string());
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: allocation failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png: allocation failure");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: failed to decode " + file.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * channels);
    GrayImage img(static_cast<int>(width), static_cast<int>(height));
    for (png_uint_32 y = 0; y < height; ++y) {
        png_read_row(png, row.data(), nullptr);
        float* dst = img.pixels().data() + static_cast<std::size_t>(y) * width;
        if (channels == 1) {
            for (png_uint_32 x = 0; x < width; ++x) dst[x] = row[x];
        } else {
            // Luminance by channel average, per the module contract.
            for (png_uint_32 x = 0; x < width; ++x) {
                const std::uint8_t* p = row.data() + static_cast<std::size_t>(x) * channels;
                dst[x] = static_cast<float>((p[0] + p[1] + p[2]) / 3.0);
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

bool has_png_signature(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in && !png_sig_cmp(sig, 0, 8);
}

void write_png_impl(const std::filesystem::path& file, int width, int height,
                    int color_type, int stride, const std::uint8_t* data) {
    FilePtr fp(std::fopen(file.c_str(), "wb"));
    if (!fp) throw IoError("cannot write " + file.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: allocation failure");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png: allocation failure");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png: failed to encode " + file.string());
    }
    png_init_io(png, fp.get());
    // Pinned filter and compression settings keep output byte-stable.
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_SUB);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(data + static_cast<std::size_t>(y) * stride));
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

GrayImage load_gray(const std::filesystem::path& file) {
    if (!std::filesystem::exists(file))
        throw IoError("no such file: " + file.string());
    if (has_png_signature(file)) return load_png_gray(file);
    return load_pgm(file);
}

void save_pgm(const GrayImage& img, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot write " + file.string());
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<std::uint8_t> raw(img.pixels().size());
    const auto& px = img.pixels();
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = static_cast<std::uint8_t>(std::clamp(px[i], 0.0f, 255.0f) + 0.5f);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("short write to " + file.string());
}

void save_png(const RgbImage& img, const std::filesystem::path& file) {
    write_png_impl(file, img.width(), img.height(), PNG_COLOR_TYPE_RGB,
                   img.width() * 3, img.pixels().data());
}

void save_png(const GrayImage& img, const std::filesystem::path& file) {
    std::vector<std::uint8_t> raw(img.pixels().size());
    const auto& px = img.pixels();
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = static_cast<std::uint8_t>(std::clamp(px[i], 0.0f, 255.0f) + 0.5f);
    write_png_impl(file, img.width(), img.height(), PNG_COLOR_TYPE_GRAY,
                   img.width(), raw.data());
}

}  // namespace egoflow
