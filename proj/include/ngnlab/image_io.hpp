#pragma once

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <png.h>

#include "ngnlab/errors.hpp"
#include "ngnlab/image.hpp"

namespace ngnlab {

// ---------------------------------------------------------------------------
// Binary PGM (P5, maxval 255): the canonical lossless interchange format.
// ---------------------------------------------------------------------------

namespace detail {

inline int pnm_next_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {  // comment runs to end of line
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok.empty() ? EOF : 0;
}

}  // namespace detail

inline GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string tok;
    if (detail::pnm_next_token(in, tok) == EOF || tok != "P5")
        throw FormatError(path + ": not a binary PGM (P5)");
    long vals[3];
    for (long& v : vals) {
        if (detail::pnm_next_token(in, tok) == EOF)
            throw FormatError(path + ": truncated PGM header");
        try {
            v = std::stol(tok);
        } catch (const std::exception&) {
            throw FormatError(path + ": bad PGM header token '" + tok + "'");
        }
    }
    if (vals[0] < 1 || vals[1] < 1) throw FormatError(path + ": bad PGM dimensions");
    if (vals[2] != 255) throw FormatError(path + ": only maxval 255 supported");
    GrayImage img(static_cast<int>(vals[0]), static_cast<int>(vals[1]));
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw FormatError(path + ": truncated PGM payload");
    return img;
}

inline void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw IoError("short write to " + path);
}

// ---------------------------------------------------------------------------
// PNG via libpng. Reads any 8/16-bit gray/palette/RGB(A) input; color is
// reduced to BT.601 luma. Writers emit 8-bit gray, RGB, or palette images.
// ---------------------------------------------------------------------------

namespace detail {

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

inline bool has_png_signature(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char sig[8] = {0};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

}  // namespace detail

inline GrayImage load_png_gray(const std::string& path) {
    detail::PngReader r;
    r.fp = std::fopen(path.c_str(), "rb");
    if (!r.fp) throw IoError("cannot open " + path);
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    r.info = png_create_info_struct(r.png);
    if (!r.png || !r.info) throw IoError("libpng init failed");
    if (setjmp(png_jmpbuf(r.png))) throw FormatError(path + ": libpng decode error");
    png_init_io(r.png, r.fp);
    png_read_info(r.png, r.info);

    png_set_strip_16(r.png);
    png_set_palette_to_rgb(r.png);
    png_set_expand_gray_1_2_4_to_8(r.png);
    png_set_strip_alpha(r.png);
    png_read_update_info(r.png, r.info);

    const int width = static_cast<int>(png_get_image_width(r.png, r.info));
    const int height = static_cast<int>(png_get_image_height(r.png, r.info));
    const int channels = png_get_channels(r.png, r.info);
    if (channels != 1 && channels != 3)
        throw FormatError(path + ": unsupported PNG channel count");

    std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * channels);
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y) {
        png_read_row(r.png, row.data(), nullptr);
        for (int x = 0; x < width; ++x) {
            img.at(x, y) = channels == 1
                               ? row[x]
                               : rgb_to_luma(row[3 * x], row[3 * x + 1], row[3 * x + 2]);
        }
    }
    png_read_end(r.png, nullptr);
    return img;
}

namespace detail {

inline PngWriter open_png_writer(const std::string& path) {
    PngWriter w;
    w.fp = std::fopen(path.c_str(), "wb");
    if (!w.fp) throw IoError("cannot write " + path);
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    w.info = png_create_info_struct(w.png);
    if (!w.png || !w.info) throw IoError("libpng init failed");
    return w;
}

}  // namespace detail

inline void save_png(const GrayImage& img, const std::string& path) {
    detail::PngWriter w = detail::open_png_writer(path);
    if (setjmp(png_jmpbuf(w.png))) throw IoError(path + ": libpng encode error");
    png_init_io(w.png, w.fp);
    png_set_IHDR(w.png, w.info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(w.png, const_cast<png_bytep>(&img.data[static_cast<std::size_t>(y) * img.width]));
    png_write_end(w.png, nullptr);
}

inline void save_png(const RgbImage& img, const std::string& path) {
    detail::PngWriter w = detail::open_png_writer(path);
    if (setjmp(png_jmpbuf(w.png))) throw IoError(path + ": libpng encode error");
    png_init_io(w.png, w.fp);
    png_set_IHDR(w.png, w.info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(w.png, const_cast<png_bytep>(&img.data[3u * y * img.width]));
    png_write_end(w.png, nullptr);
}

// True indexed PNG (PLTE chunk) when the palette fits, RGB otherwise.
inline void save_png_indexed(const LabelMap& map, const IndexedPalette& palette,
                             const std::string& path) {
    if (map.segment_count > 256 ||
        palette.colors.size() > 256 ||
        static_cast<std::size_t>(map.segment_count) > palette.colors.size()) {
        save_png(labelmap_to_color(map, palette), path);
        return;
    }
    detail::PngWriter w = detail::open_png_writer(path);
    if (setjmp(png_jmpbuf(w.png))) throw IoError(path + ": libpng encode error");
    png_init_io(w.png, w.fp);
    png_set_IHDR(w.png, w.info, map.width, map.height, 8, PNG_COLOR_TYPE_PALETTE,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_color> plte(palette.colors.size());
    for (std::size_t i = 0; i < palette.colors.size(); ++i)
        plte[i] = {palette.colors[i].r, palette.colors[i].g, palette.colors[i].b};
    png_set_PLTE(w.png, w.info, plte.data(), static_cast<int>(plte.size()));
    png_write_info(w.png, w.info);
    std::vector<std::uint8_t> row(map.width);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const int label = map.labels[static_cast<std::size_t>(y) * map.width + x];
            if (label < 1 || static_cast<std::size_t>(label) > palette.colors.size())
                throw PaletteError("label exceeds palette");
            row[x] = static_cast<std::uint8_t>(label - 1);
        }
        png_write_row(w.png, row.data());
    }
    png_write_end(w.png, nullptr);
}

// Format is sniffed from content, not the file extension.
inline GrayImage load_gray(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path);
    char head[2] = {0, 0};
    probe.read(head, 2);
    probe.close();
    if (head[0] == 'P' && head[1] == '5') return load_pgm(path);
    if (detail::has_png_signature(path)) return load_png_gray(path);
    throw FormatError(path + ": not a PNG or binary PGM file");
}

}  // namespace ngnlab
