#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ngnlab/errors.hpp"

namespace ngnlab {

// Row-major 8-bit grayscale raster, the pixel container every stage shares.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // size = width*height

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t size() const { return data.size(); }
    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    bool operator==(const GrayImage& o) const {
        return width == o.width && height == o.height && data == o.data;
    }
};

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // size = 3*width*height, interleaved

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(3u * w * h, 0) {}
};

// Per-pixel segment index in 1..segment_count, ordered so that segment 1 is
// the darkest and segment K the brightest by mean source intensity.
struct LabelMap {
    int width = 0;
    int height = 0;
    int segment_count = 0;
    std::vector<int> labels;  // size = width*height, values in [1, segment_count]
};

struct BwMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1, size = width*height

    BwMask() = default;
    BwMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb& o) const { return r == o.r && g == o.g && b == o.b; }
};

struct IndexedPalette {
    std::vector<Rgb> colors;  // one color per segment index, pairwise distinct
};

// Fixed preview palette: black, white, red, green, blue, yellow, magenta, cyan.
inline IndexedPalette default_palette(int segments) {
    static const Rgb base[8] = {
        {0, 0, 0},     {255, 255, 255}, {255, 0, 0},   {0, 255, 0},
        {0, 0, 255},   {255, 255, 0},   {255, 0, 255}, {0, 255, 255},
    };
    IndexedPalette p;
    for (int i = 0; i < segments; ++i) {
        if (i < 8) {
            p.colors.push_back(base[i]);
        } else {
            // Procedural fallback for K > 8: stride through the RGB cube.
            std::uint32_t h = static_cast<std::uint32_t>(i) * 2654435761u;
            p.colors.push_back({static_cast<std::uint8_t>(h & 0xff),
                                static_cast<std::uint8_t>((h >> 8) & 0xff),
                                static_cast<std::uint8_t>((h >> 16) & 0xff)});
        }
    }
    return p;
}

inline std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::min(255.0, std::max(0.0, v)));
}

// BT.601 luma, rounded to nearest.
inline std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return clamp_u8(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

// Bilinear resample with pixel-center alignment; same-size resize is the
// identity and a constant image stays constant.
inline GrayImage resize_bilinear(const GrayImage& img, int w, int h) {
    if (w < 1 || h < 1) throw DimensionError("resize target must be positive");
    if (img.width == w && img.height == h) return img;
    GrayImage out(w, h);
    const double sx = static_cast<double>(img.width) / w;
    const double sy = static_cast<double>(img.height) / h;
    for (int y = 0; y < h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::min(std::max(fy, 0.0), static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::min(std::max(fx, 0.0), static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            const double top = img.at(x0, y0) * (1.0 - wx) + img.at(x1, y0) * wx;
            const double bot = img.at(x0, y1) * (1.0 - wx) + img.at(x1, y1) * wx;
            out.at(x, y) = clamp_u8(std::lround(top * (1.0 - wy) + bot * wy));
        }
    }
    return out;
}

// Lossless row split; concatenating the rows reproduces the raster.
inline std::vector<std::vector<std::uint8_t>> image_to_rows(const GrayImage& img) {
    std::vector<std::vector<std::uint8_t>> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        rows[y].assign(img.data.begin() + static_cast<std::ptrdiff_t>(y) * img.width,
                       img.data.begin() + static_cast<std::ptrdiff_t>(y + 1) * img.width);
    }
    return rows;
}

inline GrayImage rows_to_image(const std::vector<std::vector<std::uint8_t>>& rows) {
    if (rows.empty()) return {};
    GrayImage img(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
    for (std::size_t y = 0; y < rows.size(); ++y) {
        if (rows[y].size() != rows.front().size())
            throw DimensionError("ragged rows");
        std::copy(rows[y].begin(), rows[y].end(),
                  img.data.begin() + static_cast<std::ptrdiff_t>(y) * img.width);
    }
    return img;
}

inline RgbImage labelmap_to_color(const LabelMap& map, const IndexedPalette& palette) {
    RgbImage out(map.width, map.height);
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
        const int label = map.labels[i];
        if (label < 1 || static_cast<std::size_t>(label) > palette.colors.size())
            throw PaletteError("label " + std::to_string(label) + " exceeds palette of " +
                               std::to_string(palette.colors.size()));
        const Rgb& c = palette.colors[label - 1];
        out.data[3 * i + 0] = c.r;
        out.data[3 * i + 1] = c.g;
        out.data[3 * i + 2] = c.b;
    }
    return out;
}

}  // namespace ngnlab
