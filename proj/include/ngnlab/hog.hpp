#pragma once

#include <cmath>
#include <vector>

#include "ngnlab/errors.hpp"
#include "ngnlab/image.hpp"

namespace ngnlab {

// Histogram-of-oriented-gradients descriptor: central-difference gradients,
// unsigned orientations voted into `bins` with linear interpolation between
// adjacent bin centers, and per-block L2 normalization.
// Length = (cells_x-block+1) * (cells_y-block+1) * block^2 * bins.
inline std::vector<double> extract_hog(const GrayImage& img, int cell = 8, int block = 2,
                                       int bins = 9) {
    if (cell < 1 || block < 1 || bins < 1) throw ConfigError("bad HOG parameters");
    if (img.width % cell != 0 || img.height % cell != 0)
        throw DimensionError("image dimensions must be divisible by the cell size");
    const int cells_x = img.width / cell;
    const int cells_y = img.height / cell;
    if (cells_x < block || cells_y < block)
        throw DimensionError("image too small for the block size");

    std::vector<double> hist(static_cast<std::size_t>(cells_x) * cells_y * bins, 0.0);
    const double bin_width = 180.0 / bins;

    for (int y = 0; y < img.height; ++y) {
        const int yu = std::max(y - 1, 0), yd = std::min(y + 1, img.height - 1);
        for (int x = 0; x < img.width; ++x) {
            const int xl = std::max(x - 1, 0), xr = std::min(x + 1, img.width - 1);
            const double gx = static_cast<double>(img.at(xr, y)) - img.at(xl, y);
            const double gy = static_cast<double>(img.at(x, yd)) - img.at(x, yu);
            const double mag = std::sqrt(gx * gx + gy * gy);
            if (mag == 0.0) continue;
            double angle = std::atan2(gy, gx) * 180.0 / M_PI;  // unsigned orientation
            if (angle < 0.0) angle += 180.0;
            if (angle >= 180.0) angle -= 180.0;
            const double pos = angle / bin_width;
            const int b0 = static_cast<int>(pos) % bins;
            const double frac = pos - static_cast<int>(pos);
            const std::size_t base =
                (static_cast<std::size_t>(y / cell) * cells_x + x / cell) * bins;
            hist[base + b0] += mag * (1.0 - frac);
            hist[base + (b0 + 1) % bins] += mag * frac;
        }
    }

    const int blocks_x = cells_x - block + 1;
    const int blocks_y = cells_y - block + 1;
    std::vector<double> descriptor;
    descriptor.reserve(static_cast<std::size_t>(blocks_x) * blocks_y * block * block * bins);
    const double eps = 1e-6;
    std::vector<double> v(static_cast<std::size_t>(block) * block * bins);
    for (int by = 0; by < blocks_y; ++by) {
        for (int bx = 0; bx < blocks_x; ++bx) {
            std::size_t k = 0;
            double norm2 = 0.0;
            for (int cy = 0; cy < block; ++cy) {
                for (int cx = 0; cx < block; ++cx) {
                    const std::size_t base =
                        (static_cast<std::size_t>(by + cy) * cells_x + bx + cx) * bins;
                    for (int b = 0; b < bins; ++b) {
                        v[k] = hist[base + b];
                        norm2 += v[k] * v[k];
                        ++k;
                    }
                }
            }
            const double inv = 1.0 / std::sqrt(norm2 + eps * eps);
            for (std::size_t i = 0; i < v.size(); ++i) descriptor.push_back(v[i] * inv);
        }
    }
    return descriptor;
}

inline std::size_t hog_length(int width, int height, int cell = 8, int block = 2,
                              int bins = 9) {
    const int cells_x = width / cell;
    const int cells_y = height / cell;
    return static_cast<std::size_t>(cells_x - block + 1) * (cells_y - block + 1) * block *
           block * bins;
}

}  // namespace ngnlab
