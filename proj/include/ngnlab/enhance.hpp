#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "ngnlab/errors.hpp"
#include "ngnlab/firefly.hpp"
#include "ngnlab/image.hpp"

namespace ngnlab {

// Gain/bias/gamma intensity transform searched by the firefly optimizer.
// The bounds double as the FA search box.
struct EnhanceParams {
    double gain = 1.0;   // in [0.5, 2.0]
    double bias = 0.0;   // in [-0.3, 0.3], normalized intensity
    double gamma = 1.0;  // in [0.3, 3.0]

    static std::vector<std::pair<double, double>> search_bounds() {
        return {{0.5, 2.0}, {-0.3, 0.3}, {0.3, 3.0}};
    }
};

// v' = clamp(gain * v^gamma + bias, 0, 1) on normalized intensities. Only 256
// input values exist, so the transform is applied through a lookup table.
inline GrayImage apply_enhance(const GrayImage& img, const EnhanceParams& p) {
    std::array<std::uint8_t, 256> lut;
    for (int v = 0; v < 256; ++v) {
        const double x = v / 255.0;
        const double y = std::min(1.0, std::max(0.0, p.gain * std::pow(x, p.gamma) + p.bias));
        lut[v] = static_cast<std::uint8_t>(std::lround(255.0 * y));
    }
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = lut[img.data[i]];
    return out;
}

// Shannon entropy (bits) of the 256-bin intensity histogram.
inline double histogram_entropy(const GrayImage& img) {
    if (img.data.empty()) return 0.0;
    std::array<std::size_t, 256> hist{};
    for (std::uint8_t v : img.data) ++hist[v];
    const double n = static_cast<double>(img.data.size());
    double h = 0.0;
    for (std::size_t c : hist) {
        if (c == 0) continue;
        const double p = c / n;
        h -= p * std::log2(p);
    }
    return h;
}

// Mean central-difference gradient magnitude of the normalized image, scaled
// so the result lies in [0, 1]. Borders use replicated neighbors.
inline double mean_gradient(const GrayImage& img) {
    if (img.data.empty()) return 0.0;
    double total = 0.0;
    for (int y = 0; y < img.height; ++y) {
        const int yu = std::max(y - 1, 0), yd = std::min(y + 1, img.height - 1);
        for (int x = 0; x < img.width; ++x) {
            const int xl = std::max(x - 1, 0), xr = std::min(x + 1, img.width - 1);
            const double gx = (img.at(xr, y) - img.at(xl, y)) / (2.0 * 255.0);
            const double gy = (img.at(x, yd) - img.at(x, yu)) / (2.0 * 255.0);
            total += std::sqrt(gx * gx + gy * gy);
        }
    }
    const double mean = total / static_cast<double>(img.data.size());
    return mean / (0.5 * std::sqrt(2.0));  // max magnitude of a [-0.5,0.5]^2 gradient
}

// Enhancement objective: histogram entropy plus half the edge-content term.
inline double enhance_fitness(const GrayImage& img) {
    return histogram_entropy(img) + 0.5 * mean_gradient(img);
}

// Searches the gain/bias/gamma box for the transform maximizing
// enhance_fitness. The identity transform is seeded as firefly 0, so the
// result is never worse than leaving the image alone.
inline std::pair<GrayImage, EnhanceParams> fa_enhance(const GrayImage& img, FaConfig cfg) {
    cfg.bounds = EnhanceParams::search_bounds();
    const std::vector<double> identity = {1.0, 0.0, 1.0};
    auto objective = [&img](const std::vector<double>& v) {
        return enhance_fitness(apply_enhance(img, {v[0], v[1], v[2]}));
    };
    const FaResult r = fa_optimize(objective, cfg, &identity);
    const EnhanceParams best{r.best_position[0], r.best_position[1], r.best_position[2]};
    return {apply_enhance(img, best), best};
}

}  // namespace ngnlab
