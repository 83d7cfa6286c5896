#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

#include "ngnlab/errors.hpp"
#include "ngnlab/image.hpp"
#include "ngnlab/matrix.hpp"
#include "ngnlab/neural_gas.hpp"
#include "ngnlab/rng.hpp"

namespace ngnlab {

using Histogram = std::array<std::size_t, 256>;

inline Histogram intensity_histogram(const GrayImage& img) {
    Histogram h{};
    for (std::uint8_t v : img.data) ++h[v];
    return h;
}

namespace detail {

// Compacts arbitrary positive labels to 1..m ordered by ascending mean source
// intensity (ties keep the original label order).
inline LabelMap relabel_by_intensity(std::vector<int> labels, int width, int height,
                                     const GrayImage& img) {
    int max_label = 0;
    for (int l : labels) max_label = std::max(max_label, l);
    std::vector<double> sum(max_label + 1, 0.0);
    std::vector<std::size_t> count(max_label + 1, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        sum[labels[i]] += img.data[i];
        ++count[labels[i]];
    }
    std::vector<int> present;
    for (int l = 1; l <= max_label; ++l)
        if (count[l] > 0) present.push_back(l);
    std::stable_sort(present.begin(), present.end(), [&](int a, int b) {
        return sum[a] / count[a] < sum[b] / count[b];
    });
    std::vector<int> remap(max_label + 1, 0);
    for (std::size_t i = 0; i < present.size(); ++i) remap[present[i]] = static_cast<int>(i) + 1;

    LabelMap map;
    map.width = width;
    map.height = height;
    map.segment_count = static_cast<int>(present.size());
    map.labels.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) map.labels[i] = remap[labels[i]];
    return map;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Otsu multi-threshold segmentation
// ---------------------------------------------------------------------------

// Exhaustive search for the K-1 thresholds maximizing between-class variance;
// ties resolve to the lexicographically smallest tuple. A class covers the
// interval (t_prev, t] of intensities.
inline std::vector<int> otsu_thresholds(const Histogram& hist, int segments) {
    if (segments < 2 || segments > 5)
        throw ConfigError("otsu supports 2..5 segments");
    int distinct = 0;
    for (std::size_t c : hist) distinct += c > 0;
    if (distinct < 2) throw DegenerateHistogramError("single distinct intensity");

    // prefix counts and intensity sums over bins 0..v
    std::array<double, 257> pcount{}, psum{};
    for (int v = 0; v < 256; ++v) {
        pcount[v + 1] = pcount[v] + static_cast<double>(hist[v]);
        psum[v + 1] = psum[v] + static_cast<double>(hist[v]) * v;
    }
    // Maximizing sum over classes of m_c^2 / w_c is equivalent to maximizing
    // the between-class variance.
    auto class_term = [&](int lo, int hi) {  // bins lo..hi inclusive
        const double w = pcount[hi + 1] - pcount[lo];
        if (w <= 0.0) return 0.0;
        const double m = psum[hi + 1] - psum[lo];
        return m * m / w;
    };

    const int k = segments - 1;
    std::vector<int> current(k), best(k, -1);
    double best_score = -1.0;
    // DFS over strictly increasing tuples; ascending enumeration makes the
    // first maximizer the lexicographically smallest.
    auto dfs = [&](auto&& self, int depth, int start, int class_lo, double acc) -> void {
        if (depth == k) {
            const double score = acc + class_term(class_lo, 255);
            if (score > best_score) {
                best_score = score;
                best = current;
            }
            return;
        }
        for (int t = start; t <= 254 - (k - 1 - depth); ++t) {
            current[depth] = t;
            self(self, depth + 1, t + 1, t + 1, acc + class_term(class_lo, t));
        }
    };
    dfs(dfs, 0, 0, 0, 0.0);
    return best;
}

inline LabelMap segment_otsu(const GrayImage& img, int segments) {
    const std::vector<int> thresholds = otsu_thresholds(intensity_histogram(img), segments);
    std::vector<int> labels(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const int v = img.data[i];
        int c = 0;
        while (c < static_cast<int>(thresholds.size()) && v > thresholds[c]) ++c;
        labels[i] = c + 1;
    }
    return detail::relabel_by_intensity(std::move(labels), img.width, img.height, img);
}

// ---------------------------------------------------------------------------
// K-means segmentation (Lloyd's algorithm on scalar intensities)
// ---------------------------------------------------------------------------

struct KmeansResult {
    std::vector<double> centroids;       // ascending not guaranteed; per original index
    std::vector<int> assignments;        // centroid index per sample
    std::vector<double> objective_log;   // WCSS after each assignment step
    int iterations = 0;
};

// Plain Lloyd iteration until the assignments reach a fixpoint or max_iters.
// Initial centroids are seeded draws of distinct sample values; a cluster that
// empties is re-seeded to the sample farthest from its assigned centroid.
inline KmeansResult kmeans_scalar(const std::vector<double>& samples, int k,
                                  std::uint64_t seed, int max_iters = 100) {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (samples.empty()) throw EmptyDataError("kmeans needs samples");

    Rng rng(seed);
    KmeansResult res;
    // distinct initial values; fewer distinct values than k reduces the count
    std::vector<double> distinct_pool(samples);
    std::sort(distinct_pool.begin(), distinct_pool.end());
    distinct_pool.erase(std::unique(distinct_pool.begin(), distinct_pool.end()),
                        distinct_pool.end());
    const int k_eff = std::min<int>(k, static_cast<int>(distinct_pool.size()));
    while (static_cast<int>(res.centroids.size()) < k_eff) {
        const double v = samples[rng.next_index(samples.size())];
        if (std::find(res.centroids.begin(), res.centroids.end(), v) == res.centroids.end())
            res.centroids.push_back(v);
    }

    const int kc = static_cast<int>(res.centroids.size());
    res.assignments.assign(samples.size(), -1);
    std::vector<int> prev(samples.size(), -1);
    std::vector<double> sum(kc);
    std::vector<std::size_t> count(kc);

    for (int iter = 0; iter < max_iters; ++iter) {
        // assignment (tie at equal distance -> lower centroid index)
        double wcss = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            int best = 0;
            double best_d = std::abs(samples[i] - res.centroids[0]);
            for (int c = 1; c < kc; ++c) {
                const double d = std::abs(samples[i] - res.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            res.assignments[i] = best;
            wcss += best_d * best_d;
        }
        res.objective_log.push_back(wcss);
        res.iterations = iter + 1;
        if (res.assignments == prev) break;
        prev = res.assignments;

        // centroid update
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(count.begin(), count.end(), std::size_t{0});
        for (std::size_t i = 0; i < samples.size(); ++i) {
            sum[res.assignments[i]] += samples[i];
            ++count[res.assignments[i]];
        }
        for (int c = 0; c < kc; ++c) {
            if (count[c] > 0) {
                res.centroids[c] = sum[c] / static_cast<double>(count[c]);
            } else {
                // farthest sample from its current centroid
                std::size_t far_idx = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < samples.size(); ++i) {
                    const double d = std::abs(samples[i] - res.centroids[res.assignments[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far_idx = i;
                    }
                }
                res.centroids[c] = samples[far_idx];
            }
        }
    }
    return res;
}

inline LabelMap segment_kmeans(const GrayImage& img, int segments, std::uint64_t seed,
                               int max_iters = 100) {
    std::vector<double> samples(img.data.begin(), img.data.end());
    const KmeansResult res = kmeans_scalar(samples, segments, seed, max_iters);
    std::vector<int> labels(img.data.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = res.assignments[i] + 1;
    return detail::relabel_by_intensity(std::move(labels), img.width, img.height, img);
}

// ---------------------------------------------------------------------------
// Watershed segmentation (Vincent-Soille immersion)
// ---------------------------------------------------------------------------

inline std::vector<double> box_mean_3x3(const GrayImage& img) {
    std::vector<double> out(img.data.size());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double s = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = std::min(std::max(y + dy, 0), img.height - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::min(std::max(x + dx, 0), img.width - 1);
                    s += img.at(xx, yy);
                }
            }
            out[static_cast<std::size_t>(y) * img.width + x] = s / 9.0;
        }
    }
    return out;
}

inline std::vector<double> gradient_magnitude(const std::vector<double>& field, int width,
                                              int height) {
    std::vector<double> out(field.size());
    auto at = [&](int x, int y) { return field[static_cast<std::size_t>(y) * width + x]; };
    for (int y = 0; y < height; ++y) {
        const int yu = std::max(y - 1, 0), yd = std::min(y + 1, height - 1);
        for (int x = 0; x < width; ++x) {
            const int xl = std::max(x - 1, 0), xr = std::min(x + 1, width - 1);
            const double gx = (at(xr, y) - at(xl, y)) / 2.0;
            const double gy = (at(x, yd) - at(x, yu)) / 2.0;
            out[static_cast<std::size_t>(y) * width + x] = std::sqrt(gx * gx + gy * gy);
        }
    }
    return out;
}

// Immersion flooding of a scalar landscape (8-connectivity). Returns basin
// labels 1..B with watershed-line pixels left at 0.
inline std::vector<int> watershed_immersion(const std::vector<double>& field, int width,
                                            int height, int* basin_count = nullptr) {
    constexpr int kInit = -1;
    constexpr int kMask = -2;
    constexpr int kWshed = 0;
    constexpr std::size_t kFict = std::numeric_limits<std::size_t>::max();

    const std::size_t n = field.size();
    std::vector<int> lab(n, kInit);
    std::vector<int> dist(n, 0);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return field[a] < field[b]; });

    auto neighbors = [&](std::size_t p, auto&& fn) {
        const int x = static_cast<int>(p % width);
        const int y = static_cast<int>(p / width);
        static constexpr int dx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
        static constexpr int dy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
        for (int i = 0; i < 8; ++i) {
            const int xx = x + dx[i], yy = y + dy[i];
            if (xx >= 0 && xx < width && yy >= 0 && yy < height)
                fn(static_cast<std::size_t>(yy) * width + xx);
        }
    };

    std::deque<std::size_t> fifo;
    int curlab = 0;
    std::size_t level_start = 0;
    while (level_start < n) {
        std::size_t level_end = level_start;
        const double h = field[order[level_start]];
        while (level_end < n && field[order[level_end]] == h) ++level_end;

        for (std::size_t i = level_start; i < level_end; ++i) lab[order[i]] = kMask;
        for (std::size_t i = level_start; i < level_end; ++i) {
            const std::size_t p = order[i];
            bool border = false;
            neighbors(p, [&](std::size_t q) {
                if (lab[q] > 0 || lab[q] == kWshed) border = true;
            });
            if (border) {
                dist[p] = 1;
                fifo.push_back(p);
            }
        }

        int curdist = 1;
        fifo.push_back(kFict);
        while (true) {
            std::size_t p = fifo.front();
            fifo.pop_front();
            if (p == kFict) {
                if (fifo.empty()) break;
                fifo.push_back(kFict);
                ++curdist;
                p = fifo.front();
                fifo.pop_front();
            }
            neighbors(p, [&](std::size_t q) {
                if (dist[q] < curdist && (lab[q] > 0 || lab[q] == kWshed)) {
                    if (lab[q] > 0) {
                        if (lab[p] == kMask || lab[p] == kWshed)
                            lab[p] = lab[q];
                        else if (lab[p] != lab[q])
                            lab[p] = kWshed;
                    } else if (lab[p] == kMask) {
                        lab[p] = kWshed;
                    }
                } else if (lab[q] == kMask && dist[q] == 0) {
                    dist[q] = curdist + 1;
                    fifo.push_back(q);
                }
            });
        }

        // any MASK pixel left at this level starts a new basin (regional minimum)
        for (std::size_t i = level_start; i < level_end; ++i) {
            const std::size_t p = order[i];
            dist[p] = 0;
            if (lab[p] == kMask) {
                ++curlab;
                lab[p] = curlab;
                fifo.push_back(p);
                while (!fifo.empty()) {
                    const std::size_t q = fifo.front();
                    fifo.pop_front();
                    neighbors(q, [&](std::size_t r) {
                        if (lab[r] == kMask) {
                            lab[r] = curlab;
                            fifo.push_back(r);
                        }
                    });
                }
            }
        }
        level_start = level_end;
    }
    if (basin_count) *basin_count = curlab;
    return lab;
}

// Full pipeline: 3x3 mean smoothing, gradient magnitude, immersion, then
// watershed-line pixels are absorbed into the neighboring basin whose mean
// intensity is closest to theirs.
inline LabelMap segment_watershed(const GrayImage& img) {
    const std::vector<double> smooth = box_mean_3x3(img);
    const std::vector<double> grad = gradient_magnitude(smooth, img.width, img.height);
    int basins = 0;
    std::vector<int> lab = watershed_immersion(grad, img.width, img.height, &basins);
    if (basins == 0) {  // unreachable for nonempty inputs: the lowest level seeds a basin
        std::fill(lab.begin(), lab.end(), 1);
        return detail::relabel_by_intensity(std::move(lab), img.width, img.height, img);
    }

    // frozen basin means over the source image
    std::vector<double> sum(basins + 1, 0.0);
    std::vector<std::size_t> count(basins + 1, 0);
    for (std::size_t i = 0; i < lab.size(); ++i) {
        if (lab[i] > 0) {
            sum[lab[i]] += img.data[i];
            ++count[lab[i]];
        }
    }
    std::vector<double> mean(basins + 1, 0.0);
    for (int b = 1; b <= basins; ++b)
        if (count[b] > 0) mean[b] = sum[b] / static_cast<double>(count[b]);

    auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * img.width + x; };
    bool pending = true;
    while (pending) {
        pending = false;
        const std::vector<int> snapshot = lab;
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                const std::size_t p = idx(x, y);
                if (snapshot[p] != 0) continue;
                int best_label = 0;
                double best_diff = std::numeric_limits<double>::infinity();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int xx = x + dx, yy = y + dy;
                        if (xx < 0 || xx >= img.width || yy < 0 || yy >= img.height) continue;
                        const int l = snapshot[idx(xx, yy)];
                        if (l <= 0) continue;
                        const double diff = std::abs(static_cast<double>(img.data[p]) - mean[l]);
                        if (diff < best_diff || (diff == best_diff && l < best_label)) {
                            best_diff = diff;
                            best_label = l;
                        }
                    }
                }
                if (best_label > 0) {
                    lab[p] = best_label;
                } else {
                    pending = true;  // line pixel with only line neighbors; next pass
                }
            }
        }
    }
    return detail::relabel_by_intensity(std::move(lab), img.width, img.height, img);
}

// ---------------------------------------------------------------------------
// NGN segmentation: 1-D vector quantization of pixel intensities
// ---------------------------------------------------------------------------

// Trains a neural gas codebook on the normalized pixel intensities and labels
// every pixel with its nearest codebook entry (tie -> lower neuron index),
// relabeled so intensities ascend with the label.
inline LabelMap segment_ngn(const GrayImage& img, int segments, NgnConfig cfg,
                            Codebook* out_codebook = nullptr) {
    if (segments < 1) throw ConfigError("segments must be >= 1");
    if (img.data.empty()) throw EmptyDataError("empty image");
    cfg.neuron_count = segments;

    RowMatrix samples(img.data.size(), 1);
    for (std::size_t i = 0; i < img.data.size(); ++i) samples.data[i] = img.data[i] / 255.0;
    const Codebook cb = train_ngn(samples, cfg);

    // nearest-weight label per distinct intensity
    std::array<int, 256> lut;
    for (int v = 0; v < 256; ++v) {
        const double x = v / 255.0;
        int best = 0;
        double best_d = std::abs(cb.weights[0][0] - x);
        for (int i = 1; i < segments; ++i) {
            const double d = std::abs(cb.weights[i][0] - x);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        lut[v] = best + 1;
    }
    std::vector<int> labels(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) labels[i] = lut[img.data[i]];
    if (out_codebook) *out_codebook = cb;
    return detail::relabel_by_intensity(std::move(labels), img.width, img.height, img);
}

// ---------------------------------------------------------------------------
// BW conversion
// ---------------------------------------------------------------------------

enum class BwMode { brightest, threshold_label };

inline BwMask to_bw(const LabelMap& map, BwMode mode, int threshold_label = 0) {
    BwMask mask(map.width, map.height);
    int cutoff;
    if (mode == BwMode::brightest) {
        cutoff = map.segment_count;
    } else {
        if (threshold_label < 1 || threshold_label > map.segment_count)
            throw PaletteError("threshold label " + std::to_string(threshold_label) +
                               " outside 1.." + std::to_string(map.segment_count));
        cutoff = threshold_label;
    }
    for (std::size_t i = 0; i < map.labels.size(); ++i)
        mask.bits[i] = map.labels[i] >= cutoff ? 1 : 0;
    return mask;
}

}  // namespace ngnlab
