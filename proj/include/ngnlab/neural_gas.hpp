#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "ngnlab/errors.hpp"
#include "ngnlab/matrix.hpp"
#include "ngnlab/rng.hpp"

namespace ngnlab {

// Neural gas training parameters. Step size and neighborhood range anneal
// from their initial to their final value over the whole presentation
// schedule (t_max = iterations * sample count).
struct NgnConfig {
    int neuron_count = 5;
    int iterations = 20;  // one iteration = one full pass over the samples
    double epsilon_initial = 0.3;
    double epsilon_final = 0.02;
    double lambda_initial = 2.0;
    double lambda_final = 0.1;
    std::uint64_t seed = 0;

    void validate() const {
        if (neuron_count < 1) throw ConfigError("neuron_count must be >= 1");
        if (iterations < 1) throw ConfigError("iterations must be >= 1");
        if (epsilon_initial <= 0.0 || epsilon_initial > 1.0)
            throw ConfigError("epsilon_initial must be in (0,1]");
        if (epsilon_final <= 0.0 || epsilon_final > epsilon_initial)
            throw ConfigError("epsilon_final must be in (0, epsilon_initial]");
        if (lambda_initial <= 0.0) throw ConfigError("lambda_initial must be > 0");
        if (lambda_final <= 0.0 || lambda_final > lambda_initial)
            throw ConfigError("lambda_final must be in (0, lambda_initial]");
    }
};

// Learned prototype vectors plus the quantization-error trace: entry 0 is the
// error at initialization, entry p the error after pass p.
struct Codebook {
    int dimension = 0;
    std::vector<std::vector<double>> weights;
    std::vector<double> train_log;
};

// Exponential interpolation between the schedule endpoints; returns `initial`
// at t=0 (and whenever t_max=0) and `final` at t=t_max.
inline double anneal(double initial, double final_value, std::int64_t t, std::int64_t t_max) {
    if (t_max <= 0) return initial;
    return initial * std::pow(final_value / initial,
                              static_cast<double>(t) / static_cast<double>(t_max));
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    return euclidean_distance(std::span<const double>(a), std::span<const double>(b));
}

// Neuron indices sorted by ascending distance to x; ties go to the lower index.
inline std::vector<int> rank_neurons(const Codebook& codebook, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != codebook.dimension)
        throw DimensionError("sample dimension " + std::to_string(x.size()) +
                             " != codebook dimension " + std::to_string(codebook.dimension));
    const int n = static_cast<int>(codebook.weights.size());
    std::vector<double> dist(n);
    for (int i = 0; i < n; ++i) dist[i] = euclidean_distance(codebook.weights[i], x);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dist[a] < dist[b]; });
    return order;
}

// One adaptation step: the rank-k neuron moves toward x by epsilon * e^(-k/lambda).
inline void ngn_step(Codebook& codebook, const std::vector<double>& x, double epsilon,
                     double lambda) {
    const std::vector<int> order = rank_neurons(codebook, x);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double factor = epsilon * std::exp(-static_cast<double>(k) / lambda);
        std::vector<double>& w = codebook.weights[order[k]];
        for (int d = 0; d < codebook.dimension; ++d) w[d] += factor * (x[d] - w[d]);
    }
}

namespace detail {

// Squared distances, insertion-ranked with index tie-break. `order` and
// `dist` are caller-provided scratch of length n.
inline void rank_into(const double* weights, std::size_t dim, int n, const double* x,
                      double* dist, int* order) {
    for (int i = 0; i < n; ++i) {
        const double* w = weights + static_cast<std::size_t>(i) * dim;
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = w[d] - x[d];
            s += diff * diff;
        }
        dist[i] = s;
    }
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 1; i < n; ++i) {
        const int idx = order[i];
        const double d = dist[idx];
        int j = i - 1;
        while (j >= 0 && dist[order[j]] > d) {
            order[j + 1] = order[j];
            --j;
        }
        order[j + 1] = idx;
    }
}

inline double quantization_error_flat(const double* weights, int n, const RowMatrix& samples) {
    double total = 0.0;
    for (std::size_t i = 0; i < samples.rows; ++i) {
        const double* x = samples.data.data() + i * samples.cols;
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            const double* w = weights + static_cast<std::size_t>(k) * samples.cols;
            double s = 0.0;
            for (std::size_t d = 0; d < samples.cols; ++d) {
                const double diff = w[d] - x[d];
                s += diff * diff;
            }
            best = std::min(best, s);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(samples.rows);
}

}  // namespace detail

inline double quantization_error(const Codebook& codebook,
                                 const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) throw EmptyDataError("quantization_error needs samples");
    double total = 0.0;
    for (const auto& s : samples) {
        if (static_cast<int>(s.size()) != codebook.dimension)
            throw DimensionError("sample dimension mismatch");
        double best = std::numeric_limits<double>::infinity();
        for (const auto& w : codebook.weights)
            best = std::min(best, euclidean_distance(w, s));
        total += best;
    }
    return total / static_cast<double>(samples.size());
}

// Trains a codebook on the sample matrix (one row per sample). Weights start
// as seeded draws of distinct samples (with replacement only when there are
// fewer samples than neurons); each pass presents every sample once in
// seeded-shuffled order; t counts individual presentations.
inline Codebook train_ngn(const RowMatrix& samples, const NgnConfig& cfg) {
    cfg.validate();
    if (samples.rows == 0) throw EmptyDataError("train_ngn needs samples");
    const std::size_t dim = samples.cols;
    const std::size_t n_samples = samples.rows;
    const int n = cfg.neuron_count;

    Rng rng(cfg.seed);
    std::vector<double> weights(static_cast<std::size_t>(n) * dim);
    if (n_samples >= static_cast<std::size_t>(n)) {
        std::vector<std::size_t> picked;
        while (picked.size() < static_cast<std::size_t>(n)) {
            const std::size_t idx = rng.next_index(n_samples);
            if (std::find(picked.begin(), picked.end(), idx) == picked.end())
                picked.push_back(idx);
        }
        for (int i = 0; i < n; ++i) {
            auto src = samples.row(picked[i]);
            std::copy(src.begin(), src.end(), weights.begin() + static_cast<std::size_t>(i) * dim);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            auto src = samples.row(rng.next_index(n_samples));
            std::copy(src.begin(), src.end(), weights.begin() + static_cast<std::size_t>(i) * dim);
        }
    }

    Codebook cb;
    cb.dimension = static_cast<int>(dim);
    cb.train_log.push_back(detail::quantization_error_flat(weights.data(), n, samples));

    std::vector<std::size_t> order(n_samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> dist_scratch(n);
    std::vector<int> rank_scratch(n);

    // The schedule value at presentation t is initial*(final/initial)^(t/t_max);
    // consecutive steps differ by a constant ratio, so the hot loop advances by
    // one multiply instead of a pow.
    const std::int64_t t_max =
        static_cast<std::int64_t>(cfg.iterations) * static_cast<std::int64_t>(n_samples);
    const double eps_ratio =
        std::pow(cfg.epsilon_final / cfg.epsilon_initial, 1.0 / static_cast<double>(t_max));
    const double lam_ratio =
        std::pow(cfg.lambda_final / cfg.lambda_initial, 1.0 / static_cast<double>(t_max));
    double eps = cfg.epsilon_initial;
    double lam = cfg.lambda_initial;

    for (int pass = 0; pass < cfg.iterations; ++pass) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            const double* x = samples.data.data() + idx * dim;
            detail::rank_into(weights.data(), dim, n, x, dist_scratch.data(),
                              rank_scratch.data());
            const double decay = std::exp(-1.0 / lam);
            double factor = eps;
            for (int k = 0; k < n; ++k) {
                double* w = weights.data() + static_cast<std::size_t>(rank_scratch[k]) * dim;
                for (std::size_t d = 0; d < dim; ++d) w[d] += factor * (x[d] - w[d]);
                factor *= decay;
            }
            eps *= eps_ratio;
            lam *= lam_ratio;
        }
        cb.train_log.push_back(detail::quantization_error_flat(weights.data(), n, samples));
    }

    cb.weights.resize(n);
    for (int i = 0; i < n; ++i)
        cb.weights[i].assign(weights.begin() + static_cast<std::size_t>(i) * dim,
                             weights.begin() + static_cast<std::size_t>(i + 1) * dim);
    return cb;
}

inline Codebook train_ngn(const std::vector<std::vector<double>>& samples, const NgnConfig& cfg) {
    if (samples.empty()) throw EmptyDataError("train_ngn needs samples");
    return train_ngn(RowMatrix::from_rows(samples), cfg);
}

inline nlohmann::json codebook_to_json(const Codebook& cb) {
    return nlohmann::json{
        {"dimension", cb.dimension}, {"weights", cb.weights}, {"train_log", cb.train_log}};
}

inline Codebook codebook_from_json(const nlohmann::json& j) {
    Codebook cb;
    cb.dimension = j.at("dimension").get<int>();
    cb.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    cb.train_log = j.at("train_log").get<std::vector<double>>();
    return cb;
}

}  // namespace ngnlab
