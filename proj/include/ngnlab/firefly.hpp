#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "ngnlab/errors.hpp"
#include "ngnlab/rng.hpp"

namespace ngnlab {

struct FaConfig {
    int population = 10;
    int iterations = 20;
    double mutation_rate = 0.2;      // random-walk coefficient alpha
    double light_absorption = 1.0;   // gamma
    double attraction = 2.0;         // beta0
    double damping = 0.98;           // multiplies the walk scale each generation
    std::vector<std::pair<double, double>> bounds;  // per-dimension (lo, hi)
    std::uint64_t seed = 0;

    void validate() const {
        if (population < 1) throw ConfigError("population must be >= 1");
        if (iterations < 1) throw ConfigError("iterations must be >= 1");
        if (bounds.empty()) throw ConfigError("bounds must not be empty");
        for (const auto& [lo, hi] : bounds)
            if (!(lo < hi)) throw ConfigError("bounds must satisfy lo < hi");
        if (damping <= 0.0 || damping > 1.0) throw ConfigError("damping must be in (0,1]");
        if (mutation_rate < 0.0) throw ConfigError("mutation_rate must be >= 0");
    }
};

struct FaResult {
    std::vector<double> best_position;
    double best_fitness = -std::numeric_limits<double>::infinity();
    std::vector<double> history;  // best-so-far after init and after each generation
};

// Moves the dimmer firefly xi toward the brighter xj:
//   x' = xi + beta0*exp(-gamma*r^2)*(xj - xi) + alpha_t*u*(hi - lo)
// with u uniform in [-0.5, 0.5] per dimension, then clamps to bounds.
inline std::vector<double> firefly_move(const std::vector<double>& xi,
                                        const std::vector<double>& xj, const FaConfig& cfg,
                                        double alpha_t, Rng& rng) {
    double r2 = 0.0;
    for (std::size_t d = 0; d < xi.size(); ++d) {
        const double diff = xj[d] - xi[d];
        r2 += diff * diff;
    }
    const double beta = cfg.attraction * std::exp(-cfg.light_absorption * r2);
    std::vector<double> out(xi.size());
    for (std::size_t d = 0; d < xi.size(); ++d) {
        const auto& [lo, hi] = cfg.bounds[d];
        const double walk = alpha_t * (rng.next_double() - 0.5) * (hi - lo);
        double v = xi[d] + beta * (xj[d] - xi[d]) + walk;
        out[d] = std::min(hi, std::max(lo, v));
    }
    return out;
}

// Maximizes `fitness` over the bounded box. Fireflies start at seeded uniform
// positions (optionally overridden for index 0 via `seed_position`), each
// generation moves every firefly toward each brighter one in fixed (i asc,
// j asc) order against the intensities evaluated at generation start, and the
// best-so-far is retained across generations, so the history never decreases.
inline FaResult fa_optimize(const std::function<double(const std::vector<double>&)>& fitness,
                            const FaConfig& cfg,
                            const std::vector<double>* seed_position = nullptr) {
    cfg.validate();
    const std::size_t dim = cfg.bounds.size();
    Rng rng(cfg.seed);

    std::vector<std::vector<double>> pos(cfg.population, std::vector<double>(dim));
    for (auto& p : pos)
        for (std::size_t d = 0; d < dim; ++d)
            p[d] = rng.uniform(cfg.bounds[d].first, cfg.bounds[d].second);
    if (seed_position) {
        if (seed_position->size() != dim) throw DimensionError("seed position dimension");
        pos[0] = *seed_position;
    }

    std::vector<double> intensity(cfg.population);
    for (int i = 0; i < cfg.population; ++i) intensity[i] = fitness(pos[i]);

    FaResult result;
    auto record_best = [&] {
        for (int i = 0; i < cfg.population; ++i) {
            if (intensity[i] > result.best_fitness) {
                result.best_fitness = intensity[i];
                result.best_position = pos[i];
            }
        }
        result.history.push_back(result.best_fitness);
    };
    record_best();

    double alpha_t = cfg.mutation_rate;
    for (int gen = 0; gen < cfg.iterations; ++gen) {
        for (int i = 0; i < cfg.population; ++i) {
            for (int j = 0; j < cfg.population; ++j) {
                if (intensity[j] > intensity[i])
                    pos[i] = firefly_move(pos[i], pos[j], cfg, alpha_t, rng);
            }
        }
        for (int i = 0; i < cfg.population; ++i) intensity[i] = fitness(pos[i]);
        alpha_t *= cfg.damping;
        record_best();
    }
    return result;
}

}  // namespace ngnlab
