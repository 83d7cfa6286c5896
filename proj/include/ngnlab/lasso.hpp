#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "ngnlab/errors.hpp"
#include "ngnlab/matrix.hpp"

namespace ngnlab {

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

// L1-regularized least squares fitted by cyclic coordinate descent on the
// objective (1/2n)*sum (y - Xb)^2 + lambda*|b|_1 with internally standardized
// columns. Coefficients are reported in the original coordinates; `selected`
// holds the indices of nonzero coefficients.
struct LassoModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    double lambda = 0.0;
    std::vector<std::size_t> selected;
    // |x_j' y_c|/n per standardized column; ranks columns when nothing survives
    // the penalty.
    std::vector<double> abs_correlation;
};

namespace detail {

struct Standardized {
    RowMatrix x;               // standardized copy, constant columns zeroed
    std::vector<double> mean;
    std::vector<double> sd;    // 0 marks a dropped constant column
    std::vector<double> yc;    // centered targets
    double y_mean = 0.0;
};

inline Standardized standardize(const RowMatrix& x, const std::vector<double>& y) {
    Standardized s;
    s.x = x;
    s.mean.assign(x.cols, 0.0);
    s.sd.assign(x.cols, 0.0);
    const double n = static_cast<double>(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) s.mean[j] += x.at(i, j);
    for (double& m : s.mean) m /= n;
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            const double d = x.at(i, j) - s.mean[j];
            s.sd[j] += d * d;
        }
    for (std::size_t j = 0; j < x.cols; ++j) {
        s.sd[j] = std::sqrt(s.sd[j] / n);
        if (s.sd[j] < 1e-12) s.sd[j] = 0.0;
    }
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j)
            s.x.at(i, j) = s.sd[j] > 0.0 ? (x.at(i, j) - s.mean[j]) / s.sd[j] : 0.0;

    for (double v : y) s.y_mean += v;
    s.y_mean /= n;
    s.yc.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) s.yc[i] = y[i] - s.y_mean;
    return s;
}

}  // namespace detail

// Smallest penalty for which the lasso solution is identically zero.
inline double lasso_lambda_max(const RowMatrix& x, const std::vector<double>& y) {
    if (x.rows != y.size() || x.rows < 2) throw DimensionError("lasso needs >= 2 matching rows");
    const detail::Standardized s = detail::standardize(x, y);
    double best = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) dot += s.x.at(i, j) * s.yc[i];
        best = std::max(best, std::abs(dot) / static_cast<double>(x.rows));
    }
    return best;
}

inline LassoModel fit_lasso(const RowMatrix& x, const std::vector<double>& y, double lambda,
                            double tol = 1e-7, int max_sweeps = 10000) {
    if (x.rows != y.size() || x.rows < 2) throw DimensionError("lasso needs >= 2 matching rows");
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    for (double v : x.data)
        if (!std::isfinite(v)) throw NumericError("non-finite feature value");
    for (double v : y)
        if (!std::isfinite(v)) throw NumericError("non-finite target value");

    const detail::Standardized s = detail::standardize(x, y);
    const double n = static_cast<double>(x.rows);

    std::vector<double> beta(x.cols, 0.0);
    std::vector<double> residual = s.yc;  // y_c - Xs*beta
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) {
            if (s.sd[j] == 0.0) continue;
            double dot = 0.0;
            for (std::size_t i = 0; i < x.rows; ++i) dot += s.x.at(i, j) * residual[i];
            // unit-variance columns make the coordinate update a pure
            // soft-threshold of rho = beta_j + x_j'r/n
            const double rho = beta[j] + dot / n;
            const double updated = soft_threshold(rho, lambda);
            const double delta = updated - beta[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < x.rows; ++i) residual[i] -= delta * s.x.at(i, j);
                beta[j] = updated;
            }
            max_change = std::max(max_change, std::abs(delta));
        }
        if (max_change < tol) break;
    }

    LassoModel model;
    model.lambda = lambda;
    model.coefficients.assign(x.cols, 0.0);
    model.intercept = s.y_mean;
    for (std::size_t j = 0; j < x.cols; ++j) {
        if (s.sd[j] > 0.0 && beta[j] != 0.0) {
            model.coefficients[j] = beta[j] / s.sd[j];
            model.intercept -= model.coefficients[j] * s.mean[j];
            model.selected.push_back(j);
        }
    }
    model.abs_correlation.assign(x.cols, 0.0);
    for (std::size_t j = 0; j < x.cols; ++j) {
        if (s.sd[j] == 0.0) continue;
        double dot = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) dot += s.x.at(i, j) * s.yc[i];
        model.abs_correlation[j] = std::abs(dot) / n;
    }
    return model;
}

// Keeps only the selected columns, in their original order; when the penalty
// zeroed everything, falls back to the single best-correlated column.
inline RowMatrix select_features(const RowMatrix& x, const LassoModel& model) {
    if (x.cols != model.coefficients.size())
        throw DimensionError("feature count differs from the fitted model");
    std::vector<std::size_t> keep = model.selected;
    if (keep.empty()) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < model.abs_correlation.size(); ++j)
            if (model.abs_correlation[j] > model.abs_correlation[best]) best = j;
        keep.push_back(best);
    }
    RowMatrix out(x.rows, keep.size());
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) out.at(i, j) = x.at(i, keep[j]);
    return out;
}

inline std::vector<std::size_t> selected_or_fallback(const LassoModel& model) {
    if (!model.selected.empty()) return model.selected;
    std::size_t best = 0;
    for (std::size_t j = 1; j < model.abs_correlation.size(); ++j)
        if (model.abs_correlation[j] > model.abs_correlation[best]) best = j;
    return {best};
}

}  // namespace ngnlab
