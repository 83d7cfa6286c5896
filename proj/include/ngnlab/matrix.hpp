#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ngnlab/errors.hpp"

namespace ngnlab {

// Dense row-major matrix of doubles; rows are samples, columns features.
struct RowMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // size = rows*cols

    RowMatrix() = default;
    RowMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static RowMatrix from_rows(const std::vector<std::vector<double>>& rows_in) {
        if (rows_in.empty()) return {};
        RowMatrix m(rows_in.size(), rows_in.front().size());
        for (std::size_t i = 0; i < rows_in.size(); ++i) {
            if (rows_in[i].size() != m.cols) throw DimensionError("ragged rows");
            std::copy(rows_in[i].begin(), rows_in[i].end(), m.data.begin() + i * m.cols);
        }
        return m;
    }

    std::vector<std::vector<double>> to_rows() const {
        std::vector<std::vector<double>> out(rows);
        for (std::size_t i = 0; i < rows; ++i)
            out[i].assign(data.begin() + i * cols, data.begin() + (i + 1) * cols);
        return out;
    }
};

}  // namespace ngnlab
