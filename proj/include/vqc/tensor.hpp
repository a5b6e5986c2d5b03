// Copyright 2026 The vqc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file tensor.hpp
 * Minimal dense row-major real containers for batched results.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"

namespace vqc {

/// Row-major (rows x cols) real matrix.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>> &rows) {
        Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_) {
                detail::raise<ShapeError>("row ", r, " has ", rows[r].size(),
                                          " columns, expected ", m.cols_);
            }
            std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double &operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::span<double> row(std::size_t r) {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    std::vector<double> &data() noexcept { return data_; }
    [[nodiscard]] const std::vector<double> &data() const noexcept {
        return data_;
    }

    bool operator==(const Matrix &) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Row-major rank-3 tensor, used for (B, M, |set|) gradient blocks.
class Tensor3 {
  public:
    Tensor3() = default;
    Tensor3(std::size_t d0, std::size_t d1, std::size_t d2)
        : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, 0.0) {}

    [[nodiscard]] std::size_t dim0() const noexcept { return d0_; }
    [[nodiscard]] std::size_t dim1() const noexcept { return d1_; }
    [[nodiscard]] std::size_t dim2() const noexcept { return d2_; }

    double &operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * d1_ + j) * d2_ + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * d1_ + j) * d2_ + k];
    }

    /// Contiguous (d1 x d2) slab for leading index i.
    std::span<double> slab(std::size_t i) {
        return {data_.data() + i * d1_ * d2_, d1_ * d2_};
    }
    [[nodiscard]] std::span<const double> slab(std::size_t i) const {
        return {data_.data() + i * d1_ * d2_, d1_ * d2_};
    }

    [[nodiscard]] const std::vector<double> &data() const noexcept {
        return data_;
    }

    bool operator==(const Tensor3 &) const = default;

  private:
    std::size_t d0_ = 0;
    std::size_t d1_ = 0;
    std::size_t d2_ = 0;
    std::vector<double> data_;
};

} // namespace vqc
