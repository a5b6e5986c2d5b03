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
 * @file dataset.hpp
 * Labelled feature tables: delimited-text ingestion, seeded train/test
 * split and a synthetic Gaussian-blob generator.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "../error.hpp"
#include "../observables.hpp"
#include "../tensor.hpp"

namespace vqc::tasks {

struct Dataset {
    /// (N x F)
    Matrix features;
    std::vector<int> labels;
    std::size_t num_classes = 0;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t num_features() const noexcept {
        return features.cols();
    }

    /// Rows `idx` of the feature table.
    [[nodiscard]] Matrix rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), features.cols());
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const auto src = features.row(idx[r]);
            std::copy(src.begin(), src.end(), out.row(r).begin());
        }
        return out;
    }
};

/// Seeded Fisher-Yates permutation of [0, n).
inline std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = i;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

/// Shuffles with `seed` and assigns the first round(fraction * N) rows to
/// the training split.
inline void split_dataset(Dataset &data, std::uint64_t seed,
                          double train_fraction = 0.8) {
    const auto idx = permutation(data.size(), seed);
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(data.size())));
    data.train.assign(idx.begin(), idx.begin() + static_cast<long>(n_train));
    data.test.assign(idx.begin() + static_cast<long>(n_train), idx.end());
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    char delim = ' ';
    for (char c : {',', ';', '\t'}) {
        if (line.find(c) != std::string_view::npos) {
            delim = c;
            break;
        }
    }
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= line.size()) {
        auto end = line.find(delim, start);
        if (end == std::string_view::npos) {
            end = line.size();
        }
        const auto field = vqc::detail::trim(line.substr(start, end - start));
        if (!(delim == ' ' && field.empty())) {
            out.push_back(field);
        }
        start = end + 1;
    }
    return out;
}

inline bool is_number(std::string_view s) {
    try {
        vqc::detail::parse_double(s);
        return true;
    } catch (const ParseError &) {
        return false;
    }
}

} // namespace detail

/// Parses rows of F feature columns followed by an integer label column.
/// Comma, semicolon, tab or whitespace delimiters are accepted; a first row
/// containing a non-numeric field is taken as a header.
inline Dataset parse_dataset(std::istream &in, std::uint64_t seed,
                             double train_fraction = 0.8) {
    Dataset data;
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t line_no = 0;
    std::size_t rows = 0;
    int max_label = -1;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = vqc::detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        const auto fields = detail::split_fields(trimmed);
        if (first) {
            first = false;
            if (!std::all_of(fields.begin(), fields.end(), detail::is_number)) {
                continue;
            }
        }
        if (fields.size() < 2) {
            vqc::detail::raise<ParseError>("line ", line_no,
                                           ": need >= 1 feature and a label");
        }
        if (cols == 0) {
            cols = fields.size();
        } else if (fields.size() != cols) {
            vqc::detail::raise<ParseError>("line ", line_no, ": ",
                                           fields.size(), " columns, expected ",
                                           cols);
        }
        for (std::size_t c = 0; c + 1 < cols; ++c) {
            try {
                values.push_back(vqc::detail::parse_double(fields[c]));
            } catch (const ParseError &) {
                vqc::detail::raise<ParseError>("line ", line_no,
                                               ": malformed feature '",
                                               fields[c], "'");
            }
        }
        double label = 0.0;
        try {
            label = vqc::detail::parse_double(fields.back());
        } catch (const ParseError &) {
            vqc::detail::raise<ParseError>("line ", line_no, ": label '",
                                           fields.back(),
                                           "' is not an integer class");
        }
        if (label < 0 || label != std::floor(label) || label > 1e6) {
            vqc::detail::raise<ParseError>("line ", line_no, ": label '",
                                           fields.back(),
                                           "' is not a non-negative integer");
        }
        data.labels.push_back(static_cast<int>(label));
        max_label = std::max(max_label, data.labels.back());
        ++rows;
    }
    if (rows == 0) {
        throw ParseError("dataset contains no rows");
    }
    data.features = Matrix(rows, cols - 1);
    data.features.data() = std::move(values);
    data.num_classes = static_cast<std::size_t>(max_label + 1);
    split_dataset(data, seed, train_fraction);
    return data;
}

inline Dataset load_dataset(const std::filesystem::path &path,
                            std::uint64_t seed, double train_fraction = 0.8) {
    std::ifstream in(path);
    if (!in) {
        vqc::detail::raise<IoError>("cannot open dataset '", path.string(),
                                    "'");
    }
    return parse_dataset(in, seed, train_fraction);
}

/// Writes features and labels in the format parse_dataset reads.
inline void write_dataset(std::ostream &out, const Dataset &data) {
    out.precision(17);
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (std::size_t c = 0; c < data.num_features(); ++c) {
            out << data.features(r, c) << ',';
        }
        out << data.labels[r] << '\n';
    }
}

/// Isotropic Gaussian blobs; class k is centred at `separation` times a
/// +-1 pattern (class 0 all -1, class 1 all +1, further classes rotate the
/// sign pattern).
inline Dataset make_blobs(std::size_t per_class, std::size_t num_features,
                          std::size_t num_classes, double separation,
                          double stddev, std::uint64_t seed) {
    Dataset data;
    const std::size_t n = per_class * num_classes;
    data.features = Matrix(n, num_features);
    data.num_classes = num_classes;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, stddev);
    for (std::size_t k = 0; k < num_classes; ++k) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::size_t r = k * per_class + i;
            for (std::size_t f = 0; f < num_features; ++f) {
                const bool positive =
                    k == 1 ? true : (k == 0 ? false : ((f + k) % 2 == 0));
                data.features(r, f) =
                    (positive ? separation : -separation) + noise(rng);
            }
            data.labels.push_back(static_cast<int>(k));
        }
    }
    split_dataset(data, seed ^ 0x5eedULL);
    return data;
}

} // namespace vqc::tasks
