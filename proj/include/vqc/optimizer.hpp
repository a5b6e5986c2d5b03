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
 * @file optimizer.hpp
 * SGD and Adam over named parameter groups, each with its own learning
 * rate.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace vqc {

/// Mutable view of one named parameter group.
struct NamedParams {
    std::string name;
    std::span<double> values;
};

/// Gradient arrays keyed by parameter-group name.
using ParameterGradients = std::map<std::string, std::vector<double>>;

enum class OptimizerKind { Sgd, Adam };

class Optimizer {
  public:
    Optimizer(OptimizerKind kind, double learning_rate,
              std::map<std::string, double> group_rates = {})
        : kind_(kind), default_rate_(learning_rate),
          group_rates_(std::move(group_rates)) {}

    static Optimizer sgd(double lr, std::map<std::string, double> rates = {}) {
        return {OptimizerKind::Sgd, lr, std::move(rates)};
    }
    static Optimizer adam(double lr, std::map<std::string, double> rates = {}) {
        return {OptimizerKind::Adam, lr, std::move(rates)};
    }

    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    [[nodiscard]] OptimizerKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t step_count() const noexcept { return steps_; }

    [[nodiscard]] double learning_rate(const std::string &group) const {
        const auto it = group_rates_.find(group);
        return it == group_rates_.end() ? default_rate_ : it->second;
    }

    void set_learning_rate(const std::string &group, double rate) {
        group_rates_[group] = rate;
    }

    /// One update of every group in `params`. Each group needs a gradient
    /// of matching length.
    void step(std::span<const NamedParams> params,
              const ParameterGradients &grads) {
        for (const auto &p : params) {
            const auto it = grads.find(p.name);
            if (it == grads.end()) {
                detail::raise<ShapeError>("no gradient for parameter group '",
                                          p.name, "'");
            }
            if (it->second.size() != p.values.size()) {
                detail::raise<ShapeError>(
                    "gradient for '", p.name, "' has ", it->second.size(),
                    " entries, parameters have ", p.values.size());
            }
        }
        ++steps_;
        for (const auto &p : params) {
            const auto &g = grads.at(p.name);
            const double lr = learning_rate(p.name);
            if (kind_ == OptimizerKind::Sgd) {
                for (std::size_t j = 0; j < g.size(); ++j) {
                    p.values[j] -= lr * g[j];
                }
                continue;
            }
            auto &m = first_[p.name];
            auto &v = second_[p.name];
            if (m.empty()) {
                m.assign(g.size(), 0.0);
                v.assign(g.size(), 0.0);
            } else if (m.size() != g.size()) {
                detail::raise<ShapeError>("parameter group '", p.name,
                                          "' changed size");
            }
            const double t = static_cast<double>(steps_);
            const double c1 = 1.0 - std::pow(beta1, t);
            const double c2 = 1.0 - std::pow(beta2, t);
            for (std::size_t j = 0; j < g.size(); ++j) {
                m[j] = beta1 * m[j] + (1.0 - beta1) * g[j];
                v[j] = beta2 * v[j] + (1.0 - beta2) * g[j] * g[j];
                const double m_hat = m[j] / c1;
                const double v_hat = v[j] / c2;
                p.values[j] -= lr * m_hat / (std::sqrt(v_hat) + epsilon);
            }
        }
    }

  private:
    OptimizerKind kind_;
    double default_rate_;
    std::map<std::string, double> group_rates_;
    std::size_t steps_ = 0;
    std::map<std::string, std::vector<double>> first_;
    std::map<std::string, std::vector<double>> second_;
};

} // namespace vqc
