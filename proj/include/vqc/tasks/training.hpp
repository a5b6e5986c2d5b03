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
 * @file training.hpp
 * End-to-end training loops: a softmax classifier over M = C observables
 * and a REINFORCE policy-gradient agent for cart-pole. Expectation values
 * are used directly as logits (temperature 1).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../model.hpp"
#include "../optimizer.hpp"
#include "../tensor.hpp"
#include "cartpole.hpp"
#include "dataset.hpp"

namespace vqc::tasks {

struct EpochRecord {
    std::size_t epoch = 0;
    double loss = 0.0;
    /// Test accuracy for classification, mean return for RL.
    double metric = 0.0;

    bool operator==(const EpochRecord &) const = default;
};

using TrainingLog = std::vector<EpochRecord>;

inline void write_log_csv(std::ostream &out, const TrainingLog &log) {
    out.precision(17);
    out << "epoch,loss,metric\n";
    for (const auto &r : log) {
        out << r.epoch << ',' << r.loss << ',' << r.metric << '\n';
    }
}

/// Numerically stable softmax of one logit row.
inline std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.begin(), logits.end());
    if (p.empty()) {
        return p;
    }
    const double mx = *std::max_element(p.begin(), p.end());
    double sum = 0.0;
    for (auto &v : p) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (auto &v : p) {
        v /= sum;
    }
    return p;
}

/// Mean cross-entropy of `logits` rows against `labels` and the gradient
/// (softmax - onehot) / B with respect to the logits.
struct CrossEntropy {
    double loss = 0.0;
    Matrix upstream;
};

inline CrossEntropy cross_entropy(const Matrix &logits,
                                  std::span<const int> labels) {
    if (labels.size() != logits.rows()) {
        throw ShapeError("label count does not match logit rows");
    }
    CrossEntropy out{0.0, Matrix(logits.rows(), logits.cols())};
    const double scale = 1.0 / static_cast<double>(logits.rows());
    for (std::size_t b = 0; b < logits.rows(); ++b) {
        const auto p = softmax(logits.row(b));
        const auto y = static_cast<std::size_t>(labels[b]);
        if (y >= p.size()) {
            vqc::detail::raise<ShapeError>("label ", y, " exceeds ", p.size(),
                                           " outputs");
        }
        out.loss -= scale * std::log(std::max(p[y], 1e-300));
        for (std::size_t i = 0; i < p.size(); ++i) {
            out.upstream(b, i) = scale * (p[i] - (i == y ? 1.0 : 0.0));
        }
    }
    return out;
}

inline std::size_t argmax(std::span<const double> row) {
    return static_cast<std::size_t>(
        std::distance(row.begin(), std::max_element(row.begin(), row.end())));
}

inline double accuracy(const QuantumModule &module, const Dataset &data,
                       std::span<const std::size_t> idx,
                       std::optional<std::size_t> threads = std::nullopt) {
    if (idx.empty()) {
        return 0.0;
    }
    const auto logits = module.forward(data.rows(idx), threads);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
        correct += argmax(logits.row(r)) ==
                           static_cast<std::size_t>(data.labels[idx[r]])
                       ? 1
                       : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(idx.size());
}

/// Default classifier learning rate (Adam).
inline constexpr double kClassifierLearningRate = 0.001;

struct ClassifierConfig {
    std::size_t epochs = 250;
    std::size_t batch_size = 48;
    std::uint64_t seed = 0;
    GradientOptions gradient{};
    std::optional<std::size_t> threads;
};

/// Mini-batch training: forward -> softmax -> cross-entropy -> backward ->
/// optimizer step. Each epoch logs the mean training loss and the test
/// accuracy.
inline TrainingLog train_classifier(const Dataset &data, QuantumModule &module,
                                    Optimizer &optimizer,
                                    const ClassifierConfig &config) {
    if (module.num_outputs() != data.num_classes) {
        vqc::detail::raise<ShapeError>("module has ", module.num_outputs(),
                                       " outputs for ", data.num_classes,
                                       " classes");
    }
    if (module.encoding_size() != data.num_features()) {
        vqc::detail::raise<ShapeError>("encoding set has ",
                                       module.encoding_size(),
                                       " slots for ", data.num_features(),
                                       " features");
    }
    if (config.batch_size < 1) {
        throw ArgumentError("batch size must be >= 1");
    }
    TrainingLog log;
    std::mt19937_64 rng(config.seed);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto order = permutation(data.train.size(), rng());
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size();
             start += config.batch_size) {
            const std::size_t end =
                std::min(order.size(), start + config.batch_size);
            std::vector<std::size_t> idx;
            std::vector<int> labels;
            for (std::size_t k = start; k < end; ++k) {
                idx.push_back(data.train[order[k]]);
                labels.push_back(data.labels[idx.back()]);
            }
            const auto inputs = data.rows(idx);
            const auto logits = module.forward(inputs, config.threads);
            const auto ce = cross_entropy(logits, labels);
            auto grads = module.backward(inputs, ce.upstream, config.gradient,
                                         false, config.threads);
            optimizer.step(module.parameters(), grads.sets);
            loss_sum += ce.loss;
            ++batches;
        }
        log.push_back({epoch + 1,
                       batches ? loss_sum / static_cast<double>(batches) : 0.0,
                       accuracy(module, data, data.test, config.threads)});
    }
    return log;
}

/// G_t = sum_{k >= t} gamma^(k - t) r_k.
inline std::vector<double> returns_to_go(std::span<const double> rewards,
                                         double gamma) {
    std::vector<double> out(rewards.size());
    double acc = 0.0;
    for (std::size_t t = rewards.size(); t-- > 0;) {
        acc = rewards[t] + gamma * acc;
        out[t] = acc;
    }
    return out;
}

/// Bounded encoding angles atan(x) of a cart-pole state.
inline std::vector<double> encode_state(const CartPoleState &s) {
    return {std::atan(s[0]), std::atan(s[1]), std::atan(s[2]),
            std::atan(s[3])};
}

/// REINFORCE upstream for one visited state: (onehot(action) - pi) * G.
/// Rows sum to zero.
inline std::vector<double> policy_gradient_row(std::span<const double> probs,
                                               std::size_t action,
                                               double ret) {
    std::vector<double> row(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        row[i] = ((i == action ? 1.0 : 0.0) - probs[i]) * ret;
    }
    return row;
}

struct ReinforceConfig {
    std::size_t epochs = 50;
    std::size_t episodes_per_epoch = 10;
    double gamma = 0.99;
    std::uint64_t seed = 0;
    GradientOptions gradient{};
    std::optional<std::size_t> threads;
};

/// REINFORCE without baseline. Each epoch rolls out episodes with actions
/// sampled from softmax(<O_0>, <O_1>), then applies one optimizer step on
/// the return-weighted log-likelihood gradient averaged over episodes.
inline TrainingLog train_reinforce(QuantumModule &policy, Optimizer &optimizer,
                                   const ReinforceConfig &config) {
    if (policy.num_outputs() != 2) {
        vqc::detail::raise<ShapeError>("cart-pole policy needs 2 outputs, got ",
                                       policy.num_outputs());
    }
    if (policy.encoding_size() != 4) {
        throw ShapeError("cart-pole policy needs a 4-slot encoding set");
    }
    if (config.episodes_per_epoch < 1) {
        throw ArgumentError("episodes_per_epoch must be >= 1");
    }
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CartPoleEnv env;
    TrainingLog log;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<std::vector<double>> states;
        std::vector<std::vector<double>> rows;
        double return_sum = 0.0;
        double surrogate = 0.0;
        for (std::size_t ep = 0; ep < config.episodes_per_epoch; ++ep) {
            std::vector<double> rewards;
            std::vector<std::vector<double>> probs;
            std::vector<std::size_t> actions;
            env.reset(rng);
            while (!env.terminated()) {
                auto enc = encode_state(env.state());
                const auto logits = policy.forward(
                    Matrix::from_rows({enc}), config.threads);
                auto p = softmax(logits.row(0));
                const std::size_t action = unit(rng) < p[0] ? 0 : 1;
                rewards.push_back(env.step(static_cast<int>(action)).reward);
                states.push_back(std::move(enc));
                probs.push_back(std::move(p));
                actions.push_back(action);
            }
            const auto g = returns_to_go(rewards, config.gamma);
            for (std::size_t t = 0; t < g.size(); ++t) {
                rows.push_back(policy_gradient_row(probs[t], actions[t], g[t]));
                surrogate -= std::log(std::max(probs[t][actions[t]], 1e-300)) *
                             g[t];
            }
            return_sum += std::accumulate(rewards.begin(), rewards.end(), 0.0);
        }
        const double episodes = static_cast<double>(config.episodes_per_epoch);
        // Ascent on J is descent on -J.
        Matrix upstream = Matrix::from_rows(rows);
        for (auto &v : upstream.data()) {
            v = -v / episodes;
        }
        const auto grads = policy.backward(Matrix::from_rows(states), upstream,
                                           config.gradient, false,
                                           config.threads);
        optimizer.step(policy.parameters(), grads.sets);
        log.push_back({epoch + 1, surrogate / episodes, return_sum / episodes});
    }
    return log;
}

/// Policy readout (+Z...Z, -Z...Z): the two logits are the parity
/// expectation and its negation.
inline std::vector<Observable> default_policy_observables(std::size_t qubits) {
    const std::string parity(qubits, 'Z');
    return {Observable({{1.0, PauliString(parity)}}),
            Observable({{-1.0, PauliString(parity)}})};
}

} // namespace vqc::tasks
