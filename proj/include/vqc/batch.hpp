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
 * @file batch.hpp
 * Thread-parallel evaluation of one parameter snapshot over a batch of
 * inputs. The batch is split into contiguous ranges, one per worker; each
 * input row is computed by the same sequential code path, so results do
 * not depend on the thread count.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "error.hpp"
#include "gradients.hpp"
#include "observables.hpp"
#include "tensor.hpp"
#include "thread_pool.hpp"

namespace vqc {

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
    bool operator==(const IndexRange &) const = default;
};

/// Splits [0, batch_size) into `threads` contiguous ranges. The first
/// B - T*floor(B/T) ranges receive one extra element.
inline std::vector<IndexRange> split_workload(std::size_t batch_size,
                                              std::size_t threads) {
    if (threads < 1) {
        throw ArgumentError("thread count must be >= 1");
    }
    const std::size_t base = batch_size / threads;
    const std::size_t extra = batch_size - threads * base;
    std::vector<IndexRange> out;
    out.reserve(threads);
    std::size_t begin = 0;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t len = base + (t < extra ? 1 : 0);
        out.push_back({begin, begin + len});
        begin += len;
    }
    return out;
}

/// splitmix64 finalizer; derives per-input SPSA seeds.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t seed,
                                               std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class ForwardMode {
    /// One evolution serves all observables.
    Joint,
    /// Re-evolve per observable (baseline for benchmarks).
    PerObservable,
};

struct BatchRequest {
    std::shared_ptr<const Circuit> circuit;
    std::vector<Observable> observables;
    /// Fixed values of every non-encoding set.
    Binding trainable_values;
    std::string encoding_set;
    /// (B x encoding size) data rows.
    Matrix inputs;
    /// Sets to differentiate; empty means forward only.
    std::vector<std::string> wrt;
    /// seed is mixed with the row index for SPSA.
    GradientOptions gradient;
    ForwardMode forward_mode = ForwardMode::Joint;
    /// Unset: the engine's configured worker count.
    std::optional<std::size_t> threads;
};

struct BatchResult {
    /// (B x M)
    Matrix expectations;
    /// set name -> (B x M x set.size)
    std::map<std::string, Tensor3> gradients;
};

/// Raised when a row fails; carries the lowest failing row index.
class BatchError : public Error {
  public:
    BatchError(std::size_t index, const std::string &what)
        : Error(detail::concat("batch input ", index, ": ", what)),
          index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

  private:
    std::size_t index_;
};

class BatchEngine {
  public:
    /// `threads` unset: default_thread_count().
    explicit BatchEngine(std::optional<std::size_t> threads = std::nullopt)
        : threads_(threads.value_or(default_thread_count())) {
        if (threads_ < 1) {
            throw ArgumentError("thread count must be >= 1");
        }
    }

    [[nodiscard]] std::size_t threads() const noexcept { return threads_; }

    BatchResult run(const BatchRequest &request) {
        if (!request.circuit) {
            throw ArgumentError("batch request without circuit");
        }
        const Circuit &circuit = *request.circuit;
        const std::size_t enc_id = circuit.set_id(request.encoding_set);
        const std::size_t enc_size = circuit.parameter_sets()[enc_id].size;
        const std::size_t batch = request.inputs.rows();
        const std::size_t num_obs = request.observables.size();
        if (batch > 0 && request.inputs.cols() != enc_size) {
            detail::raise<ShapeError>("input rows have ",
                                      request.inputs.cols(),
                                      " values, encoding set '",
                                      request.encoding_set, "' has ",
                                      enc_size);
        }
        for (const auto &obs : request.observables) {
            if (obs.num_qubits() != circuit.num_qubits()) {
                detail::raise<ShapeError>("observable on ", obs.num_qubits(),
                                          " qubits for ",
                                          circuit.num_qubits(),
                                          "-qubit circuit");
            }
        }

        // Template binding with a placeholder encoding row.
        Binding full = request.trainable_values;
        full[request.encoding_set] = std::vector<double>(enc_size, 0.0);
        const ResolvedBinding base = circuit.resolve(full);
        const auto wrt = detail::resolve_wrt(circuit, request.wrt);

        BatchResult result;
        result.expectations = Matrix(batch, num_obs);
        for (auto id : wrt) {
            const auto &set = circuit.parameter_sets()[id];
            result.gradients.emplace(set.name,
                                     Tensor3(batch, num_obs, set.size));
        }
        if (batch == 0) {
            return result;
        }

        std::vector<Tensor3 *> grad_out;
        for (auto id : wrt) {
            grad_out.push_back(
                &result.gradients.at(circuit.parameter_sets()[id].name));
        }

        const std::size_t threads = request.threads.value_or(threads_);
        if (threads < 1) {
            throw ArgumentError("thread count must be >= 1");
        }
        const auto ranges = split_workload(batch, threads);

        std::mutex error_mutex;
        std::optional<std::size_t> failed_index;
        std::string failed_what;

        auto work = [&](std::size_t worker) {
            const IndexRange range = ranges[worker];
            if (range.size() == 0) {
                return;
            }
            ResolvedBinding values = base;
            auto &enc = values.set(enc_id);
            for (std::size_t b = range.begin; b < range.end; ++b) {
                try {
                    const auto row = request.inputs.row(b);
                    std::copy(row.begin(), row.end(), enc.begin());
                    compute_row(circuit, values, request, wrt, b, result,
                                grad_out);
                } catch (const std::exception &e) {
                    std::lock_guard lock(error_mutex);
                    if (!failed_index || b < *failed_index) {
                        failed_index = b;
                        failed_what = e.what();
                    }
                    return;
                }
            }
        };

        if (threads == 1) {
            work(0);
        } else {
            pool_for(threads).run(work);
        }
        if (failed_index) {
            throw BatchError(*failed_index, failed_what);
        }
        return result;
    }

  private:
    static void compute_row(const Circuit &circuit,
                            const ResolvedBinding &values,
                            const BatchRequest &request,
                            const std::vector<std::size_t> &wrt, std::size_t b,
                            BatchResult &result,
                            const std::vector<Tensor3 *> &grad_out) {
        auto exp_row = result.expectations.row(b);
        if (wrt.empty()) {
            const auto e =
                request.forward_mode == ForwardMode::Joint
                    ? forward(circuit, values, request.observables)
                    : forward_per_observable(circuit, values,
                                             request.observables);
            std::copy(e.begin(), e.end(), exp_row.begin());
            return;
        }
        GradientOptions opts = request.gradient;
        opts.seed = mix_seed(request.gradient.seed, b);
        auto raw =
            compute_gradients(circuit, values, request.observables, wrt, opts);
        std::copy(raw.expectations.begin(), raw.expectations.end(),
                  exp_row.begin());
        for (std::size_t k = 0; k < wrt.size(); ++k) {
            const auto &src = raw.gradients[k].data();
            auto dst = grad_out[k]->slab(b);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    }

    ThreadPool &pool_for(std::size_t threads) {
        if (!pool_ || pool_->size() != threads) {
            pool_ = std::make_unique<ThreadPool>(threads);
        }
        return *pool_;
    }

    std::size_t threads_;
    std::unique_ptr<ThreadPool> pool_;
};

/// Convenience wrapper using a temporary engine.
inline BatchResult run_batch(const BatchRequest &request) {
    BatchEngine engine(request.threads);
    return engine.run(request);
}

} // namespace vqc
