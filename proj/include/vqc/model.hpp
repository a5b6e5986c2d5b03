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
 * @file model.hpp
 * Trainable models on top of the batch engine.
 *
 * QuantumModule binds a circuit, its observables and any number of
 * independently initialized trainable sets. Values are assigned to sets in
 * the order given at construction, never sorted by name.
 *
 * HybridModule chains a dense pre-processing layer, a QuantumModule and a
 * dense post-processing layer:
 *     z = W_pre x + b_pre,  s = pi * tanh(z),  q = Q(s),  y = W_post q + b_post
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "batch.hpp"
#include "circuit.hpp"
#include "error.hpp"
#include "gradients.hpp"
#include "observables.hpp"
#include "optimizer.hpp"
#include "tensor.hpp"

namespace vqc {

struct Initializer {
    enum class Kind { Uniform, Constant, Normal };
    Kind kind = Kind::Uniform;
    /// lo / value / mean
    double a = 0.0;
    /// hi / unused / stddev
    double b = 2.0 * std::numbers::pi;

    static Initializer uniform(double lo, double hi) {
        if (!(hi > lo)) {
            detail::raise<ArgumentError>("uniform initializer needs lo < hi");
        }
        return {Kind::Uniform, lo, hi};
    }
    static Initializer constant(double value) {
        return {Kind::Constant, value, 0.0};
    }
    static Initializer normal(double mean, double stddev) {
        if (!(stddev >= 0.0)) {
            throw ArgumentError("normal initializer needs stddev >= 0");
        }
        return {Kind::Normal, mean, stddev};
    }

    /// Draws `n` values in order from `rng`.
    std::vector<double> draw(std::size_t n, std::mt19937_64 &rng) const {
        std::vector<double> out(n);
        switch (kind) {
        case Kind::Uniform:
            for (auto &v : out) {
                // 53 random bits -> [0, 1); keeps draws in [lo, hi).
                const double u =
                    static_cast<double>(rng() >> 11) * 0x1.0p-53;
                v = a + (b - a) * u;
                if (v >= b) {
                    v = std::nextafter(b, a);
                }
            }
            break;
        case Kind::Constant:
            std::fill(out.begin(), out.end(), a);
            break;
        case Kind::Normal: {
            std::normal_distribution<double> dist(a, b);
            for (auto &v : out) {
                v = dist(rng);
            }
            break;
        }
        }
        return out;
    }

    bool operator==(const Initializer &) const = default;
};

struct TrainableSpec {
    std::string name;
    Initializer init;
};

/// Variational sets uniform(0, 2pi), scaling sets constant(1).
inline std::vector<TrainableSpec>
reuploading_specs(const AnsatzSetNames &names = {}) {
    return {{names.variational, Initializer::uniform(0.0, 2 * std::numbers::pi)},
            {names.scaling, Initializer::constant(1.0)}};
}

/// Result of QuantumModule::backward.
struct ModuleGradients {
    /// Trainable set name -> gradient summed over batch and observables.
    ParameterGradients sets;
    /// (B x encoding size) gradient w.r.t. encoding values, when requested.
    std::optional<Matrix> inputs;
};

class QuantumModule {
  public:
    struct SetState {
        std::string name;
        Initializer init;
        std::vector<double> values;
    };

    QuantumModule(std::shared_ptr<const Circuit> circuit,
                  std::vector<Observable> observables, std::string encoding_set,
                  const std::vector<TrainableSpec> &specs, std::uint64_t seed)
        : circuit_(std::move(circuit)), observables_(std::move(observables)),
          encoding_set_(std::move(encoding_set)) {
        if (!circuit_) {
            throw ArgumentError("module without circuit");
        }
        const auto enc = circuit_->find_set(encoding_set_);
        if (!enc) {
            detail::raise<BindingError>("unknown encoding set '",
                                        encoding_set_, "'");
        }
        std::size_t num_encoding = 0;
        for (const auto &s : circuit_->parameter_sets()) {
            num_encoding += s.role == ParameterRole::Encoding ? 1 : 0;
        }
        if (num_encoding != 1 ||
            circuit_->parameter_sets()[*enc].role != ParameterRole::Encoding) {
            throw BindingError(
                "module circuit must declare exactly one encoding set");
        }
        for (const auto &obs : observables_) {
            if (obs.num_qubits() != circuit_->num_qubits()) {
                throw ShapeError("observable size does not match circuit");
            }
        }

        std::mt19937_64 rng(seed);
        for (const auto &spec : specs) {
            const auto id = circuit_->find_set(spec.name);
            if (!id) {
                detail::raise<BindingError>("unknown parameter set '",
                                            spec.name, "'");
            }
            if (*id == *enc) {
                detail::raise<BindingError>("encoding set '", spec.name,
                                            "' cannot be trainable");
            }
            for (const auto &s : sets_) {
                if (s.name == spec.name) {
                    detail::raise<ArgumentError>("set '", spec.name,
                                                 "' configured twice");
                }
            }
            const auto size = circuit_->parameter_sets()[*id].size;
            sets_.push_back({spec.name, spec.init, spec.init.draw(size, rng)});
        }
        for (const auto &s : circuit_->parameter_sets()) {
            if (s.role != ParameterRole::Encoding && !find(s.name)) {
                detail::raise<BindingError>("set '", s.name,
                                            "' has no initializer");
            }
        }
    }

    [[nodiscard]] const Circuit &circuit() const noexcept { return *circuit_; }
    [[nodiscard]] const std::shared_ptr<const Circuit> &
    circuit_ptr() const noexcept {
        return circuit_;
    }
    [[nodiscard]] const std::vector<Observable> &observables() const noexcept {
        return observables_;
    }
    [[nodiscard]] const std::string &encoding_set() const noexcept {
        return encoding_set_;
    }
    [[nodiscard]] std::size_t encoding_size() const {
        return circuit_->set(encoding_set_).size;
    }
    [[nodiscard]] std::size_t num_outputs() const noexcept {
        return observables_.size();
    }
    [[nodiscard]] const std::vector<SetState> &sets() const noexcept {
        return sets_;
    }

    [[nodiscard]] const std::vector<double> &values(const std::string &name) const {
        if (const auto *s = find(name)) {
            return s->values;
        }
        detail::raise<BindingError>("module has no trainable set '", name, "'");
    }

    void set_values(const std::string &name, std::vector<double> values) {
        auto it = std::find_if(sets_.begin(), sets_.end(),
                               [&](const SetState &st) { return st.name == name; });
        SetState *s = it == sets_.end() ? nullptr : &*it;
        if (!s) {
            detail::raise<BindingError>("module has no trainable set '", name,
                                        "'");
        }
        if (values.size() != s->values.size()) {
            detail::raise<ShapeError>("set '", name, "' expects ",
                                      s->values.size(), " values");
        }
        s->values = std::move(values);
    }

    /// Mutable views for the optimizer, in construction order.
    std::vector<NamedParams> parameters() {
        std::vector<NamedParams> out;
        for (auto &s : sets_) {
            out.push_back({s.name, s.values});
        }
        return out;
    }

    [[nodiscard]] Binding trainable_binding() const {
        Binding b;
        for (const auto &s : sets_) {
            b.emplace(s.name, s.values);
        }
        return b;
    }

    /// Uses a dedicated engine; the default is a single-threaded one.
    void set_engine(std::shared_ptr<BatchEngine> engine) {
        engine_ = std::move(engine);
    }

    /// Full (B, M) expectations and (B, M, |set|) tensors for `wrt`.
    [[nodiscard]] BatchResult
    jacobian(const Matrix &inputs, std::vector<std::string> wrt,
             const GradientOptions &options = {},
             std::optional<std::size_t> threads = std::nullopt) const {
        return engine().run(request(inputs, std::move(wrt), options, threads));
    }

    /// (B, M) expectations; no gradient work.
    [[nodiscard]] Matrix
    forward(const Matrix &inputs,
            std::optional<std::size_t> threads = std::nullopt) const {
        return engine().run(request(inputs, {}, {}, threads)).expectations;
    }

    /// Vector-Jacobian product: sum_{b,i} upstream(b,i) d<O_i>(s_b)/dp for
    /// every trainable set; optionally also the per-row encoding gradient.
    [[nodiscard]] ModuleGradients
    backward(const Matrix &inputs, const Matrix &upstream,
             const GradientOptions &options = {}, bool input_gradients = false,
             std::optional<std::size_t> threads = std::nullopt) const {
        if (upstream.rows() != inputs.rows() ||
            upstream.cols() != num_outputs()) {
            detail::raise<ShapeError>("upstream shape (", upstream.rows(), ", ",
                                      upstream.cols(), ") != (", inputs.rows(),
                                      ", ", num_outputs(), ")");
        }
        std::vector<std::string> wrt;
        for (const auto &s : sets_) {
            wrt.push_back(s.name);
        }
        if (input_gradients) {
            wrt.push_back(encoding_set_);
        }
        const auto jac = jacobian(inputs, wrt, options, threads);

        ModuleGradients out;
        for (const auto &s : sets_) {
            out.sets.emplace(s.name, contract(jac.gradients.at(s.name),
                                              upstream));
        }
        if (input_gradients) {
            const auto &t = jac.gradients.at(encoding_set_);
            Matrix g(inputs.rows(), t.dim2());
            for (std::size_t b = 0; b < t.dim0(); ++b) {
                for (std::size_t i = 0; i < t.dim1(); ++i) {
                    const double u = upstream(b, i);
                    for (std::size_t p = 0; p < t.dim2(); ++p) {
                        g(b, p) += u * t(b, i, p);
                    }
                }
            }
            out.inputs = std::move(g);
        }
        return out;
    }

  private:
    [[nodiscard]] const SetState *find(const std::string &name) const {
        for (const auto &s : sets_) {
            if (s.name == name) {
                return &s;
            }
        }
        return nullptr;
    }

    static std::vector<double> contract(const Tensor3 &t,
                                        const Matrix &upstream) {
        std::vector<double> g(t.dim2(), 0.0);
        for (std::size_t b = 0; b < t.dim0(); ++b) {
            for (std::size_t i = 0; i < t.dim1(); ++i) {
                const double u = upstream(b, i);
                for (std::size_t p = 0; p < t.dim2(); ++p) {
                    g[p] += u * t(b, i, p);
                }
            }
        }
        return g;
    }

    [[nodiscard]] BatchRequest request(const Matrix &inputs,
                                       std::vector<std::string> wrt,
                                       const GradientOptions &options,
                                       std::optional<std::size_t> threads) const {
        if (inputs.rows() > 0 && inputs.cols() != encoding_size()) {
            detail::raise<ShapeError>("inputs have ", inputs.cols(),
                                      " columns, encoding set has ",
                                      encoding_size());
        }
        BatchRequest req;
        req.circuit = circuit_;
        req.observables = observables_;
        req.trainable_values = trainable_binding();
        req.encoding_set = encoding_set_;
        req.inputs = inputs;
        req.wrt = std::move(wrt);
        req.gradient = options;
        req.threads = threads;
        return req;
    }

    BatchEngine &engine() const {
        if (!engine_) {
            engine_ = std::make_shared<BatchEngine>(1);
        }
        return *engine_;
    }

    std::shared_ptr<const Circuit> circuit_;
    std::vector<Observable> observables_;
    std::string encoding_set_;
    std::vector<SetState> sets_;
    mutable std::shared_ptr<BatchEngine> engine_;
};

/// Constructs a QuantumModule; see the constructor for error conditions.
inline QuantumModule init_module(std::shared_ptr<const Circuit> circuit,
                                 std::vector<Observable> observables,
                                 std::string encoding_set,
                                 const std::vector<TrainableSpec> &specs,
                                 std::uint64_t seed) {
    return {std::move(circuit), std::move(observables),
            std::move(encoding_set), specs, seed};
}

/// True if every term of every observable acts on at most one qubit.
inline bool is_single_qubit(const Observable &obs) {
    for (const auto &t : obs.terms()) {
        if (std::popcount(t.pauli.x_mask() | t.pauli.z_mask()) > 1) {
            return false;
        }
    }
    return true;
}

/// Dense layer: out = W x + b with W stored (out_dim x in_dim).
struct DenseLayer {
    Matrix weights;
    std::vector<double> bias;

    [[nodiscard]] std::size_t in_dim() const noexcept { return weights.cols(); }
    [[nodiscard]] std::size_t out_dim() const noexcept {
        return weights.rows();
    }

    /// Applies the layer to each row of `x`.
    [[nodiscard]] Matrix apply(const Matrix &x) const {
        if (x.cols() != in_dim()) {
            detail::raise<ShapeError>("dense layer expects ", in_dim(),
                                      " inputs, got ", x.cols());
        }
        Matrix out(x.rows(), out_dim());
        for (std::size_t r = 0; r < x.rows(); ++r) {
            for (std::size_t o = 0; o < out_dim(); ++o) {
                double acc = bias[o];
                for (std::size_t k = 0; k < in_dim(); ++k) {
                    acc += weights(o, k) * x(r, k);
                }
                out(r, o) = acc;
            }
        }
        return out;
    }

    static DenseLayer random(std::size_t in_dim, std::size_t out_dim,
                             std::mt19937_64 &rng) {
        DenseLayer l{Matrix(out_dim, in_dim), std::vector<double>(out_dim)};
        const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
        const auto init = Initializer::uniform(-bound, bound);
        l.weights.data() = init.draw(out_dim * in_dim, rng);
        l.bias = init.draw(out_dim, rng);
        return l;
    }
};

/// Parameter-group names of the classical layers.
inline constexpr const char *kPreWeight = "pre.weight";
inline constexpr const char *kPreBias = "pre.bias";
inline constexpr const char *kPostWeight = "post.weight";
inline constexpr const char *kPostBias = "post.bias";

class HybridModule {
  public:
    /// Pre/post layers are drawn uniform(+-1/sqrt(fan_in)) from `seed`.
    HybridModule(std::size_t input_dim, QuantumModule quantum,
                 std::size_t output_dim, std::uint64_t seed)
        : quantum_(std::move(quantum)) {
        if (input_dim < 1 || output_dim < 1) {
            throw ArgumentError("hybrid dimensions must be >= 1");
        }
        for (const auto &obs : quantum_.observables()) {
            if (!is_single_qubit(obs)) {
                detail::raise<ArgumentError>(
                    "hybrid quantum layer needs single-qubit observables, got ",
                    obs.str());
            }
        }
        std::mt19937_64 rng(seed);
        pre_ = DenseLayer::random(input_dim, quantum_.encoding_size(), rng);
        post_ = DenseLayer::random(quantum_.num_outputs(), output_dim, rng);
    }

    [[nodiscard]] std::size_t input_dim() const noexcept {
        return pre_.in_dim();
    }
    [[nodiscard]] std::size_t output_dim() const noexcept {
        return post_.out_dim();
    }
    QuantumModule &quantum() noexcept { return quantum_; }
    [[nodiscard]] const QuantumModule &quantum() const noexcept {
        return quantum_;
    }
    DenseLayer &pre() noexcept { return pre_; }
    [[nodiscard]] const DenseLayer &pre() const noexcept { return pre_; }
    DenseLayer &post() noexcept { return post_; }
    [[nodiscard]] const DenseLayer &post() const noexcept { return post_; }

    /// Encoding angles pi * tanh(W_pre x + b_pre).
    [[nodiscard]] Matrix encode(const Matrix &inputs) const {
        auto z = pre_.apply(inputs);
        for (auto &v : z.data()) {
            v = std::numbers::pi * std::tanh(v);
        }
        return z;
    }

    [[nodiscard]] Matrix
    forward(const Matrix &inputs,
            std::optional<std::size_t> threads = std::nullopt) const {
        return post_.apply(quantum_.forward(encode(inputs), threads));
    }

    /// Gradients of sum(upstream .* forward(inputs)) for every parameter
    /// group (classical layers under kPre*/kPost*, quantum sets by name).
    [[nodiscard]] ParameterGradients
    backward(const Matrix &inputs, const Matrix &upstream,
             const GradientOptions &options = {},
             std::optional<std::size_t> threads = std::nullopt) const {
        const std::size_t batch = inputs.rows();
        if (upstream.rows() != batch || upstream.cols() != output_dim()) {
            detail::raise<ShapeError>("upstream shape (", upstream.rows(), ", ",
                                      upstream.cols(), ") != (", batch, ", ",
                                      output_dim(), ")");
        }
        const auto pre_out = pre_.apply(inputs);
        Matrix encoded = pre_out;
        for (auto &v : encoded.data()) {
            v = std::numbers::pi * std::tanh(v);
        }
        const auto q = quantum_.forward(encoded, threads);
        const std::size_t m = quantum_.num_outputs();

        ParameterGradients out;
        // Post layer.
        std::vector<double> gw_post(output_dim() * m, 0.0);
        std::vector<double> gb_post(output_dim(), 0.0);
        Matrix dq(batch, m);
        for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t o = 0; o < output_dim(); ++o) {
                const double u = upstream(b, o);
                gb_post[o] += u;
                for (std::size_t i = 0; i < m; ++i) {
                    gw_post[o * m + i] += u * q(b, i);
                    dq(b, i) += u * post_.weights(o, i);
                }
            }
        }
        out.emplace(kPostWeight, std::move(gw_post));
        out.emplace(kPostBias, std::move(gb_post));

        // Quantum layer, including the encoding path.
        auto qg = quantum_.backward(encoded, dq, options, true, threads);
        for (auto &[name, g] : qg.sets) {
            out.emplace(name, std::move(g));
        }
        const Matrix &ds = *qg.inputs;

        // Squash and pre layer.
        const std::size_t enc = pre_.out_dim();
        std::vector<double> gw_pre(enc * input_dim(), 0.0);
        std::vector<double> gb_pre(enc, 0.0);
        for (std::size_t b = 0; b < batch; ++b) {
            for (std::size_t e = 0; e < enc; ++e) {
                const double t = std::tanh(pre_out(b, e));
                const double dz = ds(b, e) * std::numbers::pi * (1.0 - t * t);
                gb_pre[e] += dz;
                for (std::size_t k = 0; k < input_dim(); ++k) {
                    gw_pre[e * input_dim() + k] += dz * inputs(b, k);
                }
            }
        }
        out.emplace(kPreWeight, std::move(gw_pre));
        out.emplace(kPreBias, std::move(gb_pre));
        return out;
    }

    /// All parameter groups: pre layer, quantum sets, post layer.
    std::vector<NamedParams> parameters() {
        std::vector<NamedParams> out;
        out.push_back({kPreWeight, pre_.weights.data()});
        out.push_back({kPreBias, pre_.bias});
        for (auto &p : quantum_.parameters()) {
            out.push_back(std::move(p));
        }
        out.push_back({kPostWeight, post_.weights.data()});
        out.push_back({kPostBias, post_.bias});
        return out;
    }

  private:
    QuantumModule quantum_;
    DenseLayer pre_;
    DenseLayer post_;
};

} // namespace vqc
