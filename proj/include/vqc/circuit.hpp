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
 * @file circuit.hpp
 * Parameterized circuits over named parameter sets.
 *
 * Rotation angles are scaled products of distinct parameter references,
 * `coefficient * p_1 * ... * p_k`, which covers plain variational angles
 * (theta[j]) and scaled encodings (lambda[j] * s[j]). Values are assigned
 * to parameters by (set, index) in declaration order; names carry no
 * ordering meaning.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "instrumentation.hpp"
#include "state_vector.hpp"

namespace vqc {

enum class ParameterRole { Encoding, Trainable };

[[nodiscard]] inline std::string_view to_string(ParameterRole role) noexcept {
    return role == ParameterRole::Encoding ? "encoding" : "trainable";
}

inline ParameterRole parse_parameter_role(std::string_view text) {
    if (text == "encoding")
        return ParameterRole::Encoding;
    if (text == "trainable")
        return ParameterRole::Trainable;
    detail::raise<ParseError>("unknown parameter role '", text, "'");
}

struct ParameterSet {
    std::string name;
    std::size_t size = 0;
    ParameterRole role = ParameterRole::Trainable;

    bool operator==(const ParameterSet &) const = default;
};

struct ParamRef {
    std::string set;
    std::size_t index = 0;

    /// Parses "name[idx]".
    static ParamRef parse(std::string_view text) {
        const auto open = text.find('[');
        if (open == std::string_view::npos || open == 0 ||
            text.back() != ']') {
            detail::raise<ParseError>("malformed parameter reference '",
                                      text, "'");
        }
        const auto digits = text.substr(open + 1, text.size() - open - 2);
        std::size_t idx = 0;
        const auto [ptr, ec] =
            std::from_chars(digits.data(), digits.data() + digits.size(), idx);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() ||
            digits.empty()) {
            detail::raise<ParseError>("malformed index in '", text, "'");
        }
        return {std::string(text.substr(0, open)), idx};
    }

    [[nodiscard]] std::string str() const {
        return set + "[" + std::to_string(index) + "]";
    }

    auto operator<=>(const ParamRef &) const = default;
};

/// Per-set value arrays keyed by set name.
using Binding = std::map<std::string, std::vector<double>>;

struct AngleExpression {
    double coefficient = 1.0;
    std::vector<ParamRef> factors;

    bool operator==(const AngleExpression &) const = default;
};

namespace detail {

inline double bound_value(const Binding &binding, const ParamRef &ref) {
    const auto it = binding.find(ref.set);
    if (it == binding.end()) {
        raise<BindingError>("no values bound for set '", ref.set, "'");
    }
    if (ref.index >= it->second.size()) {
        raise<BindingError>("reference ", ref.str(), " exceeds bound size ",
                            it->second.size());
    }
    return it->second[ref.index];
}

} // namespace detail

/// coefficient * product of bound factor values.
inline double evaluate_expression(const AngleExpression &expr,
                                  const Binding &binding) {
    double value = expr.coefficient;
    for (const auto &f : expr.factors) {
        value *= detail::bound_value(binding, f);
    }
    return value;
}

/// Partial derivative of `expr` with respect to `wrt` (0 if absent).
inline double expression_partial(const AngleExpression &expr,
                                 const ParamRef &wrt, const Binding &binding) {
    bool found = false;
    double value = expr.coefficient;
    for (const auto &f : expr.factors) {
        if (f == wrt) {
            found = true;
        } else {
            value *= detail::bound_value(binding, f);
        }
    }
    return found ? value : 0.0;
}

/// Factor reference resolved to a declared set position.
struct ResolvedRef {
    std::size_t set_id = 0;
    std::size_t index = 0;
};

struct Gate {
    GateKind kind = GateKind::H;
    /// One qubit, or {control, target} for CNOT.
    std::vector<std::size_t> qubits;
    std::optional<AngleExpression> expr;
};

/// Values of every declared set, indexed by declaration position.
class ResolvedBinding {
  public:
    ResolvedBinding() = default;
    explicit ResolvedBinding(std::vector<std::vector<double>> values)
        : values_(std::move(values)) {}

    [[nodiscard]] double operator()(const ResolvedRef &ref) const noexcept {
        return values_[ref.set_id][ref.index];
    }
    std::vector<double> &set(std::size_t id) { return values_[id]; }
    [[nodiscard]] const std::vector<double> &set(std::size_t id) const {
        return values_[id];
    }
    [[nodiscard]] std::size_t num_sets() const noexcept {
        return values_.size();
    }

  private:
    std::vector<std::vector<double>> values_;
};

class CircuitBuilder;

/// Immutable gate list over declared parameter sets.
class Circuit {
  public:
    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return num_qubits_;
    }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept {
        return gates_;
    }
    [[nodiscard]] const std::vector<ParameterSet> &parameter_sets()
        const noexcept {
        return sets_;
    }

    [[nodiscard]] std::optional<std::size_t>
    find_set(std::string_view name) const {
        for (std::size_t i = 0; i < sets_.size(); ++i) {
            if (sets_[i].name == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    [[nodiscard]] std::size_t set_id(std::string_view name) const {
        if (auto id = find_set(name)) {
            return *id;
        }
        detail::raise<BindingError>("unknown parameter set '", name, "'");
    }

    [[nodiscard]] const ParameterSet &set(std::string_view name) const {
        return sets_[set_id(name)];
    }

    /// Resolved factor references of gate g (empty for fixed gates).
    [[nodiscard]] const std::vector<ResolvedRef> &
    resolved_factors(std::size_t g) const {
        return resolved_[g];
    }

    [[nodiscard]] std::size_t num_parameterized_gates() const noexcept {
        return static_cast<std::size_t>(
            std::count_if(gates_.begin(), gates_.end(),
                          [](const Gate &g) { return g.expr.has_value(); }));
    }

    /// Validates that `binding` covers every declared set exactly and
    /// returns it in declaration order.
    [[nodiscard]] ResolvedBinding resolve(const Binding &binding) const {
        std::vector<std::vector<double>> values;
        values.reserve(sets_.size());
        for (const auto &s : sets_) {
            const auto it = binding.find(s.name);
            if (it == binding.end()) {
                detail::raise<BindingError>("binding lacks set '", s.name,
                                            "'");
            }
            if (it->second.size() != s.size) {
                detail::raise<BindingError>("set '", s.name, "' bound with ",
                                            it->second.size(),
                                            " values, expected ", s.size);
            }
            values.push_back(it->second);
        }
        if (binding.size() != sets_.size()) {
            for (const auto &[name, v] : binding) {
                if (!find_set(name)) {
                    detail::raise<BindingError>("binding names undeclared set '",
                                                name, "'");
                }
            }
        }
        return ResolvedBinding(std::move(values));
    }

    /// Bound angle of every gate (0 for fixed gates).
    [[nodiscard]] std::vector<double>
    angles(const ResolvedBinding &values) const {
        std::vector<double> out(gates_.size(), 0.0);
        for (std::size_t g = 0; g < gates_.size(); ++g) {
            if (gates_[g].expr) {
                out[g] = angle(g, values);
            }
        }
        return out;
    }

    [[nodiscard]] double angle(std::size_t g,
                               const ResolvedBinding &values) const {
        double v = gates_[g].expr->coefficient;
        for (const auto &r : resolved_[g]) {
            v *= values(r);
        }
        return v;
    }

    /// d(angle of gate g)/d(factor k of gate g).
    [[nodiscard]] double factor_partial(std::size_t g, std::size_t k,
                                        const ResolvedBinding &values) const {
        double v = gates_[g].expr->coefficient;
        const auto &refs = resolved_[g];
        for (std::size_t j = 0; j < refs.size(); ++j) {
            if (j != k) {
                v *= values(refs[j]);
            }
        }
        return v;
    }

  private:
    friend class CircuitBuilder;
    std::size_t num_qubits_ = 0;
    std::vector<ParameterSet> sets_;
    std::vector<Gate> gates_;
    std::vector<std::vector<ResolvedRef>> resolved_;
};

/// Accumulates gates and validates them into an immutable Circuit.
class CircuitBuilder {
  public:
    explicit CircuitBuilder(std::size_t num_qubits) {
        if (num_qubits < 1 || num_qubits > kMaxQubits) {
            detail::raise<ResourceLimitError>("num_qubits ", num_qubits,
                                              " outside [1, ", kMaxQubits,
                                              "]");
        }
        circuit_.num_qubits_ = num_qubits;
    }

    CircuitBuilder &add_set(std::string name, std::size_t size,
                            ParameterRole role = ParameterRole::Trainable) {
        if (name.empty()) {
            throw ArgumentError("parameter set name must not be empty");
        }
        if (circuit_.find_set(name)) {
            detail::raise<ArgumentError>("parameter set '", name,
                                         "' declared twice");
        }
        circuit_.sets_.push_back({std::move(name), size, role});
        return *this;
    }

    CircuitBuilder &add_gate(GateKind kind, std::vector<std::size_t> qubits,
                             std::optional<AngleExpression> expr = {}) {
        if (qubits.size() != gate_arity(kind)) {
            detail::raise<ArgumentError>(to_string(kind), " expects ",
                                         gate_arity(kind), " qubit(s)");
        }
        for (auto q : qubits) {
            if (q >= circuit_.num_qubits_) {
                detail::raise<IndexError>("qubit ", q, " out of range for ",
                                          circuit_.num_qubits_,
                                          "-qubit circuit");
            }
        }
        if (qubits.size() == 2 && qubits[0] == qubits[1]) {
            throw ArgumentError("CNOT control and target must differ");
        }
        if (is_rotation(kind) != expr.has_value()) {
            detail::raise<ArgumentError>(
                to_string(kind), is_rotation(kind)
                                     ? " requires an angle expression"
                                     : " takes no angle expression");
        }
        std::vector<ResolvedRef> resolved;
        if (expr) {
            for (std::size_t i = 0; i < expr->factors.size(); ++i) {
                const auto &f = expr->factors[i];
                for (std::size_t j = 0; j < i; ++j) {
                    if (expr->factors[j] == f) {
                        detail::raise<ArgumentError>(
                            "reference ", f.str(),
                            " repeated within one expression");
                    }
                }
                const auto id = circuit_.find_set(f.set);
                if (!id) {
                    detail::raise<BindingError>("expression references "
                                                "undeclared set '",
                                                f.set, "'");
                }
                if (f.index >= circuit_.sets_[*id].size) {
                    detail::raise<BindingError>(
                        "reference ", f.str(), " exceeds set size ",
                        circuit_.sets_[*id].size);
                }
                resolved.push_back({*id, f.index});
            }
        }
        circuit_.gates_.push_back({kind, std::move(qubits), std::move(expr)});
        circuit_.resolved_.push_back(std::move(resolved));
        return *this;
    }

    /// Rotation by coefficient * product of `factors`.
    CircuitBuilder &rotation(GateKind kind, std::size_t qubit,
                             std::vector<ParamRef> factors,
                             double coefficient = 1.0) {
        return add_gate(kind, {qubit},
                        AngleExpression{coefficient, std::move(factors)});
    }

    CircuitBuilder &cnot(std::size_t control, std::size_t target) {
        return add_gate(GateKind::CNOT, {control, target});
    }

    [[nodiscard]] Circuit build() const { return circuit_; }

  private:
    Circuit circuit_;
};

namespace detail {

inline void apply_circuit_gate(StateVector &state, const Gate &gate,
                               double angle) {
    apply_unchecked(state.amplitudes(), gate.kind, gate.qubits[0],
                    gate.qubits.size() > 1 ? gate.qubits[1] : 0, angle);
}

inline void apply_circuit_gate_adjoint(StateVector &state, const Gate &gate,
                                       double angle) {
    apply_unchecked(state.amplitudes(), gate.kind, gate.qubits[0],
                    gate.qubits.size() > 1 ? gate.qubits[1] : 0, -angle);
}

} // namespace detail

/// U|0> with per-gate angles precomputed by Circuit::angles.
inline StateVector evolve_angles(const Circuit &circuit,
                                 const std::vector<double> &angles) {
    ++counters().forward_evolutions;
    auto state = zero_state(circuit.num_qubits());
    const auto &gates = circuit.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        detail::apply_circuit_gate(state, gates[g], angles[g]);
    }
    return state;
}

inline StateVector evolve(const Circuit &circuit,
                          const ResolvedBinding &values) {
    return evolve_angles(circuit, circuit.angles(values));
}

/// Applies the circuit to |0...0> under `binding`.
inline StateVector evolve(const Circuit &circuit, const Binding &binding) {
    return evolve(circuit, circuit.resolve(binding));
}

/// Set names used by build_reuploading_ansatz.
struct AnsatzSetNames {
    std::string encoding = "s";
    std::string variational = "theta";
    std::string scaling = "lambda";
};

/// Data re-uploading ansatz with trainable input scaling.
///
/// Declares sets (encoding, size num_features), (variational, size 2*n*d)
/// and (scaling, size n*d). Layer l applies on each qubit q, with
/// j = l*n + q: RX(lambda[j] * s[j mod F]), RY(theta[2j]), RZ(theta[2j+1]);
/// then CNOT(q, q+1) for q = 0..n-2.
inline Circuit build_reuploading_ansatz(std::size_t num_qubits,
                                        std::size_t depth,
                                        std::size_t num_features,
                                        const AnsatzSetNames &names = {}) {
    if (depth < 1) {
        throw ArgumentError("ansatz depth must be >= 1");
    }
    if (num_features < 1) {
        throw ArgumentError("ansatz needs at least one feature");
    }
    CircuitBuilder b(num_qubits);
    b.add_set(names.encoding, num_features, ParameterRole::Encoding)
        .add_set(names.variational, 2 * num_qubits * depth,
                 ParameterRole::Trainable)
        .add_set(names.scaling, num_qubits * depth, ParameterRole::Trainable);
    for (std::size_t layer = 0; layer < depth; ++layer) {
        for (std::size_t q = 0; q < num_qubits; ++q) {
            const std::size_t j = layer * num_qubits + q;
            b.rotation(GateKind::RX, q,
                       {{names.scaling, j}, {names.encoding, j % num_features}});
            b.rotation(GateKind::RY, q, {{names.variational, 2 * j}});
            b.rotation(GateKind::RZ, q, {{names.variational, 2 * j + 1}});
        }
        for (std::size_t q = 0; q + 1 < num_qubits; ++q) {
            b.cnot(q, q + 1);
        }
    }
    return b.build();
}

/// Total entry count over sets with the given role.
inline std::size_t count_parameters(const Circuit &circuit,
                                    ParameterRole role) {
    std::size_t n = 0;
    for (const auto &s : circuit.parameter_sets()) {
        if (s.role == role) {
            n += s.size;
        }
    }
    return n;
}

} // namespace vqc
