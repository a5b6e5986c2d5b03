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
 * @file gradients.hpp
 * Gradient backends for d<O_i>/dp over M observables:
 *
 *  - adjoint: one forward evolution, then a single reverse sweep that
 *    unwinds the ket and M observable-seeded bras together;
 *  - parameter shift: two shifted evolutions per parameterized gate
 *    occurrence, each serving all M observables;
 *  - SPSA: two evolutions per sample along a Rademacher direction;
 *  - central finite differences, used as a test oracle.
 *
 * Gradients are reported per requested parameter set as (M x set.size)
 * matrices. Encoding sets may be requested like any other set.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "circuit.hpp"
#include "error.hpp"
#include "instrumentation.hpp"
#include "observables.hpp"
#include "state_vector.hpp"
#include "tensor.hpp"

namespace vqc {

enum class GradientMethod { Adjoint, ParameterShift, Spsa, FiniteDifference };

[[nodiscard]] inline std::string_view to_string(GradientMethod m) noexcept {
    switch (m) {
    case GradientMethod::Adjoint:
        return "adjoint";
    case GradientMethod::ParameterShift:
        return "param-shift";
    case GradientMethod::Spsa:
        return "spsa";
    case GradientMethod::FiniteDifference:
        return "finite-difference";
    }
    return "?";
}

inline GradientMethod parse_gradient_method(std::string_view text) {
    if (text == "adjoint")
        return GradientMethod::Adjoint;
    if (text == "param-shift")
        return GradientMethod::ParameterShift;
    if (text == "spsa")
        return GradientMethod::Spsa;
    if (text == "finite-difference" || text == "fd")
        return GradientMethod::FiniteDifference;
    detail::raise<ArgumentError>("unknown gradient method '", text, "'");
}

struct GradientOptions {
    GradientMethod method = GradientMethod::Adjoint;
    /// SPSA perturbation magnitude.
    double spsa_c = 0.01;
    std::size_t spsa_samples = 1;
    std::uint64_t seed = 0;
    /// Finite-difference step.
    double fd_step = 1e-4;
};

struct GradientResult {
    std::vector<double> expectations;
    /// set name -> (M x set.size) matrix of d<O_i>/dp.
    std::map<std::string, Matrix> gradients;
};

/// Gradients indexed by position in the requested set-id list.
struct RawGradients {
    std::vector<double> expectations;
    std::vector<Matrix> gradients;
};

namespace detail {

/// For each declared set, the position in `wrt` or -1.
inline std::vector<int> wanted_positions(const Circuit &circuit,
                                         std::span<const std::size_t> wrt) {
    std::vector<int> pos(circuit.parameter_sets().size(), -1);
    for (std::size_t k = 0; k < wrt.size(); ++k) {
        if (wrt[k] >= pos.size()) {
            raise<BindingError>("set id ", wrt[k], " out of range");
        }
        if (pos[wrt[k]] >= 0) {
            raise<ArgumentError>("set '", circuit.parameter_sets()[wrt[k]].name,
                                 "' requested twice");
        }
        pos[wrt[k]] = static_cast<int>(k);
    }
    return pos;
}

inline RawGradients empty_gradients(const Circuit &circuit,
                                    std::size_t num_observables,
                                    std::span<const std::size_t> wrt) {
    RawGradients out;
    out.expectations.assign(num_observables, 0.0);
    for (auto id : wrt) {
        out.gradients.emplace_back(num_observables,
                                   circuit.parameter_sets()[id].size);
    }
    return out;
}

inline bool gate_is_wanted(const Circuit &circuit, std::size_t g,
                           const std::vector<int> &pos) {
    for (const auto &r : circuit.resolved_factors(g)) {
        if (pos[r.set_id] >= 0) {
            return true;
        }
    }
    return false;
}

inline void check_differentiable(const Circuit &circuit) {
    for (const auto &gate : circuit.gates()) {
        if (gate.expr && !is_rotation(gate.kind)) {
            raise<UnsupportedGateError>(
                "gate ", to_string(gate.kind),
                " carries a parameter but has no single-Pauli generator");
        }
    }
}

} // namespace detail

/// Multi-observable adjoint differentiation.
///
/// With psi the post-gate state of gate k and phi_i = U_{k+1}^dag ...
/// U_N^dag O_i |psi_N>, the contribution of rotation k with generator P is
/// d<O_i>/d(angle_k) = Im <phi_i| P |psi>, which follows from
/// dU/da = -(i/2) P U and 2 Re(-(i/2) z) = Im z. The chain rule through
/// the angle expression then distributes it over the referenced entries.
inline RawGradients adjoint_gradients(const Circuit &circuit,
                                      const ResolvedBinding &values,
                                      std::span<const Observable> observables,
                                      std::span<const std::size_t> wrt) {
    detail::check_differentiable(circuit);
    const auto pos = detail::wanted_positions(circuit, wrt);
    auto out = detail::empty_gradients(circuit, observables.size(), wrt);
    const std::size_t num_obs = observables.size();
    if (num_obs == 0) {
        return out;
    }

    const auto angles = circuit.angles(values);
    auto psi = evolve_angles(circuit, angles);
    std::vector<StateVector> phis;
    phis.reserve(num_obs);
    for (std::size_t i = 0; i < num_obs; ++i) {
        out.expectations[i] = expectation(observables[i], psi);
        phis.push_back(apply_observable(observables[i], psi));
    }

    const auto &gates = circuit.gates();
    // The sweep stops at the earliest gate that depends on a requested set.
    std::size_t first = gates.size();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (gates[g].expr && detail::gate_is_wanted(circuit, g, pos)) {
            first = g;
            break;
        }
    }
    if (first == gates.size()) {
        return out;
    }

    auto &c = counters();
    ++c.reverse_ket_sweeps;
    c.reverse_bra_sweeps += num_obs;

    for (std::size_t g = gates.size(); g-- > first;) {
        const auto &gate = gates[g];
        if (gate.expr && detail::gate_is_wanted(circuit, g, pos)) {
            const auto &refs = circuit.resolved_factors(g);
            const Pauli gen = generator(gate.kind);
            for (std::size_t i = 0; i < num_obs; ++i) {
                const double d_angle =
                    pauli_matrix_element(phis[i].amplitudes(),
                                         psi.amplitudes(), gen,
                                         gate.qubits[0])
                        .imag();
                for (std::size_t k = 0; k < refs.size(); ++k) {
                    const int p = pos[refs[k].set_id];
                    if (p >= 0) {
                        out.gradients[static_cast<std::size_t>(p)](
                            i, refs[k].index) +=
                            d_angle * circuit.factor_partial(g, k, values);
                    }
                }
            }
        }
        if (g > first) {
            detail::apply_circuit_gate_adjoint(psi, gate, angles[g]);
            for (auto &phi : phis) {
                detail::apply_circuit_gate_adjoint(phi, gate, angles[g]);
            }
        }
    }
    return out;
}

/// Parameter-shift rule applied per gate occurrence, then chained through
/// the angle expression; shared parameters sum their occurrences.
inline RawGradients
parameter_shift_gradients(const Circuit &circuit,
                          const ResolvedBinding &values,
                          std::span<const Observable> observables,
                          std::span<const std::size_t> wrt) {
    detail::check_differentiable(circuit);
    const auto pos = detail::wanted_positions(circuit, wrt);
    auto out = detail::empty_gradients(circuit, observables.size(), wrt);
    const std::size_t num_obs = observables.size();
    if (num_obs == 0) {
        return out;
    }
    const auto angles = circuit.angles(values);
    out.expectations = expectations_all(observables,
                                        evolve_angles(circuit, angles));

    constexpr double shift = std::numbers::pi / 2;
    auto shifted = angles;
    const auto &gates = circuit.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (!gates[g].expr || !detail::gate_is_wanted(circuit, g, pos)) {
            continue;
        }
        shifted[g] = angles[g] + shift;
        const auto plus =
            expectations_all(observables, evolve_angles(circuit, shifted));
        shifted[g] = angles[g] - shift;
        const auto minus =
            expectations_all(observables, evolve_angles(circuit, shifted));
        shifted[g] = angles[g];

        const auto &refs = circuit.resolved_factors(g);
        for (std::size_t k = 0; k < refs.size(); ++k) {
            const int p = pos[refs[k].set_id];
            if (p < 0) {
                continue;
            }
            const double partial = circuit.factor_partial(g, k, values);
            for (std::size_t i = 0; i < num_obs; ++i) {
                out.gradients[static_cast<std::size_t>(p)](i, refs[k].index) +=
                    0.5 * (plus[i] - minus[i]) * partial;
            }
        }
    }
    return out;
}

/// Simultaneous-perturbation estimate, averaged over `samples` Rademacher
/// directions drawn from a generator seeded with `seed`.
inline RawGradients spsa_gradients(const Circuit &circuit,
                                   const ResolvedBinding &values,
                                   std::span<const Observable> observables,
                                   std::span<const std::size_t> wrt,
                                   double c, std::size_t samples,
                                   std::uint64_t seed) {
    if (!(c > 0.0)) {
        detail::raise<ArgumentError>("SPSA perturbation must be > 0, got ", c);
    }
    if (samples < 1) {
        throw ArgumentError("SPSA needs at least one sample");
    }
    detail::wanted_positions(circuit, wrt);
    auto out = detail::empty_gradients(circuit, observables.size(), wrt);
    const std::size_t num_obs = observables.size();
    if (num_obs == 0) {
        return out;
    }
    out.expectations = forward(circuit, values, observables);

    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> delta(wrt.size());
    auto plus = values;
    auto minus = values;
    const double scale = 1.0 / static_cast<double>(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t k = 0; k < wrt.size(); ++k) {
            const auto &base = values.set(wrt[k]);
            delta[k].resize(base.size());
            for (std::size_t j = 0; j < base.size(); ++j) {
                delta[k][j] = (rng() >> 63) != 0 ? 1.0 : -1.0;
                plus.set(wrt[k])[j] = base[j] + c * delta[k][j];
                minus.set(wrt[k])[j] = base[j] - c * delta[k][j];
            }
        }
        const auto fp = forward(circuit, plus, observables);
        const auto fm = forward(circuit, minus, observables);
        for (std::size_t k = 0; k < wrt.size(); ++k) {
            auto &grad = out.gradients[k];
            for (std::size_t i = 0; i < num_obs; ++i) {
                const double diff = (fp[i] - fm[i]) / (2.0 * c);
                for (std::size_t j = 0; j < delta[k].size(); ++j) {
                    grad(i, j) += scale * diff / delta[k][j];
                }
            }
        }
    }
    return out;
}

/// Central differences per parameter entry (not per occurrence).
inline RawGradients finite_difference_gradients(
    const Circuit &circuit, const ResolvedBinding &values,
    std::span<const Observable> observables, std::span<const std::size_t> wrt,
    double h) {
    if (!(h > 0.0)) {
        detail::raise<ArgumentError>("finite-difference step must be > 0, got ",
                                     h);
    }
    detail::wanted_positions(circuit, wrt);
    auto out = detail::empty_gradients(circuit, observables.size(), wrt);
    const std::size_t num_obs = observables.size();
    if (num_obs == 0) {
        return out;
    }
    out.expectations = forward(circuit, values, observables);
    auto probe = values;
    for (std::size_t k = 0; k < wrt.size(); ++k) {
        auto &entries = probe.set(wrt[k]);
        for (std::size_t j = 0; j < entries.size(); ++j) {
            const double base = entries[j];
            entries[j] = base + h;
            const auto fp = forward(circuit, probe, observables);
            entries[j] = base - h;
            const auto fm = forward(circuit, probe, observables);
            entries[j] = base;
            for (std::size_t i = 0; i < num_obs; ++i) {
                out.gradients[k](i, j) = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
    }
    return out;
}

/// Dispatches on options.method.
inline RawGradients compute_gradients(const Circuit &circuit,
                                      const ResolvedBinding &values,
                                      std::span<const Observable> observables,
                                      std::span<const std::size_t> wrt,
                                      const GradientOptions &options) {
    switch (options.method) {
    case GradientMethod::Adjoint:
        return adjoint_gradients(circuit, values, observables, wrt);
    case GradientMethod::ParameterShift:
        return parameter_shift_gradients(circuit, values, observables, wrt);
    case GradientMethod::Spsa:
        return spsa_gradients(circuit, values, observables, wrt,
                              options.spsa_c, options.spsa_samples,
                              options.seed);
    case GradientMethod::FiniteDifference:
        return finite_difference_gradients(circuit, values, observables, wrt,
                                           options.fd_step);
    }
    throw ArgumentError("unknown gradient method");
}

namespace detail {

inline std::vector<std::size_t>
resolve_wrt(const Circuit &circuit, std::span<const std::string> wrt) {
    std::vector<std::size_t> ids;
    ids.reserve(wrt.size());
    for (const auto &name : wrt) {
        ids.push_back(circuit.set_id(name));
    }
    return ids;
}

inline GradientResult name_gradients(const Circuit &circuit,
                                     std::span<const std::size_t> ids,
                                     RawGradients raw) {
    GradientResult out;
    out.expectations = std::move(raw.expectations);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        out.gradients.emplace(circuit.parameter_sets()[ids[k]].name,
                              std::move(raw.gradients[k]));
    }
    return out;
}

} // namespace detail

/// Name-keyed front end over compute_gradients.
inline GradientResult gradients(const Circuit &circuit, const Binding &binding,
                                std::span<const Observable> observables,
                                std::span<const std::string> wrt,
                                const GradientOptions &options = {}) {
    const auto values = circuit.resolve(binding);
    const auto ids = detail::resolve_wrt(circuit, wrt);
    return detail::name_gradients(
        circuit, ids,
        compute_gradients(circuit, values, observables, ids, options));
}

inline GradientResult adjoint_gradients(const Circuit &circuit,
                                        const Binding &binding,
                                        std::span<const Observable> observables,
                                        std::span<const std::string> wrt) {
    return gradients(circuit, binding, observables, wrt,
                     {.method = GradientMethod::Adjoint});
}

inline GradientResult
parameter_shift_gradients(const Circuit &circuit, const Binding &binding,
                          std::span<const Observable> observables,
                          std::span<const std::string> wrt) {
    return gradients(circuit, binding, observables, wrt,
                     {.method = GradientMethod::ParameterShift});
}

inline GradientResult spsa_gradients(const Circuit &circuit,
                                     const Binding &binding,
                                     std::span<const Observable> observables,
                                     std::span<const std::string> wrt,
                                     double c = 0.01, std::size_t samples = 1,
                                     std::uint64_t seed = 0) {
    return gradients(circuit, binding, observables, wrt,
                     {.method = GradientMethod::Spsa,
                      .spsa_c = c,
                      .spsa_samples = samples,
                      .seed = seed});
}

inline GradientResult
finite_difference_gradients(const Circuit &circuit, const Binding &binding,
                            std::span<const Observable> observables,
                            std::span<const std::string> wrt,
                            double h = 1e-4) {
    return gradients(circuit, binding, observables, wrt,
                     {.method = GradientMethod::FiniteDifference,
                      .fd_step = h});
}

} // namespace vqc
