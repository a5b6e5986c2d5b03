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
 * @file state_vector.hpp
 * Dense statevector kernel: state creation, in-place gate application and
 * its adjoint, Pauli-string action and inner products.
 *
 * Qubit q is bit q of the basis-state index (qubit 0 is the least
 * significant bit). Rotations follow U(theta) = exp(-i theta P / 2); the
 * global phase is kept.
 */
#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "instrumentation.hpp"

namespace vqc {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 24;

enum class GateKind { RX, RY, RZ, CNOT, H, X };

enum class Pauli : std::uint8_t { I, X, Y, Z };

[[nodiscard]] constexpr bool is_rotation(GateKind kind) noexcept {
    return kind == GateKind::RX || kind == GateKind::RY ||
           kind == GateKind::RZ;
}

/// Generator P of a rotation kind (I for non-rotations).
[[nodiscard]] constexpr Pauli generator(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::RX:
        return Pauli::X;
    case GateKind::RY:
        return Pauli::Y;
    case GateKind::RZ:
        return Pauli::Z;
    default:
        return Pauli::I;
    }
}

[[nodiscard]] constexpr std::size_t gate_arity(GateKind kind) noexcept {
    return kind == GateKind::CNOT ? 2 : 1;
}

[[nodiscard]] inline std::string_view to_string(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::H:
        return "H";
    case GateKind::X:
        return "X";
    }
    return "?";
}

inline GateKind parse_gate_kind(std::string_view text) {
    if (text == "RX")
        return GateKind::RX;
    if (text == "RY")
        return GateKind::RY;
    if (text == "RZ")
        return GateKind::RZ;
    if (text == "CNOT")
        return GateKind::CNOT;
    if (text == "H")
        return GateKind::H;
    if (text == "X")
        return GateKind::X;
    detail::raise<ParseError>("unknown gate kind '", text, "'");
}

class StateVector {
  public:
    StateVector() = default;

    /// Wraps explicit amplitudes; the length must be a power of two >= 2.
    explicit StateVector(std::vector<Complex> amplitudes)
        : amplitudes_(std::move(amplitudes)) {
        const auto len = amplitudes_.size();
        if (len < 2 || !std::has_single_bit(len)) {
            detail::raise<ArgumentError>("amplitude count ", len,
                                         " is not a power of two >= 2");
        }
        num_qubits_ = static_cast<std::size_t>(std::countr_zero(len));
        if (num_qubits_ > kMaxQubits) {
            detail::raise<ResourceLimitError>("state of ", num_qubits_,
                                              " qubits exceeds limit ",
                                              kMaxQubits);
        }
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return num_qubits_;
    }
    [[nodiscard]] std::size_t size() const noexcept {
        return amplitudes_.size();
    }

    Complex &operator[](std::size_t i) noexcept { return amplitudes_[i]; }
    const Complex &operator[](std::size_t i) const noexcept {
        return amplitudes_[i];
    }

    std::span<Complex> amplitudes() noexcept { return amplitudes_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }

    [[nodiscard]] double norm() const noexcept {
        double acc = 0.0;
        for (const auto &a : amplitudes_) {
            acc += std::norm(a);
        }
        return std::sqrt(acc);
    }

    bool operator==(const StateVector &) const = default;

  private:
    friend StateVector zero_state(std::size_t);
    std::size_t num_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

/// |0...0> on num_qubits qubits.
inline StateVector zero_state(std::size_t num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        detail::raise<ResourceLimitError>("num_qubits ", num_qubits,
                                          " outside [1, ", kMaxQubits, "]");
    }
    StateVector s;
    s.num_qubits_ = num_qubits;
    s.amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    s.amplitudes_[0] = Complex{1.0, 0.0};
    return s;
}

/// Pauli string with per-qubit letters; letter q acts on qubit q.
class PauliString {
  public:
    PauliString() = default;

    explicit PauliString(std::string_view letters) {
        if (letters.empty()) {
            throw ParseError("empty Pauli string");
        }
        if (letters.size() > kMaxQubits) {
            detail::raise<ResourceLimitError>("Pauli string of length ",
                                              letters.size(), " too long");
        }
        letters_.reserve(letters.size());
        for (std::size_t q = 0; q < letters.size(); ++q) {
            const std::uint64_t bit = std::uint64_t{1} << q;
            switch (letters[q]) {
            case 'I':
                letters_.push_back(Pauli::I);
                break;
            case 'X':
                letters_.push_back(Pauli::X);
                x_mask_ |= bit;
                break;
            case 'Y':
                letters_.push_back(Pauli::Y);
                x_mask_ |= bit;
                z_mask_ |= bit;
                ++num_y_;
                break;
            case 'Z':
                letters_.push_back(Pauli::Z);
                z_mask_ |= bit;
                break;
            default:
                detail::raise<ParseError>("invalid Pauli letter '",
                                          letters[q], "' in '", letters, "'");
            }
        }
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return letters_.size();
    }
    [[nodiscard]] Pauli at(std::size_t q) const { return letters_.at(q); }
    /// Qubits carrying X or Y.
    [[nodiscard]] std::uint64_t x_mask() const noexcept { return x_mask_; }
    /// Qubits carrying Y or Z.
    [[nodiscard]] std::uint64_t z_mask() const noexcept { return z_mask_; }
    [[nodiscard]] unsigned num_y() const noexcept { return num_y_; }

    /// i^(number of Y letters).
    [[nodiscard]] Complex phase() const noexcept {
        static constexpr std::array<Complex, 4> powers{
            Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}, Complex{0, -1}};
        return powers[num_y_ % 4];
    }

    [[nodiscard]] std::string str() const {
        std::string out;
        out.reserve(letters_.size());
        for (auto p : letters_) {
            out.push_back("IXYZ"[static_cast<int>(p)]);
        }
        return out;
    }

    bool operator==(const PauliString &) const = default;

  private:
    std::vector<Pauli> letters_;
    std::uint64_t x_mask_ = 0;
    std::uint64_t z_mask_ = 0;
    unsigned num_y_ = 0;
};

namespace detail {

inline void check_qubit(const StateVector &state, std::size_t q) {
    if (q >= state.num_qubits()) {
        raise<IndexError>("qubit ", q, " out of range for ",
                          state.num_qubits(), "-qubit state");
    }
}

// Explicit arithmetic keeps the hot loops free of the libgcc complex
// multiplication helper.
inline Complex cmul(Complex a, Complex b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

inline Complex conj_mul(Complex a, Complex b) noexcept {
    return {a.real() * b.real() + a.imag() * b.imag(),
            a.real() * b.imag() - a.imag() * b.real()};
}

/// Visits every amplitude pair (i0, i1) differing only in bit `q`,
/// with bit q of i0 cleared.
template <class F>
inline void for_each_pair(std::span<Complex> amps, std::size_t q, F &&f) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps.size();
    for (std::size_t hi = 0; hi < dim; hi += 2 * stride) {
        for (std::size_t lo = 0; lo < stride; ++lo) {
            f(amps[hi + lo], amps[hi + lo + stride]);
        }
    }
}

inline void apply_rx(std::span<Complex> amps, std::size_t q, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    for_each_pair(amps, q, [c, s](Complex &a0, Complex &a1) {
        const Complex v0 = a0;
        const Complex v1 = a1;
        // [[c, -is], [-is, c]]
        a0 = {c * v0.real() + s * v1.imag(), c * v0.imag() - s * v1.real()};
        a1 = {c * v1.real() + s * v0.imag(), c * v1.imag() - s * v0.real()};
    });
}

inline void apply_ry(std::span<Complex> amps, std::size_t q, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    for_each_pair(amps, q, [c, s](Complex &a0, Complex &a1) {
        const Complex v0 = a0;
        const Complex v1 = a1;
        a0 = {c * v0.real() - s * v1.real(), c * v0.imag() - s * v1.imag()};
        a1 = {s * v0.real() + c * v1.real(), s * v0.imag() + c * v1.imag()};
    });
}

inline void apply_rz(std::span<Complex> amps, std::size_t q, double angle) {
    const Complex lower{std::cos(angle / 2), -std::sin(angle / 2)};
    const Complex upper{lower.real(), -lower.imag()};
    for_each_pair(amps, q, [lower, upper](Complex &a0, Complex &a1) {
        a0 = cmul(lower, a0);
        a1 = cmul(upper, a1);
    });
}

inline void apply_h(std::span<Complex> amps, std::size_t q) {
    const double r = 1.0 / std::sqrt(2.0);
    for_each_pair(amps, q, [r](Complex &a0, Complex &a1) {
        const Complex v0 = a0;
        a0 = r * (v0 + a1);
        a1 = r * (v0 - a1);
    });
}

inline void apply_x(std::span<Complex> amps, std::size_t q) {
    for_each_pair(amps, q, [](Complex &a0, Complex &a1) { std::swap(a0, a1); });
}

inline void apply_cnot(std::span<Complex> amps, std::size_t control,
                       std::size_t target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

/// Unchecked dispatch used by the circuit evaluators.
inline void apply_unchecked(std::span<Complex> amps, GateKind kind,
                            std::size_t q0, std::size_t q1, double angle) {
    ++counters().gate_applications;
    switch (kind) {
    case GateKind::RX:
        apply_rx(amps, q0, angle);
        break;
    case GateKind::RY:
        apply_ry(amps, q0, angle);
        break;
    case GateKind::RZ:
        apply_rz(amps, q0, angle);
        break;
    case GateKind::CNOT:
        apply_cnot(amps, q0, q1);
        break;
    case GateKind::H:
        apply_h(amps, q0);
        break;
    case GateKind::X:
        apply_x(amps, q0);
        break;
    }
}

inline void validate_gate(const StateVector &state, GateKind kind,
                          std::span<const std::size_t> qubits,
                          std::optional<double> angle) {
    if (qubits.size() != gate_arity(kind)) {
        raise<ArgumentError>(to_string(kind), " expects ", gate_arity(kind),
                             " qubit(s), got ", qubits.size());
    }
    for (auto q : qubits) {
        check_qubit(state, q);
    }
    if (qubits.size() == 2 && qubits[0] == qubits[1]) {
        raise<ArgumentError>(to_string(kind), " qubits must be distinct");
    }
    if (is_rotation(kind) && !angle) {
        raise<ArgumentError>(to_string(kind), " requires an angle");
    }
    if (!is_rotation(kind) && angle) {
        raise<ArgumentError>(to_string(kind), " takes no angle");
    }
}

} // namespace detail

/// Multiplies `state` in place by the gate unitary. For CNOT, qubits are
/// {control, target}.
inline void apply_gate(StateVector &state, GateKind kind,
                       std::span<const std::size_t> qubits,
                       std::optional<double> angle = std::nullopt) {
    detail::validate_gate(state, kind, qubits, angle);
    detail::apply_unchecked(state.amplitudes(), kind, qubits[0],
                            qubits.size() > 1 ? qubits[1] : 0,
                            angle.value_or(0.0));
}

inline void apply_gate(StateVector &state, GateKind kind,
                       std::initializer_list<std::size_t> qubits,
                       std::optional<double> angle = std::nullopt) {
    apply_gate(state, kind, std::span<const std::size_t>(qubits.begin(),
                                                         qubits.size()),
               angle);
}

/// Multiplies `state` in place by the adjoint of the gate unitary.
inline void apply_gate_adjoint(StateVector &state, GateKind kind,
                               std::span<const std::size_t> qubits,
                               std::optional<double> angle = std::nullopt) {
    detail::validate_gate(state, kind, qubits, angle);
    // Rotations invert by negating the angle; H, X and CNOT are involutions.
    detail::apply_unchecked(state.amplitudes(), kind, qubits[0],
                            qubits.size() > 1 ? qubits[1] : 0,
                            -angle.value_or(0.0));
}

inline void apply_gate_adjoint(StateVector &state, GateKind kind,
                               std::initializer_list<std::size_t> qubits,
                               std::optional<double> angle = std::nullopt) {
    apply_gate_adjoint(
        state, kind,
        std::span<const std::size_t>(qubits.begin(), qubits.size()), angle);
}

/// out += coeff * P|in>. `out` and `in` must not alias.
inline void accumulate_pauli(std::span<Complex> out,
                             std::span<const Complex> in,
                             const PauliString &pauli, double coeff) {
    ++counters().pauli_applications;
    const std::uint64_t x = pauli.x_mask();
    const std::uint64_t z = pauli.z_mask();
    const Complex phase = coeff * pauli.phase();
    const Complex neg_phase = -phase;
    for (std::size_t j = 0; j < in.size(); ++j) {
        const bool odd = (std::popcount(j & z) & 1) != 0;
        out[j ^ x] += detail::cmul(odd ? neg_phase : phase, in[j]);
    }
}

/// Returns P|state>; the input is left untouched.
inline StateVector apply_pauli(const StateVector &state,
                               const PauliString &pauli) {
    if (pauli.num_qubits() != state.num_qubits()) {
        detail::raise<ArgumentError>("Pauli string length ",
                                     pauli.num_qubits(), " != state qubits ",
                                     state.num_qubits());
    }
    StateVector out(std::vector<Complex>(state.size(), Complex{}));
    accumulate_pauli(out.amplitudes(), state.amplitudes(), pauli, 1.0);
    return out;
}

inline StateVector apply_pauli(const StateVector &state,
                               std::string_view letters) {
    return apply_pauli(state, PauliString(letters));
}

/// <bra|ket> = sum_j conj(bra_j) ket_j.
inline Complex inner_product(const StateVector &bra, const StateVector &ket) {
    if (bra.num_qubits() != ket.num_qubits()) {
        detail::raise<ArgumentError>("inner product of ", bra.num_qubits(),
                                     "- and ", ket.num_qubits(),
                                     "-qubit states");
    }
    Complex acc{};
    for (std::size_t j = 0; j < bra.size(); ++j) {
        acc += detail::conj_mul(bra[j], ket[j]);
    }
    return acc;
}

/// <bra| P_q |ket> for a single-qubit Pauli acting on qubit q.
inline Complex pauli_matrix_element(std::span<const Complex> bra,
                                    std::span<const Complex> ket, Pauli p,
                                    std::size_t q) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = ket.size();
    Complex acc{};
    switch (p) {
    case Pauli::I:
        for (std::size_t j = 0; j < dim; ++j) {
            acc += detail::conj_mul(bra[j], ket[j]);
        }
        break;
    case Pauli::X:
        for (std::size_t hi = 0; hi < dim; hi += 2 * stride) {
            for (std::size_t lo = 0; lo < stride; ++lo) {
                const std::size_t i0 = hi + lo;
                const std::size_t i1 = i0 + stride;
                acc += detail::conj_mul(bra[i0], ket[i1]) +
                       detail::conj_mul(bra[i1], ket[i0]);
            }
        }
        break;
    case Pauli::Y: {
        // Y = [[0, -i], [i, 0]]
        Complex upper{};
        for (std::size_t hi = 0; hi < dim; hi += 2 * stride) {
            for (std::size_t lo = 0; lo < stride; ++lo) {
                const std::size_t i0 = hi + lo;
                const std::size_t i1 = i0 + stride;
                upper += detail::conj_mul(bra[i0], ket[i1]);
                acc += detail::conj_mul(bra[i1], ket[i0]);
            }
        }
        acc = Complex{0, 1} * (acc - upper);
        break;
    }
    case Pauli::Z:
        for (std::size_t hi = 0; hi < dim; hi += 2 * stride) {
            for (std::size_t lo = 0; lo < stride; ++lo) {
                const std::size_t i0 = hi + lo;
                acc += detail::conj_mul(bra[i0], ket[i0]) -
                       detail::conj_mul(bra[i0 + stride], ket[i0 + stride]);
            }
        }
        break;
    }
    return acc;
}

} // namespace vqc
