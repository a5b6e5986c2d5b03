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
 * @file observables.hpp
 * Real-weighted Pauli sums and their expectation values. Every entry point
 * that takes a list of observables evaluates all of them on one evolved
 * state.
 */
#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "circuit.hpp"
#include "error.hpp"
#include "state_vector.hpp"

namespace vqc {

struct PauliTerm {
    double coefficient = 1.0;
    PauliString pauli;

    bool operator==(const PauliTerm &) const = default;
};

class Observable {
  public:
    Observable() = default;

    explicit Observable(std::vector<PauliTerm> terms)
        : terms_(std::move(terms)) {
        if (terms_.empty()) {
            throw ParseError("observable has no terms");
        }
        for (const auto &t : terms_) {
            if (t.pauli.num_qubits() != terms_.front().pauli.num_qubits()) {
                detail::raise<ParseError>(
                    "Pauli strings of different lengths: '",
                    terms_.front().pauli.str(), "' and '", t.pauli.str(), "'");
            }
        }
    }

    /// Z on `qubit`, identity elsewhere.
    static Observable pauli_z(std::size_t qubit, std::size_t num_qubits) {
        if (qubit >= num_qubits) {
            detail::raise<IndexError>("qubit ", qubit, " out of range");
        }
        std::string s(num_qubits, 'I');
        s[qubit] = 'Z';
        return Observable({{1.0, PauliString(s)}});
    }

    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept {
        return terms_;
    }
    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return terms_.empty() ? 0 : terms_.front().pauli.num_qubits();
    }

    /// Sum of |coefficient|, an upper bound on |<O>|.
    [[nodiscard]] double coefficient_norm() const noexcept {
        double acc = 0.0;
        for (const auto &t : terms_) {
            acc += std::abs(t.coefficient);
        }
        return acc;
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream out;
        out.precision(17);
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i > 0) {
                out << " + ";
            }
            out << terms_[i].coefficient << "*" << terms_[i].pauli.str();
        }
        return out.str();
    }

    bool operator==(const Observable &) const = default;

  private:
    std::vector<PauliTerm> terms_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_double(std::string_view text) {
    // std::from_chars for double is available from GCC 11.
    double value = 0.0;
    const auto *first = text.data();
    if (!text.empty() && text.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] =
        std::from_chars(first, text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() ||
        first == text.data() + text.size()) {
        raise<ParseError>("malformed number '", text, "'");
    }
    return value;
}

} // namespace detail

/// Parses "coeff*STRING + ..." (a bare STRING has coefficient 1).
/// Terms are separated by '+'; a negative coefficient is written "-0.5*XZ".
inline Observable parse_observable(std::string_view text) {
    std::vector<PauliTerm> terms;
    std::size_t start = 0;
    while (start <= text.size()) {
        // A '+' directly after '*' or 'e' belongs to a number, not a separator.
        std::size_t end = start;
        while (end < text.size()) {
            if (text[end] == '+' && end > start) {
                const char prev = text[end - 1];
                if (prev != '*' && prev != 'e' && prev != 'E') {
                    break;
                }
            }
            ++end;
        }
        const auto term = detail::trim(text.substr(start, end - start));
        if (term.empty()) {
            detail::raise<ParseError>("empty term in observable '", text, "'");
        }
        const auto star = term.find('*');
        if (star == std::string_view::npos) {
            terms.push_back({1.0, PauliString(term)});
        } else {
            const auto coeff = detail::trim(term.substr(0, star));
            const auto letters = detail::trim(term.substr(star + 1));
            terms.push_back(
                {detail::parse_double(coeff), PauliString(letters)});
        }
        start = end + 1;
    }
    return Observable(std::move(terms));
}

namespace detail {

inline void check_dims(const Observable &obs, const StateVector &state) {
    if (obs.num_qubits() != state.num_qubits()) {
        raise<ArgumentError>("observable on ", obs.num_qubits(),
                             " qubits applied to ", state.num_qubits(),
                             "-qubit state");
    }
}

/// <psi|P|psi> for one Pauli string without materializing P|psi>.
inline Complex pauli_expectation(std::span<const Complex> psi,
                                 const PauliString &pauli) {
    const std::uint64_t x = pauli.x_mask();
    const std::uint64_t z = pauli.z_mask();
    Complex acc{};
    if (x == 0) {
        double re = 0.0;
        for (std::size_t j = 0; j < psi.size(); ++j) {
            const double p = std::norm(psi[j]);
            re += (std::popcount(j & z) & 1) != 0 ? -p : p;
        }
        acc = {re, 0.0};
    } else {
        for (std::size_t j = 0; j < psi.size(); ++j) {
            const Complex v = conj_mul(psi[j ^ x], psi[j]);
            if ((std::popcount(j & z) & 1) != 0) {
                acc -= v;
            } else {
                acc += v;
            }
        }
    }
    return cmul(pauli.phase(), acc);
}

} // namespace detail

/// sum_t coeff_t * P_t |state>, unnormalized; the input is left untouched.
inline StateVector apply_observable(const Observable &obs,
                                    const StateVector &state) {
    detail::check_dims(obs, state);
    StateVector out(std::vector<Complex>(state.size(), Complex{}));
    for (const auto &t : obs.terms()) {
        accumulate_pauli(out.amplitudes(), state.amplitudes(), t.pauli,
                         t.coefficient);
    }
    return out;
}

/// Re <psi|O|psi>. Throws StateError if the imaginary part exceeds 1e-10
/// (relative to the coefficient norm), which signals a non-normalized or
/// corrupted state.
inline double expectation(const Observable &obs, const StateVector &state) {
    detail::check_dims(obs, state);
    Complex acc{};
    for (const auto &t : obs.terms()) {
        acc += t.coefficient * detail::pauli_expectation(state.amplitudes(),
                                                         t.pauli);
    }
    if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, obs.coefficient_norm())) {
        detail::raise<StateError>("expectation has imaginary part ",
                                  acc.imag());
    }
    return acc.real();
}

/// Expectations of all observables on one state.
inline std::vector<double>
expectations_all(std::span<const Observable> observables,
                 const StateVector &state) {
    std::vector<double> out;
    out.reserve(observables.size());
    for (const auto &obs : observables) {
        out.push_back(expectation(obs, state));
    }
    return out;
}

/// Single-evolution forward pass: evolves once, then evaluates all M
/// observables. M = 0 returns an empty vector without evolving.
inline std::vector<double> forward(const Circuit &circuit,
                                   const ResolvedBinding &values,
                                   std::span<const Observable> observables) {
    if (observables.empty()) {
        return {};
    }
    return expectations_all(observables, evolve(circuit, values));
}

inline std::vector<double> forward(const Circuit &circuit,
                                   const Binding &binding,
                                   std::span<const Observable> observables) {
    return forward(circuit, circuit.resolve(binding), observables);
}

/// Baseline forward pass that re-evolves the circuit once per observable.
/// Same values as forward(); kept for benchmarking the single-evolution
/// structure.
inline std::vector<double>
forward_per_observable(const Circuit &circuit, const ResolvedBinding &values,
                       std::span<const Observable> observables) {
    std::vector<double> out;
    out.reserve(observables.size());
    for (const auto &obs : observables) {
        out.push_back(expectation(obs, evolve(circuit, values)));
    }
    return out;
}

/// Z on each of the first `count` qubits.
inline std::vector<Observable> single_qubit_z(std::size_t count,
                                              std::size_t num_qubits) {
    std::vector<Observable> out;
    out.reserve(count);
    for (std::size_t q = 0; q < count; ++q) {
        out.push_back(Observable::pauli_z(q % num_qubits, num_qubits));
    }
    return out;
}

} // namespace vqc
