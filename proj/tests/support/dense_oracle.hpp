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
 * @file dense_oracle.hpp
 * Reference simulator built from explicit 2^n x 2^n matrices. Single-qubit
 * operators are lifted with Kronecker products (qubit 0 is the rightmost
 * factor); CNOT is built by enumerating basis states.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <vqc/vqc.hpp>

namespace vqc::test {

using C = std::complex<double>;

struct Dense {
    std::size_t dim = 0;
    std::vector<C> a;

    explicit Dense(std::size_t d) : dim(d), a(d * d) {}
    C &operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    C operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    static Dense identity(std::size_t d) {
        Dense m(d);
        for (std::size_t i = 0; i < d; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }
};

inline Dense two_by_two(C a, C b, C c, C d) {
    Dense m(2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

inline Dense kron(const Dense &x, const Dense &y) {
    Dense m(x.dim * y.dim);
    for (std::size_t i = 0; i < x.dim; ++i) {
        for (std::size_t j = 0; j < x.dim; ++j) {
            for (std::size_t k = 0; k < y.dim; ++k) {
                for (std::size_t l = 0; l < y.dim; ++l) {
                    m(i * y.dim + k, j * y.dim + l) = x(i, j) * y(k, l);
                }
            }
        }
    }
    return m;
}

inline Dense matmul(const Dense &x, const Dense &y) {
    Dense m(x.dim);
    for (std::size_t i = 0; i < x.dim; ++i) {
        for (std::size_t k = 0; k < x.dim; ++k) {
            for (std::size_t j = 0; j < x.dim; ++j) {
                m(i, j) += x(i, k) * y(k, j);
            }
        }
    }
    return m;
}

inline std::vector<C> matvec(const Dense &m, const std::vector<C> &v) {
    std::vector<C> out(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t j = 0; j < m.dim; ++j) {
            out[i] += m(i, j) * v[j];
        }
    }
    return out;
}

inline Dense pauli_2x2(char p) {
    const C i(0.0, 1.0);
    switch (p) {
    case 'X':
        return two_by_two(0, 1, 1, 0);
    case 'Y':
        return two_by_two(0, -i, i, 0);
    case 'Z':
        return two_by_two(1, 0, 0, -1);
    default:
        return two_by_two(1, 0, 0, 1);
    }
}

/// exp(-i angle P / 2) = cos(angle/2) I - i sin(angle/2) P.
inline Dense rotation_2x2(GateKind kind, double angle) {
    const char p = kind == GateKind::RX ? 'X' : kind == GateKind::RY ? 'Y' : 'Z';
    const Dense pm = pauli_2x2(p);
    Dense m(2);
    const C c = std::cos(angle / 2);
    const C s = C(0.0, -1.0) * std::sin(angle / 2);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t k = 0; k < 2; ++k) {
            m(r, k) = (r == k ? c : C(0.0)) + s * pm(r, k);
        }
    }
    return m;
}

/// Lifts a 2x2 operator on `qubit` to n qubits.
inline Dense lift(const Dense &op, std::size_t qubit, std::size_t n) {
    Dense m = Dense::identity(1);
    for (std::size_t q = n; q-- > 0;) {
        m = kron(m, q == qubit ? op : Dense::identity(2));
    }
    return m;
}

inline Dense cnot_matrix(std::size_t control, std::size_t target,
                         std::size_t n) {
    const std::size_t d = std::size_t{1} << n;
    Dense m(d);
    for (std::size_t j = 0; j < d; ++j) {
        const bool on = (j >> control) & 1U;
        m(on ? j ^ (std::size_t{1} << target) : j, j) = 1.0;
    }
    return m;
}

inline Dense gate_matrix(GateKind kind, const std::vector<std::size_t> &qubits,
                         double angle, std::size_t n) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (kind) {
    case GateKind::CNOT:
        return cnot_matrix(qubits[0], qubits[1], n);
    case GateKind::H:
        return lift(two_by_two(r, r, r, -r), qubits[0], n);
    case GateKind::X:
        return lift(pauli_2x2('X'), qubits[0], n);
    default:
        return lift(rotation_2x2(kind, angle), qubits[0], n);
    }
}

/// Letter q of `letters` acts on qubit q.
inline Dense pauli_string_matrix(const std::string &letters) {
    Dense m = Dense::identity(1);
    for (std::size_t q = letters.size(); q-- > 0;) {
        m = kron(m, pauli_2x2(letters[q]));
    }
    return m;
}

inline Dense observable_matrix(const Observable &obs) {
    const std::size_t d = std::size_t{1} << obs.num_qubits();
    Dense m(d);
    for (const auto &t : obs.terms()) {
        const auto p = pauli_string_matrix(t.pauli.str());
        for (std::size_t i = 0; i < d * d; ++i) {
            m.a[i] += t.coefficient * p.a[i];
        }
    }
    return m;
}

/// Circuit unitary as an ordered product of gate matrices.
inline Dense circuit_unitary(const Circuit &circuit, const Binding &binding) {
    const std::size_t n = circuit.num_qubits();
    Dense u = Dense::identity(std::size_t{1} << n);
    for (const auto &g : circuit.gates()) {
        const double angle = g.expr ? evaluate_expression(*g.expr, binding) : 0.0;
        u = matmul(gate_matrix(g.kind, g.qubits, angle, n), u);
    }
    return u;
}

inline std::vector<double> dense_expectations(
    const Circuit &circuit, const Binding &binding,
    const std::vector<Observable> &observables) {
    std::vector<C> psi(std::size_t{1} << circuit.num_qubits());
    psi[0] = 1.0;
    psi = matvec(circuit_unitary(circuit, binding), psi);
    std::vector<double> out;
    for (const auto &o : observables) {
        const auto opsi = matvec(observable_matrix(o), psi);
        C acc = 0.0;
        for (std::size_t j = 0; j < psi.size(); ++j) {
            acc += std::conj(psi[j]) * opsi[j];
        }
        out.push_back(acc.real());
    }
    return out;
}

inline std::vector<C> random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<C> v(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &x : v) {
        x = C(g(rng), g(rng));
        norm += std::norm(x);
    }
    for (auto &x : v) {
        x /= std::sqrt(norm);
    }
    return v;
}

inline double max_abs_diff(std::span<const C> a, std::span<const C> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/// Random binding for a re-uploading ansatz: data in [-1, 1], scalings in
/// [0.5, 1.5], rotations in [0, 2pi).
inline Binding random_binding(const Circuit &circuit, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> data(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    Binding b;
    for (const auto &s : circuit.parameter_sets()) {
        std::vector<double> v(s.size);
        for (auto &x : v) {
            x = s.role == ParameterRole::Encoding ? data(rng)
                : s.name == "lambda"              ? scale(rng)
                                                  : angle(rng);
        }
        b[s.name] = std::move(v);
    }
    return b;
}

/// Central finite difference of every expectation with respect to every
/// entry of `set`, using the state-vector forward pass; result is (M x size).
inline Matrix fd_gradient(const Circuit &circuit, const Binding &binding,
                          const std::vector<Observable> &observables,
                          const std::string &set, double h = 1e-4) {
    const std::size_t size = binding.at(set).size();
    Matrix out(observables.size(), size);
    for (std::size_t p = 0; p < size; ++p) {
        Binding plus = binding;
        Binding minus = binding;
        plus[set][p] += h;
        minus[set][p] -= h;
        const auto ep = forward(circuit, plus, observables);
        const auto em = forward(circuit, minus, observables);
        for (std::size_t i = 0; i < observables.size(); ++i) {
            out(i, p) = (ep[i] - em[i]) / (2 * h);
        }
    }
    return out;
}

/// Random circuit over sets "x" (encoding, 3) and "w" (trainable, 6) with
/// fixed gates, single-factor rotations and scaled two-factor products.
inline Circuit random_circuit(std::size_t n, std::size_t gates,
                              std::mt19937_64 &rng) {
    CircuitBuilder b(n);
    b.add_set("x", 3, ParameterRole::Encoding).add_set("w", 6);
    std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (std::size_t g = 0; g < gates; ++g) {
        const auto q = qubit(rng);
        const auto kind = rng() % 6;
        if (kind == 0 && n > 1) {
            auto t = qubit(rng);
            while (t == q) {
                t = qubit(rng);
            }
            b.cnot(q, t);
        } else if (kind == 1) {
            b.add_gate(GateKind::H, {q});
        } else if (kind == 2) {
            b.add_gate(GateKind::X, {q});
        } else {
            const GateKind rot = kind == 3   ? GateKind::RX
                                 : kind == 4 ? GateKind::RY
                                             : GateKind::RZ;
            if (rng() % 2 == 0) {
                b.rotation(rot, q, {{"w", rng() % 6}});
            } else {
                b.rotation(rot, q, {{"w", rng() % 6}, {"x", rng() % 3}},
                           coeff(rng));
            }
        }
    }
    return b.build();
}

inline Binding random_values(const Circuit &circuit, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Binding b;
    for (const auto &s : circuit.parameter_sets()) {
        std::vector<double> v(s.size);
        for (auto &x : v) {
            x = u(rng);
        }
        b[s.name] = std::move(v);
    }
    return b;
}

} // namespace vqc::test
