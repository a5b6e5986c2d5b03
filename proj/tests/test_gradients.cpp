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
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include <vqc/vqc.hpp>

#include "support/dense_oracle.hpp"

using namespace vqc;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit single_rx() {
    return CircuitBuilder(1)
        .add_set("theta", 1)
        .rotation(GateKind::RX, 0, {{"theta", 0}})
        .build();
}

const std::vector<Observable> kZ{Observable::pauli_z(0, 1)};
const std::vector<std::string> kTheta{"theta"};

double max_diff(const Matrix &a, const Matrix &b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

std::vector<std::string> all_sets(const Circuit &c) {
    std::vector<std::string> out;
    for (const auto &s : c.parameter_sets()) {
        out.push_back(s.name);
    }
    return out;
}

} // namespace

TEST_CASE("adjoint examples") {
    const auto c = single_rx();
    const auto r = adjoint_gradients(c, {{"theta", {kPi / 2}}}, kZ, kTheta);
    CHECK(std::abs(r.expectations[0]) <= 1e-12);
    CHECK(std::abs(r.gradients.at("theta")(0, 0) + 1.0) <= 1e-12);

    const auto shared = CircuitBuilder(1)
                            .add_set("theta", 1)
                            .rotation(GateKind::RX, 0, {{"theta", 0}})
                            .rotation(GateKind::RX, 0, {{"theta", 0}})
                            .build();
    const Binding b{{"theta", {0.4}}};
    const auto g = adjoint_gradients(shared, b, kZ, kTheta);
    CHECK(std::abs(g.gradients.at("theta")(0, 0) + 2 * std::sin(0.8)) <=
          1e-12);
    const auto fd = test::fd_gradient(shared, b, kZ, "theta");
    CHECK(std::abs(g.gradients.at("theta")(0, 0) - fd(0, 0)) <= 1e-8);
}

TEST_CASE("adjoint on a 6-qubit depth-3 re-uploading circuit") {
    const auto c = build_reuploading_ansatz(6, 3, 6);
    std::mt19937_64 rng(41);
    const auto b = test::random_binding(c, rng);
    const auto obs = single_qubit_z(6, 6);
    const auto wrt = all_sets(c);
    const auto adj = adjoint_gradients(c, b, obs, wrt);
    const auto ps = parameter_shift_gradients(c, b, obs, wrt);
    for (const auto &name : wrt) {
        CHECK(max_diff(adj.gradients.at(name), ps.gradients.at(name)) <= 1e-9);
        CHECK(max_diff(adj.gradients.at(name),
                       test::fd_gradient(c, b, obs, name)) <= 1e-5);
    }
}

TEST_CASE("parameter-shift examples") {
    const auto c = single_rx();
    const auto r = parameter_shift_gradients(c, {{"theta", {0.3}}}, kZ, kTheta);
    CHECK(std::abs(r.gradients.at("theta")(0, 0) + std::sin(0.3)) <= 1e-12);
    CHECK(std::abs(r.gradients.at("theta")(0, 0) + 0.29552020666133955) <=
          1e-12);

    // RZ on |0> only changes the phase: no influence on <Z>.
    const auto phase = CircuitBuilder(1)
                           .add_set("x", 1, ParameterRole::Encoding)
                           .add_set("theta", 1)
                           .rotation(GateKind::RY, 0, {{"x", 0}})
                           .rotation(GateKind::RZ, 0, {{"theta", 0}})
                           .build();
    reset_counters();
    const auto p = parameter_shift_gradients(
        phase, {{"x", {0.2}}, {"theta", {1.1}}}, kZ, kTheta);
    // One base evolution plus two shifts of the only theta-bearing gate.
    CHECK(counters().forward_evolutions == 3);
    CHECK(std::abs(p.gradients.at("theta")(0, 0)) <= 1e-12);
}

TEST_CASE("SPSA examples") {
    const auto c = single_rx();
    const auto r = spsa_gradients(c, {{"theta", {kPi / 2}}}, kZ, kTheta, 0.01,
                                  1, 7);
    const double sinc = std::sin(0.01) / 0.01;
    CHECK(std::abs(r.gradients.at("theta")(0, 0) + sinc) <= 1e-12);
    CHECK(std::abs(r.gradients.at("theta")(0, 0) + 0.99998) <= 1e-5);

    // Only encoding gates influence <Z>: the estimate is exactly zero.
    const auto constant = CircuitBuilder(1)
                              .add_set("x", 1, ParameterRole::Encoding)
                              .add_set("theta", 2)
                              .rotation(GateKind::RX, 0, {{"x", 0}})
                              .rotation(GateKind::RZ, 0, {{"theta", 0}})
                              .add_gate(GateKind::H, {0})
                              .add_gate(GateKind::H, {0})
                              .rotation(GateKind::RZ, 0, {{"theta", 1}})
                              .build();
    const Binding b{{"x", {0.7}}, {"theta", {0.3, -1.2}}};
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        const auto z = spsa_gradients(constant, b, kZ, kTheta, 0.01, 3, seed);
        CHECK(std::abs(z.gradients.at("theta")(0, 0)) <= 1e-12);
        CHECK(std::abs(z.gradients.at("theta")(0, 1)) <= 1e-12);
    }
    CHECK_THROWS_AS(spsa_gradients(c, {{"theta", {0.1}}}, kZ, kTheta, 0.0),
                    ArgumentError);
    CHECK_THROWS_AS(spsa_gradients(c, {{"theta", {0.1}}}, kZ, kTheta, 0.01, 0),
                    ArgumentError);
}

TEST_CASE("SPSA is deterministic per seed and converges to the adjoint") {
    const auto c = build_reuploading_ansatz(4, 2, 4);
    std::mt19937_64 rng(42);
    const auto b = test::random_binding(c, rng);
    const auto obs = single_qubit_z(4, 4);
    const std::vector<std::string> wrt{"theta", "lambda"};
    const auto a1 = spsa_gradients(c, b, obs, wrt, 0.01, 5, 3);
    const auto a2 = spsa_gradients(c, b, obs, wrt, 0.01, 5, 3);
    const auto other = spsa_gradients(c, b, obs, wrt, 0.01, 5, 4);
    CHECK(a1.gradients.at("theta") == a2.gradients.at("theta"));
    CHECK_FALSE(a1.gradients.at("theta") == other.gradients.at("theta"));

    const auto adj = adjoint_gradients(c, b, obs, wrt);
    const auto est = spsa_gradients(c, b, obs, wrt, 0.01, 2000, 11);
    std::size_t checked = 0;
    for (const auto &name : wrt) {
        const auto &am = adj.gradients.at(name);
        const auto &em = est.gradients.at(name);
        for (std::size_t i = 0; i < am.data().size(); ++i) {
            const double a = am.data()[i];
            if (std::abs(a) > 0.1) {
                ++checked;
                CHECK(std::abs(em.data()[i] - a) <=
                      0.1 * std::max(1.0, std::abs(a)));
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("finite-difference examples") {
    const auto c = single_rx();
    const auto r =
        finite_difference_gradients(c, {{"theta", {0.3}}}, kZ, kTheta, 1e-4);
    CHECK(std::abs(r.gradients.at("theta")(0, 0) + std::sin(0.3)) <= 1e-6);

    const auto empty = CircuitBuilder(2).add_set("theta", 3).build();
    const auto z = finite_difference_gradients(
        empty, {{"theta", {0.1, 0.2, 0.3}}}, single_qubit_z(2, 2), kTheta);
    CHECK(z.gradients.at("theta") == Matrix(2, 3));
}

TEST_CASE("three-way agreement on random circuits with shared parameters") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        const auto c = test::random_circuit(n, 18, rng);
        const auto b = test::random_values(c, rng);
        std::vector<Observable> obs = single_qubit_z(1 + rng() % 3, n);
        obs.push_back(Observable({{0.5, PauliString(std::string(n, 'X'))},
                                  {-1.5, PauliString(std::string(n, 'Y'))}}));
        const std::vector<std::string> wrt{"w", "x"};
        const auto adj = adjoint_gradients(c, b, obs, wrt);
        const auto ps = parameter_shift_gradients(c, b, obs, wrt);
        const auto fd = finite_difference_gradients(c, b, obs, wrt);
        for (const auto &name : wrt) {
            REQUIRE(max_diff(adj.gradients.at(name), ps.gradients.at(name)) <=
                    1e-9);
            REQUIRE(max_diff(adj.gradients.at(name), fd.gradients.at(name)) <=
                    1e-5);
            REQUIRE(max_diff(ps.gradients.at(name), fd.gradients.at(name)) <=
                    1e-5);
        }
    }
}

TEST_CASE("every backend returns forward-pass expectations") {
    const auto c = build_reuploading_ansatz(3, 2, 3);
    std::mt19937_64 rng(44);
    const auto b = test::random_binding(c, rng);
    const auto obs = single_qubit_z(3, 3);
    const auto f = forward(c, b, obs);
    for (auto m : {GradientMethod::Adjoint, GradientMethod::ParameterShift,
                   GradientMethod::Spsa, GradientMethod::FiniteDifference}) {
        const auto r = gradients(c, b, obs, kTheta, {.method = m});
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(std::abs(r.expectations[i] - f[i]) <= 1e-12);
        }
    }
}

TEST_CASE("adjoint sweep counters") {
    const auto c = build_reuploading_ansatz(4, 3, 4);
    std::mt19937_64 rng(45);
    const auto b = test::random_binding(c, rng);
    for (std::size_t m : {1u, 3u, 8u}) {
        const auto obs = single_qubit_z(m, 4);
        reset_counters();
        adjoint_gradients(c, b, obs, kTheta);
        CHECK(counters().forward_evolutions == 1);
        CHECK(counters().reverse_ket_sweeps == 1);
        CHECK(counters().reverse_bra_sweeps == m);
    }
}

TEST_CASE("encoding-set gradients agree with finite differences") {
    const auto c = build_reuploading_ansatz(3, 2, 2);
    std::mt19937_64 rng(46);
    const auto b = test::random_binding(c, rng);
    const auto obs = single_qubit_z(3, 3);
    const std::vector<std::string> wrt{"s"};
    const auto adj = adjoint_gradients(c, b, obs, wrt);
    CHECK(max_diff(adj.gradients.at("s"), test::fd_gradient(c, b, obs, "s")) <=
          1e-5);
    CHECK(adj.gradients.size() == 1);
}

TEST_CASE("zero observables returns empty results without evolving") {
    const auto c = build_reuploading_ansatz(2, 1, 2);
    std::mt19937_64 rng(47);
    const auto b = test::random_binding(c, rng);
    for (auto m : {GradientMethod::Adjoint, GradientMethod::ParameterShift,
                   GradientMethod::Spsa, GradientMethod::FiniteDifference}) {
        reset_counters();
        const auto r = gradients(c, b, {}, kTheta, {.method = m});
        CHECK(r.expectations.empty());
        CHECK(counters().forward_evolutions == 0);
        CHECK(r.gradients.at("theta").rows() == 0);
    }
}

TEST_CASE("gradient front end validates requests") {
    const auto c = single_rx();
    CHECK_THROWS_AS(
        adjoint_gradients(c, {{"theta", {0.1}}}, kZ,
                          std::vector<std::string>{"phi"}),
        BindingError);
    CHECK_THROWS_AS(adjoint_gradients(c, {}, kZ, kTheta), BindingError);
    CHECK(parse_gradient_method("fd") == GradientMethod::FiniteDifference);
    CHECK(parse_gradient_method("param-shift") ==
          GradientMethod::ParameterShift);
    CHECK_THROWS_AS(parse_gradient_method("backprop"), ArgumentError);
}
