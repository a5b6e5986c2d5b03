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
 * @file serialization.hpp
 * JSON documents for circuits and model checkpoints.
 *
 * Circuit document:
 *
 *     {
 *       "num_qubits": 2,
 *       "parameter_sets": [{"name": "s", "size": 2, "role": "encoding"}, ...],
 *       "gates": [{"kind": "RX", "qubits": [0],
 *                  "expr": {"coeff": 1.0, "factors": ["lambda[0]", "s[0]"]}},
 *                 {"kind": "CNOT", "qubits": [0, 1]}],
 *       "observables": ["ZI", "0.5*XX + -0.5*IZ"]      (optional)
 *     }
 *
 * Checkpoint document:
 *
 *     {"sets": {"theta": [...], "lambda": [...]},
 *      "pre":  {"weights": [[...], ...], "bias": [...]},   (hybrid only)
 *      "post": {"weights": [[...], ...], "bias": [...]}}   (hybrid only)
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "circuit.hpp"
#include "error.hpp"
#include "model.hpp"
#include "observables.hpp"

namespace vqc {

struct CircuitDocument {
    Circuit circuit;
    std::vector<Observable> observables;
};

namespace detail {

inline nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        raise<IoError>("cannot open '", path.string(), "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        raise<ParseError>("'", path.string(), "': ", e.what());
    }
}

inline void write_text_file(const std::filesystem::path &path,
                            const std::string &text) {
    std::ofstream out(path);
    if (!out) {
        raise<IoError>("cannot write '", path.string(), "'");
    }
    out << text;
    if (!out) {
        raise<IoError>("write to '", path.string(), "' failed");
    }
}

inline nlohmann::json matrix_to_json(const Matrix &m) {
    auto rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json &j) {
    return Matrix::from_rows(j.get<std::vector<std::vector<double>>>());
}

} // namespace detail

inline nlohmann::json circuit_to_json(const Circuit &circuit,
                                      std::span<const Observable> observables = {}) {
    nlohmann::json doc;
    doc["num_qubits"] = circuit.num_qubits();
    auto sets = nlohmann::json::array();
    for (const auto &s : circuit.parameter_sets()) {
        sets.push_back(
            {{"name", s.name}, {"size", s.size}, {"role", to_string(s.role)}});
    }
    doc["parameter_sets"] = std::move(sets);
    auto gates = nlohmann::json::array();
    for (const auto &g : circuit.gates()) {
        nlohmann::json jg{{"kind", to_string(g.kind)}, {"qubits", g.qubits}};
        if (g.expr) {
            std::vector<std::string> factors;
            for (const auto &f : g.expr->factors) {
                factors.push_back(f.str());
            }
            jg["expr"] = {{"coeff", g.expr->coefficient},
                          {"factors", std::move(factors)}};
        }
        gates.push_back(std::move(jg));
    }
    doc["gates"] = std::move(gates);
    if (!observables.empty()) {
        auto obs = nlohmann::json::array();
        for (const auto &o : observables) {
            obs.push_back(o.str());
        }
        doc["observables"] = std::move(obs);
    }
    return doc;
}

inline CircuitDocument circuit_from_json(const nlohmann::json &doc) {
    try {
        CircuitBuilder b(doc.at("num_qubits").get<std::size_t>());
        for (const auto &s : doc.at("parameter_sets")) {
            b.add_set(s.at("name").get<std::string>(),
                      s.at("size").get<std::size_t>(),
                      parse_parameter_role(s.at("role").get<std::string>()));
        }
        for (const auto &g : doc.at("gates")) {
            std::optional<AngleExpression> expr;
            if (g.contains("expr")) {
                const auto &e = g.at("expr");
                AngleExpression ex;
                ex.coefficient = e.value("coeff", 1.0);
                for (const auto &f : e.at("factors")) {
                    ex.factors.push_back(ParamRef::parse(f.get<std::string>()));
                }
                expr = std::move(ex);
            }
            b.add_gate(parse_gate_kind(g.at("kind").get<std::string>()),
                       g.at("qubits").get<std::vector<std::size_t>>(),
                       std::move(expr));
        }
        CircuitDocument out{b.build(), {}};
        if (doc.contains("observables")) {
            for (const auto &o : doc.at("observables")) {
                out.observables.push_back(
                    parse_observable(o.get<std::string>()));
            }
        }
        return out;
    } catch (const nlohmann::json::exception &e) {
        detail::raise<ParseError>("circuit document: ", e.what());
    }
}

inline CircuitDocument load_circuit(const std::filesystem::path &path) {
    return circuit_from_json(detail::read_json_file(path));
}

inline void save_circuit(const std::filesystem::path &path,
                         const Circuit &circuit,
                         std::span<const Observable> observables = {}) {
    detail::write_text_file(path,
                            circuit_to_json(circuit, observables).dump(2));
}

inline nlohmann::json checkpoint_to_json(const QuantumModule &module) {
    nlohmann::json sets = nlohmann::json::object();
    for (const auto &s : module.sets()) {
        sets[s.name] = s.values;
    }
    return {{"sets", std::move(sets)}};
}

inline nlohmann::json checkpoint_to_json(const HybridModule &hybrid) {
    auto doc = checkpoint_to_json(hybrid.quantum());
    doc["pre"] = {{"weights", detail::matrix_to_json(hybrid.pre().weights)},
                  {"bias", hybrid.pre().bias}};
    doc["post"] = {{"weights", detail::matrix_to_json(hybrid.post().weights)},
                   {"bias", hybrid.post().bias}};
    return doc;
}

/// Overwrites every trainable set of `module` from `doc`. On error the
/// module is left unchanged.
inline void apply_checkpoint(const nlohmann::json &doc, QuantumModule &module) {
    QuantumModule staged = module;
    try {
        const auto &sets = doc.at("sets");
        for (const auto &s : module.sets()) {
            if (!sets.contains(s.name)) {
                detail::raise<ParseError>("checkpoint lacks set '", s.name,
                                          "'");
            }
        }
        for (auto it = sets.begin(); it != sets.end(); ++it) {
            staged.set_values(it.key(), it.value().get<std::vector<double>>());
        }
    } catch (const nlohmann::json::exception &e) {
        detail::raise<ParseError>("checkpoint: ", e.what());
    }
    module = std::move(staged);
}

inline void apply_checkpoint(const nlohmann::json &doc, HybridModule &hybrid) {
    HybridModule staged = hybrid;
    apply_checkpoint(doc, staged.quantum());
    try {
        auto load_layer = [](const nlohmann::json &j, DenseLayer &layer) {
            auto w = detail::matrix_from_json(j.at("weights"));
            auto bias = j.at("bias").get<std::vector<double>>();
            if (w.rows() != layer.weights.rows() ||
                w.cols() != layer.weights.cols() ||
                bias.size() != layer.bias.size()) {
                throw ShapeError("checkpoint layer shape mismatch");
            }
            layer.weights = std::move(w);
            layer.bias = std::move(bias);
        };
        load_layer(doc.at("pre"), staged.pre());
        load_layer(doc.at("post"), staged.post());
    } catch (const nlohmann::json::exception &e) {
        detail::raise<ParseError>("checkpoint: ", e.what());
    }
    hybrid = std::move(staged);
}

template <class Model>
void save_checkpoint(const std::filesystem::path &path, const Model &model) {
    detail::write_text_file(path, checkpoint_to_json(model).dump(2));
}

template <class Model>
void load_checkpoint(const std::filesystem::path &path, Model &model) {
    apply_checkpoint(detail::read_json_file(path), model);
}

} // namespace vqc
