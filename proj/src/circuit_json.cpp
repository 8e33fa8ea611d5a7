// Copyright 2026 The qcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include "json.hpp"
#include "qcut/circuit.hpp"
#include "qcut/errors.hpp"

namespace qcut {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) {
        throw ParseError(where + ": expected object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing key \"" + key + "\"");
    }
    return *it;
}

int require_int(const json& value, const std::string& where) {
    if (!value.is_number_integer()) {
        throw ParseError(where + ": expected integer");
    }
    return value.get<int>();
}

double require_number(const json& value, const std::string& where) {
    if (!value.is_number()) {
        throw ParseError(where + ": expected number");
    }
    return value.get<double>();
}

const json& require_array(const json& value, const std::string& where) {
    if (!value.is_array()) {
        throw ParseError(where + ": expected array");
    }
    return value;
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

json gate_to_json(const Gate& gate) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < gate.matrix.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < gate.matrix.cols(); ++j) {
            row.push_back(json::array({gate.matrix(i, j).real(), gate.matrix(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return json{{"targets", gate.targets}, {"matrix", std::move(rows)}};
}

}  // namespace

std::string circuit_to_json(const Circuit& circuit) {
    json gates = json::array();
    for (const Gate& g : circuit.gates) {
        gates.push_back(gate_to_json(g));
    }
    return json{{"num_qubits", circuit.num_qubits}, {"gates", std::move(gates)}}.dump();
}

Circuit circuit_from_json(const std::string& text) {
    const json doc = parse_document(text);
    Circuit c;
    c.num_qubits = require_int(require(doc, "num_qubits", "$"), "$.num_qubits");
    const json& gates = require_array(require(doc, "gates", "$"), "$.gates");
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const std::string where = "$.gates[" + std::to_string(g) + "]";
        Gate gate;
        const json& targets = require_array(require(gates[g], "targets", where), where + ".targets");
        for (std::size_t t = 0; t < targets.size(); ++t) {
            gate.targets.push_back(require_int(targets[t], where + ".targets[" + std::to_string(t) + "]"));
        }
        const json& rows = require_array(require(gates[g], "matrix", where), where + ".matrix");
        const auto dim = static_cast<Eigen::Index>(rows.size());
        gate.matrix.resize(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const std::string rw = where + ".matrix[" + std::to_string(i) + "]";
            const json& row = require_array(rows[i], rw);
            if (static_cast<Eigen::Index>(row.size()) != dim) {
                throw ParseError(rw + ": matrix is not square");
            }
            for (Eigen::Index j = 0; j < dim; ++j) {
                const std::string ew = rw + "[" + std::to_string(j) + "]";
                const json& entry = require_array(row[j], ew);
                if (entry.size() != 2) {
                    throw ParseError(ew + ": expected [re, im]");
                }
                gate.matrix(i, j) = Complex(require_number(entry[0], ew), require_number(entry[1], ew));
            }
        }
        c.gates.push_back(std::move(gate));
    }
    c.validate();
    return c;
}

std::string cuts_to_json(std::span<const CutPoint> cuts) {
    json arr = json::array();
    for (const CutPoint& c : cuts) {
        arr.push_back(json{{"wire", c.wire}, {"position", c.position}});
    }
    return arr.dump();
}

std::vector<CutPoint> cuts_from_json(const std::string& text) {
    const json doc = require_array(parse_document(text), "$");
    std::vector<CutPoint> cuts;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string where = "$[" + std::to_string(i) + "]";
        cuts.push_back(CutPoint{require_int(require(doc[i], "wire", where), where + ".wire"),
                                require_int(require(doc[i], "position", where), where + ".position")});
    }
    return cuts;
}

}  // namespace qcut
