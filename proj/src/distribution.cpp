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

#include "qcut/distribution.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "qcut/errors.hpp"

namespace qcut {

double Distribution::total() const {
    double t = 0.0;
    for (const auto& [b, v] : values) {
        t += v;
    }
    return t;
}

std::string bitstring_to_string(Bitstring b, int num_bits) {
    std::string s(num_bits, '0');
    for (int k = 0; k < num_bits; ++k) {
        if ((b >> k) & 1U) {
            s[k] = '1';
        }
    }
    return s;
}

Bitstring bitstring_from_string(const std::string& text) {
    if (text.size() > 64) {
        throw std::invalid_argument("bitstring longer than 64 bits");
    }
    Bitstring b = 0;
    for (std::size_t k = 0; k < text.size(); ++k) {
        if (text[k] == '1') {
            b |= Bitstring{1} << k;
        } else if (text[k] != '0') {
            throw std::invalid_argument("bitstring \"" + text + "\" contains a character other than 0/1");
        }
    }
    return b;
}

std::string distribution_to_json(const Distribution& dist) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [b, v] : dist.values) {
        obj[bitstring_to_string(b, dist.num_bits)] = v;
    }
    return obj.dump();
}

Distribution distribution_from_json(const std::string& text) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!obj.is_object()) {
        throw ParseError("$: expected object");
    }
    Distribution dist;
    bool first = true;
    for (const auto& [key, value] : obj.items()) {
        if (!value.is_number()) {
            throw ParseError("$." + key + ": expected number");
        }
        if (first) {
            dist.num_bits = static_cast<int>(key.size());
            first = false;
        } else if (static_cast<int>(key.size()) != dist.num_bits) {
            throw ParseError("$." + key + ": inconsistent bitstring length");
        }
        dist.values[bitstring_from_string(key)] = value.get<double>();
    }
    return dist;
}

double total_variation(const Distribution& p, const Distribution& q) {
    double tv = 0.0;
    for (const auto& [b, v] : p.values) {
        tv += std::abs(v - q.at(b));
    }
    for (const auto& [b, v] : q.values) {
        if (!p.values.contains(b)) {
            tv += std::abs(v);
        }
    }
    return 0.5 * tv;
}

}  // namespace qcut
