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

#ifndef QCUT_DISTRIBUTION_HPP
#define QCUT_DISTRIBUTION_HPP

#include <map>
#include <string>

#include "qcut/circuit.hpp"

namespace qcut {

/// Sparse distribution over Q-bit strings. Bit q of a key is the outcome on
/// qubit q; absent keys have value zero.
struct Distribution {
    int num_bits = 0;
    std::map<Bitstring, double> values;

    double at(Bitstring b) const {
        auto it = values.find(b);
        return it == values.end() ? 0.0 : it->second;
    }
    double total() const;
};

/// "b_0 b_1 ... b_{n-1}": character k is bit k.
std::string bitstring_to_string(Bitstring b, int num_bits);
Bitstring bitstring_from_string(const std::string& text);

/// { "bitstring": probability }.
std::string distribution_to_json(const Distribution& dist);
Distribution distribution_from_json(const std::string& text);

/// Sum over the union of supports of |p_b - q_b| / 2.
double total_variation(const Distribution& p, const Distribution& q);

}  // namespace qcut

#endif  // QCUT_DISTRIBUTION_HPP
