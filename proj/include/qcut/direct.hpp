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

#ifndef QCUT_DIRECT_HPP
#define QCUT_DIRECT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcut/circuit.hpp"
#include "qcut/fragment_tensor.hpp"
#include "qcut/fragsim.hpp"

namespace qcut {

/// Eigenstate condition at one cut.
enum class Eigenstate : std::uint8_t { XPlus, XMinus, YPlus, YMinus, ZPlus, ZMinus };

inline constexpr Eigenstate kAllEigenstates[] = {Eigenstate::XPlus, Eigenstate::XMinus, Eigenstate::YPlus,
                                                 Eigenstate::YMinus, Eigenstate::ZPlus, Eigenstate::ZMinus};

std::string to_string(Eigenstate e);
Eigenstate eigenstate_of(Prep p);
Eigenstate eigenstate_of(Basis b, bool minus);

/// How the identity condition of a cut is assembled from eigenstate conditions.
enum class IdentityRule {
    /// Mean of (M+ + M-) over M in {X, Y, Z}.
    AverageBases,
    /// Z+ + Z- alone.
    ZBasisOnly,
};

/// Sub-normalized classical distributions of one fragment, one per vector of
/// eigenstate conditions on its cut axes (preparation axes first).
struct ConditionalTable {
    int fragment = 0;
    std::vector<CutAxis> axes;
    int num_preparation_axes = 0;
    int num_classical_bits = 0;
    /// Rows: condition index (base 6, axis 0 most significant); columns: s.
    Eigen::MatrixXd values;
    std::vector<bool> populated;

    int num_axes() const { return static_cast<int>(axes.size()); }
    static std::size_t condition_index(std::span<const Eigenstate> conditions);
    std::vector<Eigenstate> conditions_of(std::size_t index) const;

    double at(std::span<const Eigenstate> conditions, Bitstring s) const {
        return values(static_cast<Eigen::Index>(condition_index(conditions)), static_cast<Eigen::Index>(s));
    }
    bool is_populated(std::span<const Eigenstate> conditions) const {
        return populated[condition_index(conditions)];
    }
    /// Total mass of one condition vector.
    double mass(std::span<const Eigenstate> conditions) const;
};

/// Credits every variant's outcome frequencies to the matching condition
/// vector. Preparation axes hold only the four prepared labels afterwards.
/// Empty `axes` means standalone_axes(fragment). Throws IncompleteDataError
/// naming the first missing variant.
ConditionalTable tabulate_conditions(const Fragment& fragment, const FragmentFrequencies& data,
                                     std::vector<CutAxis> axes = {}, int fragment_id = 0);
ConditionalTable tabulate_conditions(const Fragment& fragment, const FragmentCounts& counts,
                                     std::vector<CutAxis> axes = {}, int fragment_id = 0);

/// Fills X- and Y- on every preparation axis from X- = Z+ + Z- - X+ and
/// Y- = Z+ + Z- - Y+, axis by axis. Derived entries may be negative.
ConditionalTable complete_preparation_conditions(ConditionalTable table);

/// Maps each six-valued eigenstate axis to a four-valued Pauli axis:
/// M = M+ - M- for M in {X, Y, Z} and I per `rule`.
/// Throws IncompleteDataError if any condition vector is unpopulated.
FragmentTensor pauli_tensor(const ConditionalTable& table, IdentityRule rule = IdentityRule::AverageBases);

/// tabulate -> complete -> pauli_tensor for fragment f of a graph.
FragmentTensor direct_fragment_tensor(const FragmentGraph& graph, int fragment, const FragmentFrequencies& data,
                                      IdentityRule rule = IdentityRule::AverageBases);

/// { "X+|Z-": { "bitstring": value } } for populated conditions.
std::string conditional_table_to_json(const ConditionalTable& table);

}  // namespace qcut

#endif  // QCUT_DIRECT_HPP
