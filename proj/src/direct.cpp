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

#include "qcut/direct.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "qcut/errors.hpp"

namespace qcut {

namespace {

std::size_t pow_size(std::size_t base, int exp) {
    std::size_t v = 1;
    for (int k = 0; k < exp; ++k) {
        v *= base;
    }
    return v;
}

/// Weight of eigenstate condition e in Pauli condition p.
double axis_weight(Pauli p, Eigenstate e, IdentityRule rule) {
    switch (p) {
        case Pauli::I:
            if (rule == IdentityRule::AverageBases) {
                return 1.0 / 3.0;
            }
            return (e == Eigenstate::ZPlus || e == Eigenstate::ZMinus) ? 1.0 : 0.0;
        case Pauli::X:
            return e == Eigenstate::XPlus ? 1.0 : (e == Eigenstate::XMinus ? -1.0 : 0.0);
        case Pauli::Y:
            return e == Eigenstate::YPlus ? 1.0 : (e == Eigenstate::YMinus ? -1.0 : 0.0);
        case Pauli::Z:
            return e == Eigenstate::ZPlus ? 1.0 : (e == Eigenstate::ZMinus ? -1.0 : 0.0);
    }
    return 0.0;
}

}  // namespace

std::string to_string(Eigenstate e) {
    switch (e) {
        case Eigenstate::XPlus: return "X+";
        case Eigenstate::XMinus: return "X-";
        case Eigenstate::YPlus: return "Y+";
        case Eigenstate::YMinus: return "Y-";
        case Eigenstate::ZPlus: return "Z+";
        case Eigenstate::ZMinus: return "Z-";
    }
    return "?";
}

Eigenstate eigenstate_of(Prep p) {
    switch (p) {
        case Prep::ZPlus: return Eigenstate::ZPlus;
        case Prep::ZMinus: return Eigenstate::ZMinus;
        case Prep::XPlus: return Eigenstate::XPlus;
        case Prep::YPlus: return Eigenstate::YPlus;
    }
    throw std::invalid_argument("unknown preparation label");
}

Eigenstate eigenstate_of(Basis b, bool minus) {
    switch (b) {
        case Basis::X: return minus ? Eigenstate::XMinus : Eigenstate::XPlus;
        case Basis::Y: return minus ? Eigenstate::YMinus : Eigenstate::YPlus;
        case Basis::Z: return minus ? Eigenstate::ZMinus : Eigenstate::ZPlus;
    }
    throw std::invalid_argument("unknown basis label");
}

std::size_t ConditionalTable::condition_index(std::span<const Eigenstate> conditions) {
    std::size_t c = 0;
    for (Eigenstate e : conditions) {
        c = 6 * c + static_cast<std::size_t>(e);
    }
    return c;
}

std::vector<Eigenstate> ConditionalTable::conditions_of(std::size_t index) const {
    std::vector<Eigenstate> out(axes.size());
    for (int k = num_axes() - 1; k >= 0; --k, index /= 6) {
        out[k] = static_cast<Eigenstate>(index % 6);
    }
    return out;
}

double ConditionalTable::mass(std::span<const Eigenstate> conditions) const {
    return values.row(static_cast<Eigen::Index>(condition_index(conditions))).sum();
}

ConditionalTable tabulate_conditions(const Fragment& fragment, const FragmentFrequencies& data,
                                     std::vector<CutAxis> axes, int fragment_id) {
    const int qi = fragment.num_quantum_inputs();
    const int qo = fragment.num_quantum_outputs();
    const int co = fragment.classical_output_count();
    if (axes.empty()) {
        axes = standalone_axes(fragment);
    }
    if (static_cast<int>(axes.size()) != qi + qo) {
        throw std::invalid_argument("tabulate_conditions: axis list does not match fragment");
    }
    ConditionalTable table;
    table.fragment = fragment_id;
    table.axes = std::move(axes);
    table.num_preparation_axes = qi;
    table.num_classical_bits = co;
    const std::size_t rows = pow_size(6, qi + qo);
    const std::size_t cols = std::size_t{1} << co;
    table.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    table.populated.assign(rows, false);

    std::vector<Eigenstate> conditions(qi + qo);
    for (const VariantKey& key : enumerate_variants(fragment)) {
        auto it = data.find(key);
        if (it == data.end()) {
            throw IncompleteDataError("tabulate_conditions: missing variant " + to_string(key));
        }
        const std::vector<double>& freq = it->second;
        if (freq.size() != (std::size_t{1} << (qo + co))) {
            throw IncompleteDataError("tabulate_conditions: variant " + to_string(key) +
                                      " has the wrong outcome count");
        }
        for (int k = 0; k < qi; ++k) {
            conditions[k] = eigenstate_of(key.preparations[k]);
        }
        for (std::uint64_t r = 0; r < (std::uint64_t{1} << qo); ++r) {
            for (int k = 0; k < qo; ++k) {
                conditions[qi + k] = eigenstate_of(key.bases[k], (r >> k) & 1U);
            }
            const auto row = static_cast<Eigen::Index>(ConditionalTable::condition_index(conditions));
            table.populated[row] = true;
            for (Bitstring s = 0; s < cols; ++s) {
                table.values(row, static_cast<Eigen::Index>(s)) += freq[outcome_index(r, s, qo)];
            }
        }
    }
    return table;
}

ConditionalTable tabulate_conditions(const Fragment& fragment, const FragmentCounts& counts,
                                     std::vector<CutAxis> axes, int fragment_id) {
    return tabulate_conditions(fragment, frequencies_from_counts(counts), std::move(axes), fragment_id);
}

ConditionalTable complete_preparation_conditions(ConditionalTable table) {
    const int k_axes = table.num_axes();
    const std::size_t rows = table.populated.size();
    for (int axis = 0; axis < table.num_preparation_axes; ++axis) {
        const std::size_t stride = pow_size(6, k_axes - 1 - axis);
        auto with_label = [&](std::size_t row, Eigenstate from, Eigenstate to) {
            return row + (static_cast<std::size_t>(to) - static_cast<std::size_t>(from)) * stride;
        };
        for (std::size_t row = 0; row < rows; ++row) {
            const auto label = static_cast<Eigenstate>((row / stride) % 6);
            Eigenstate plus;
            if (label == Eigenstate::XMinus) {
                plus = Eigenstate::XPlus;
            } else if (label == Eigenstate::YMinus) {
                plus = Eigenstate::YPlus;
            } else {
                continue;
            }
            const std::size_t zp = with_label(row, label, Eigenstate::ZPlus);
            const std::size_t zm = with_label(row, label, Eigenstate::ZMinus);
            const std::size_t mp = with_label(row, label, plus);
            const auto r = static_cast<Eigen::Index>(row);
            table.values.row(r) = table.values.row(static_cast<Eigen::Index>(zp)) +
                                  table.values.row(static_cast<Eigen::Index>(zm)) -
                                  table.values.row(static_cast<Eigen::Index>(mp));
            table.populated[row] = table.populated[zp] && table.populated[zm] && table.populated[mp];
        }
    }
    return table;
}

FragmentTensor pauli_tensor(const ConditionalTable& table, IdentityRule rule) {
    const int k_axes = table.num_axes();
    for (std::size_t row = 0; row < table.populated.size(); ++row) {
        if (!table.populated[row]) {
            std::string label;
            for (Eigenstate e : table.conditions_of(row)) {
                label += (label.empty() ? "" : "|") + to_string(e);
            }
            throw IncompleteDataError("pauli_tensor: condition " + label + " is not populated");
        }
    }
    const std::size_t num_pauli = pow_size(4, k_axes);
    const std::size_t num_eigen = pow_size(6, k_axes);
    Eigen::MatrixXd transfer(static_cast<Eigen::Index>(num_pauli), static_cast<Eigen::Index>(num_eigen));
    for (std::size_t p = 0; p < num_pauli; ++p) {
        for (std::size_t e = 0; e < num_eigen; ++e) {
            double w = 1.0;
            std::size_t pr = p;
            std::size_t er = e;
            for (int k = 0; k < k_axes && w != 0.0; ++k, pr /= 4, er /= 6) {
                w *= axis_weight(static_cast<Pauli>(pr % 4), static_cast<Eigenstate>(er % 6), rule);
            }
            transfer(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(e)) = w;
        }
    }
    const Eigen::MatrixXd pauli_by_s = transfer * table.values;

    FragmentTensor tensor;
    tensor.fragment = table.fragment;
    tensor.axes = table.axes;
    tensor.num_classical_bits = table.num_classical_bits;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index s = 0; s < table.values.cols(); ++s) {
        if ((table.values.col(s).array() != 0.0).any()) {
            kept.push_back(s);
            tensor.bitstrings.push_back(static_cast<Bitstring>(s));
        }
    }
    tensor.values.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(num_pauli));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        tensor.values.row(static_cast<Eigen::Index>(i)) = pauli_by_s.col(kept[i]).transpose();
    }
    return tensor;
}

FragmentTensor direct_fragment_tensor(const FragmentGraph& graph, int fragment, const FragmentFrequencies& data,
                                      IdentityRule rule) {
    const Fragment& frag = graph.fragments.at(fragment);
    return pauli_tensor(
        complete_preparation_conditions(tabulate_conditions(frag, data, graph.cut_axes(fragment), fragment)),
        rule);
}

std::string conditional_table_to_json(const ConditionalTable& table) {
    nlohmann::json out = nlohmann::json::object();
    for (std::size_t row = 0; row < table.populated.size(); ++row) {
        if (!table.populated[row]) {
            continue;
        }
        std::string label;
        for (Eigenstate e : table.conditions_of(row)) {
            label += (label.empty() ? "" : "|") + to_string(e);
        }
        nlohmann::json dist = nlohmann::json::object();
        for (Eigen::Index s = 0; s < table.values.cols(); ++s) {
            const double v = table.values(static_cast<Eigen::Index>(row), s);
            if (v != 0.0) {
                dist[bitstring_to_string(static_cast<Bitstring>(s), table.num_classical_bits)] = v;
            }
        }
        out[label] = std::move(dist);
    }
    return out.dump();
}

}  // namespace qcut
