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

#include "qcut/recombine.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "json.hpp"
#include "qcut/errors.hpp"

namespace qcut {

const Eigen::Matrix2cd& pauli_matrix(Pauli p) {
    static const Eigen::Matrix2cd kMatrices[4] = {
        (Eigen::Matrix2cd() << 1, 0, 0, 1).finished(),
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(),
    };
    return kMatrices[static_cast<int>(p)];
}

double FragmentTensor::at(std::span<const Pauli> paulis, Bitstring s) const {
    auto it = std::find(bitstrings.begin(), bitstrings.end(), s);
    if (it == bitstrings.end()) {
        return 0.0;
    }
    return values(it - bitstrings.begin(), static_cast<Eigen::Index>(column(paulis)));
}

double RawReconstruction::total() const {
    double t = 0.0;
    for (const auto& [b, v] : values) {
        t += v;
    }
    return t;
}

namespace {

std::size_t pow4(std::size_t k) { return std::size_t{1} << (2 * k); }

/// Index bookkeeping for absorbing one fragment into the partial result.
struct AbsorbPlan {
    std::vector<int> next_open;
    // For each (old open index, new-axis index): fragment column and new open index.
    std::vector<std::size_t> fragment_column;
    std::vector<std::size_t> next_index;
    std::size_t num_old = 0;
    std::size_t num_new = 0;
    double weight = 1.0;
};

AbsorbPlan plan_absorb(const std::vector<int>& open, const std::vector<CutAxis>& axes) {
    AbsorbPlan plan;
    // Position of each fragment axis: in `open` (closing) or among new axes.
    std::vector<int> open_pos(axes.size(), -1);
    std::vector<int> new_pos(axes.size(), -1);
    std::vector<bool> closing(open.size(), false);
    int num_new = 0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        auto it = std::find(open.begin(), open.end(), axes[a].stitch);
        if (it != open.end()) {
            open_pos[a] = static_cast<int>(it - open.begin());
            closing[open_pos[a]] = true;
            plan.weight *= 0.5;
        } else {
            new_pos[a] = num_new++;
        }
    }
    std::vector<int> kept;
    for (std::size_t i = 0; i < open.size(); ++i) {
        if (!closing[i]) {
            kept.push_back(static_cast<int>(i));
            plan.next_open.push_back(open[i]);
        }
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
        if (new_pos[a] >= 0) {
            plan.next_open.push_back(axes[a].stitch);
        }
    }

    plan.num_old = pow4(open.size());
    plan.num_new = pow4(static_cast<std::size_t>(num_new));
    plan.fragment_column.resize(plan.num_old * plan.num_new);
    plan.next_index.resize(plan.num_old * plan.num_new);
    auto digit = [](std::size_t index, std::size_t pos, std::size_t width) {
        return (index >> (2 * (width - 1 - pos))) & 3U;
    };
    for (std::size_t o = 0; o < plan.num_old; ++o) {
        for (std::size_t n = 0; n < plan.num_new; ++n) {
            std::size_t col = 0;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                const std::size_t d = open_pos[a] >= 0
                                          ? digit(o, static_cast<std::size_t>(open_pos[a]), open.size())
                                          : digit(n, static_cast<std::size_t>(new_pos[a]), num_new);
                col = 4 * col + d;
            }
            std::size_t next = 0;
            for (int i : kept) {
                next = 4 * next + digit(o, static_cast<std::size_t>(i), open.size());
            }
            next = next * plan.num_new + n;
            plan.fragment_column[o * plan.num_new + n] = col;
            plan.next_index[o * plan.num_new + n] = next;
        }
    }
    return plan;
}

void check_topology(std::span<const FragmentTensor> tensors, const FragmentGraph& graph,
                    std::span<const int> order) {
    const std::size_t num_fragments = graph.fragments.size();
    if (tensors.size() != num_fragments) {
        throw TopologyError("contract: " + std::to_string(tensors.size()) + " tensors for " +
                            std::to_string(num_fragments) + " fragments");
    }
    for (std::size_t f = 0; f < num_fragments; ++f) {
        const FragmentTensor& t = tensors[f];
        if (t.fragment != static_cast<int>(f)) {
            throw TopologyError("contract: tensor " + std::to_string(f) + " is labelled fragment " +
                                std::to_string(t.fragment));
        }
        if (t.axes != graph.cut_axes(static_cast<int>(f))) {
            throw TopologyError("contract: axes of tensor " + std::to_string(f) + " do not match its stitches");
        }
        const int c_o = graph.fragments[f].classical_output_count();
        if (t.num_classical_bits != c_o ||
            graph.output_order.at(f).size() != static_cast<std::size_t>(c_o)) {
            throw TopologyError("contract: classical width mismatch for fragment " + std::to_string(f));
        }
        if (t.values.rows() != static_cast<Eigen::Index>(t.bitstrings.size()) ||
            t.values.cols() != static_cast<Eigen::Index>(pow4(t.axes.size()))) {
            throw TopologyError("contract: tensor " + std::to_string(f) + " has inconsistent shape");
        }
    }
    std::vector<int> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] != static_cast<int>(i) || sorted.size() != num_fragments) {
            throw TopologyError("contract: order is not a permutation of the fragments");
        }
    }
}

}  // namespace

RawReconstruction contract(std::span<const FragmentTensor> tensors, const FragmentGraph& graph,
                           std::span<const int> order) {
    std::vector<int> sequence(graph.fragments.size());
    if (order.empty()) {
        std::iota(sequence.begin(), sequence.end(), 0);
    } else {
        sequence.assign(order.begin(), order.end());
    }
    check_topology(tensors, graph, sequence);

    // Partial result: global bits of absorbed fragments -> values over open axes.
    std::vector<int> open;
    std::map<Bitstring, std::vector<double>> partial{{Bitstring{0}, std::vector<double>{1.0}}};

    for (int f : sequence) {
        const FragmentTensor& tensor = tensors[static_cast<std::size_t>(f)];
        const std::vector<int>& wires = graph.output_order[static_cast<std::size_t>(f)];
        const AbsorbPlan plan = plan_absorb(open, tensor.axes);
        const std::size_t next_size = pow4(plan.next_open.size());

        std::vector<Bitstring> row_bits(tensor.bitstrings.size());
        for (std::size_t r = 0; r < tensor.bitstrings.size(); ++r) {
            Bitstring b = 0;
            for (std::size_t j = 0; j < wires.size(); ++j) {
                if ((tensor.bitstrings[r] >> j) & 1U) {
                    b |= Bitstring{1} << wires[j];
                }
            }
            row_bits[r] = b;
        }

        std::map<Bitstring, std::vector<double>> next;
        for (const auto& [bits, vec] : partial) {
            for (std::size_t r = 0; r < tensor.bitstrings.size(); ++r) {
                std::vector<double> out(next_size, 0.0);
                const auto row = tensor.values.row(static_cast<Eigen::Index>(r));
                for (std::size_t o = 0; o < plan.num_old; ++o) {
                    if (vec[o] == 0.0) {
                        continue;
                    }
                    const double scaled = plan.weight * vec[o];
                    for (std::size_t n = 0; n < plan.num_new; ++n) {
                        const std::size_t k = o * plan.num_new + n;
                        out[plan.next_index[k]] += scaled * row(static_cast<Eigen::Index>(plan.fragment_column[k]));
                    }
                }
                next.emplace(bits | row_bits[r], std::move(out));
            }
        }
        partial = std::move(next);
        open = plan.next_open;
    }
    if (!open.empty()) {
        throw TopologyError("contract: stitch " + std::to_string(open.front()) + " has only one end");
    }

    RawReconstruction raw;
    raw.num_bits = graph.num_qubits;
    for (const auto& [bits, vec] : partial) {
        raw.values.emplace(bits, vec[0]);
    }
    return raw;
}

Distribution clip_and_normalize(const RawReconstruction& raw) {
    double positive = 0.0;
    for (const auto& [b, v] : raw.values) {
        if (v > 0.0) {
            positive += v;
        }
    }
    if (!(positive > 0.0)) {
        throw DegenerateReconstructionError("clip_and_normalize: no positive entries");
    }
    Distribution out;
    out.num_bits = raw.num_bits;
    for (const auto& [b, v] : raw.values) {
        if (v > 0.0) {
            out.values.emplace(b, v / positive);
        }
    }
    return out;
}

double negative_mass(const RawReconstruction& raw) {
    double mass = 0.0;
    for (const auto& [b, v] : raw.values) {
        if (v < 0.0) {
            mass -= v;
        }
    }
    return mass;
}

std::string raw_reconstruction_to_json(const RawReconstruction& raw) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [b, v] : raw.values) {
        out[bitstring_to_string(b, raw.num_bits)] = v;
    }
    return out.dump();
}

}  // namespace qcut
