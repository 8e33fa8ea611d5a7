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

#include "qcut/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include "qcut/errors.hpp"

namespace qcut {

namespace {

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

struct DisjointSets {
    std::vector<int> parent;

    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

Gate gate_on(ComplexMatrix matrix, std::vector<int> targets) {
    return Gate{std::move(matrix), std::move(targets)};
}

std::vector<int> iota_range(int first, int last) {
    std::vector<int> v;
    for (int q = first; q < last; ++q) {
        v.push_back(q);
    }
    return v;
}

}  // namespace

double unitarity_error(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

void Circuit::validate() const {
    if (num_qubits < 0) {
        throw ValidationError("circuit: negative qubit count");
    }
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const Gate& gate = gates[g];
        const std::string where = "gate " + std::to_string(g) + ": ";
        if (gate.targets.empty()) {
            throw ValidationError(where + "no targets");
        }
        if (gate.targets.size() > 30) {
            throw ValidationError(where + "too many targets");
        }
        const auto dim = Eigen::Index{1} << gate.targets.size();
        if (gate.matrix.rows() != dim || gate.matrix.cols() != dim) {
            throw ValidationError(where + "matrix dimension does not match 2^(target count)");
        }
        std::set<int> seen;
        for (int t : gate.targets) {
            if (t < 0 || t >= num_qubits) {
                throw ValidationError(where + "target " + std::to_string(t) + " out of range");
            }
            if (!seen.insert(t).second) {
                throw ValidationError(where + "repeated target " + std::to_string(t));
            }
        }
        if (!gate.matrix.allFinite()) {
            throw ValidationError(where + "matrix has non-finite entries");
        }
        if (unitarity_error(gate.matrix) >= kUnitarityTolerance) {
            throw ValidationError(where + "matrix is not unitary");
        }
    }
}

ComplexMatrix haar_random_unitary(int dim, Rng& rng) {
    if (dim < 2 || !is_power_of_two(dim)) {
        throw std::invalid_argument("haar_random_unitary: dimension must be a power of two >= 2");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix ginibre(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            ginibre(i, j) = Complex(re, im) * M_SQRT1_2;
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix& r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const Complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        // A Ginibre matrix is singular with probability zero.
        q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0);
    }
    return q;
}

std::vector<int> cluster_sizes(int num_qubits, int num_fragments) {
    if (num_fragments < 1 || num_qubits < num_fragments) {
        throw std::invalid_argument("cluster_sizes: need 1 <= num_fragments <= num_qubits");
    }
    std::vector<int> sizes(num_fragments, num_qubits / num_fragments);
    for (int j = 0; j < num_qubits % num_fragments; ++j) {
        ++sizes[j];
    }
    return sizes;
}

ClusteredCircuit build_clustered_ruc(int num_qubits, int num_fragments, Rng& rng) {
    if (num_fragments < 2) {
        throw std::invalid_argument("build_clustered_ruc: need at least 2 fragments");
    }
    if (num_qubits < 2 * num_fragments) {
        throw std::invalid_argument("build_clustered_ruc: need at least 2 qubits per cluster");
    }
    if (num_qubits > 62) {
        throw std::invalid_argument("build_clustered_ruc: at most 62 qubits");
    }
    ClusteredCircuit out;
    out.cluster_sizes = cluster_sizes(num_qubits, num_fragments);
    out.circuit.num_qubits = num_qubits;

    std::vector<int> first(num_fragments + 1, 0);
    for (int j = 0; j < num_fragments; ++j) {
        first[j + 1] = first[j] + out.cluster_sizes[j];
    }

    auto haar_on = [&](std::vector<int> targets) {
        const int dim = 1 << targets.size();
        out.circuit.gates.push_back(gate_on(haar_random_unitary(dim, rng), std::move(targets)));
    };

    for (int j = 0; j < num_fragments; ++j) {
        std::vector<int> block = iota_range(j == 0 ? first[j] : first[j] + 1, first[j + 1]);
        if (j + 1 < num_fragments) {
            block.push_back(first[j + 1]);
        }
        haar_on(std::move(block));
    }
    for (int j = 0; j + 1 < num_fragments; ++j) {
        const int lower = first[j + 1];
        haar_on({first[j + 1] - 1, lower});
        out.cuts.push_back(CutPoint{lower, static_cast<int>(out.circuit.gates.size()) - 1});
    }
    for (int j = 0; j < num_fragments; ++j) {
        haar_on(iota_range(first[j], first[j + 1]));
    }
    return out;
}

std::uint64_t Fragment::variant_count() const {
    std::uint64_t v = 1;
    for (int k = 0; k < num_quantum_inputs(); ++k) {
        v *= 4;
    }
    for (int k = 0; k < num_quantum_outputs(); ++k) {
        v *= 3;
    }
    return v;
}

std::uint64_t FragmentGraph::variant_count() const {
    std::uint64_t total = 0;
    for (const Fragment& f : fragments) {
        total += f.variant_count();
    }
    return total;
}

std::vector<CutAxis> FragmentGraph::cut_axes(int fragment) const {
    const Fragment& frag = fragments.at(fragment);
    std::vector<CutAxis> axes(frag.num_cut_axes());
    for (int s = 0; s < num_stitches(); ++s) {
        const Stitch& st = stitches[s];
        if (st.downstream == fragment) {
            axes[st.input_slot] = CutAxis{s, AxisSide::Input};
        }
        if (st.upstream == fragment) {
            axes[frag.num_quantum_inputs() + st.output_slot] = CutAxis{s, AxisSide::Output};
        }
    }
    return axes;
}

std::vector<CutAxis> standalone_axes(const Fragment& fragment) {
    std::vector<CutAxis> axes;
    for (int k = 0; k < fragment.num_quantum_inputs(); ++k) {
        axes.push_back(CutAxis{k, AxisSide::Input});
    }
    for (int k = 0; k < fragment.num_quantum_outputs(); ++k) {
        axes.push_back(CutAxis{k, AxisSide::Output});
    }
    return axes;
}

FragmentGraph cut_circuit(const Circuit& circuit, std::span<const CutPoint> cuts) {
    circuit.validate();
    if (cuts.empty()) {
        throw CutSetError("cut_circuit: empty cut list does not disconnect the circuit");
    }
    const int num_gates = static_cast<int>(circuit.gates.size());
    const int num_wires = circuit.num_qubits;

    std::vector<std::vector<int>> cut_positions(num_wires);
    std::set<CutPoint> unique_cuts;
    for (const CutPoint& c : cuts) {
        if (c.wire < 0 || c.wire >= num_wires) {
            throw std::invalid_argument("cut_circuit: cut wire out of range");
        }
        if (c.position < 0 || c.position >= num_gates) {
            throw std::invalid_argument("cut_circuit: cut position out of range");
        }
        const auto& t = circuit.gates[c.position].targets;
        if (std::find(t.begin(), t.end(), c.wire) == t.end()) {
            throw std::invalid_argument("cut_circuit: cut position " + std::to_string(c.position) +
                                        " is not a gate on wire " + std::to_string(c.wire));
        }
        if (!unique_cuts.insert(c).second) {
            throw std::invalid_argument("cut_circuit: wire " + std::to_string(c.wire) +
                                        " cut twice at position " + std::to_string(c.position));
        }
        cut_positions[c.wire].push_back(c.position);
    }
    for (auto& p : cut_positions) {
        std::sort(p.begin(), p.end());
    }

    std::vector<int> seg_offset(num_wires + 1, 0);
    for (int w = 0; w < num_wires; ++w) {
        seg_offset[w + 1] = seg_offset[w] + static_cast<int>(cut_positions[w].size()) + 1;
    }
    const int num_segments = seg_offset[num_wires];
    auto segment_id = [&](int wire, int seg) { return seg_offset[wire] + seg; };
    // The gate at a cut's position precedes that cut.
    auto segment_of_gate = [&](int wire, int gate) {
        const auto& p = cut_positions[wire];
        return static_cast<int>(std::lower_bound(p.begin(), p.end(), gate) - p.begin());
    };
    std::vector<WireSegment> segment_info(num_segments);
    for (int w = 0; w < num_wires; ++w) {
        for (int k = 0; k <= static_cast<int>(cut_positions[w].size()); ++k) {
            segment_info[segment_id(w, k)] = WireSegment{w, k};
        }
    }

    DisjointSets sets(num_segments);
    std::vector<int> gate_segment(num_gates);
    std::vector<int> first_gate(num_segments, -1);
    for (int g = 0; g < num_gates; ++g) {
        const auto& targets = circuit.gates[g].targets;
        const int s0 = segment_id(targets[0], segment_of_gate(targets[0], g));
        gate_segment[g] = s0;
        for (int t : targets) {
            const int s = segment_id(t, segment_of_gate(t, g));
            if (first_gate[s] < 0) {
                first_gate[s] = g;
            }
            sets.unite(s0, s);
        }
    }

    struct CutSides {
        int upstream_segment;
        int downstream_segment;
    };
    std::vector<CutSides> sides;
    for (const CutPoint& c : cuts) {
        const auto& p = cut_positions[c.wire];
        const int k = static_cast<int>(std::lower_bound(p.begin(), p.end(), c.position) - p.begin());
        const CutSides cs{segment_id(c.wire, k), segment_id(c.wire, k + 1)};
        if (sets.find(cs.upstream_segment) == sets.find(cs.downstream_segment)) {
            throw CutSetError("cut_circuit: cut on wire " + std::to_string(c.wire) + " after gate " +
                              std::to_string(c.position) + " does not disconnect the circuit");
        }
        sides.push_back(cs);
    }

    // Components, keyed by when they start: twice the first gate index, or
    // twice the preceding cut position plus one for gate-free segments.
    std::vector<int> root_to_comp(num_segments, -1);
    std::vector<long long> comp_key;
    std::vector<int> comp_of_segment(num_segments);
    for (int s = 0; s < num_segments; ++s) {
        const int r = sets.find(s);
        if (root_to_comp[r] < 0) {
            root_to_comp[r] = static_cast<int>(comp_key.size());
            comp_key.push_back(std::numeric_limits<long long>::max());
        }
        const int c = root_to_comp[r];
        comp_of_segment[s] = c;
        long long key;
        if (first_gate[s] >= 0) {
            key = 2LL * first_gate[s];
        } else if (segment_info[s].segment > 0) {
            key = 2LL * cut_positions[segment_info[s].wire][segment_info[s].segment - 1] + 1;
        } else {
            key = -1;
        }
        comp_key[c] = std::min(comp_key[c], key);
    }
    const int num_comps = static_cast<int>(comp_key.size());

    std::vector<std::vector<int>> successors(num_comps);
    std::vector<int> indegree(num_comps, 0);
    for (const CutSides& cs : sides) {
        const int a = comp_of_segment[cs.upstream_segment];
        const int b = comp_of_segment[cs.downstream_segment];
        successors[a].push_back(b);
        ++indegree[b];
    }
    using Entry = std::pair<long long, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    for (int c = 0; c < num_comps; ++c) {
        if (indegree[c] == 0) {
            ready.emplace(comp_key[c], c);
        }
    }
    std::vector<int> comp_to_frag(num_comps, -1);
    std::vector<int> order;
    while (!ready.empty()) {
        const int c = ready.top().second;
        ready.pop();
        comp_to_frag[c] = static_cast<int>(order.size());
        order.push_back(c);
        for (int b : successors[c]) {
            if (--indegree[b] == 0) {
                ready.emplace(comp_key[b], b);
            }
        }
    }
    if (static_cast<int>(order.size()) != num_comps) {
        throw CutSetError("cut_circuit: fragments form a cycle and cannot be ordered in time");
    }

    FragmentGraph graph;
    graph.num_qubits = num_wires;
    graph.fragments.resize(num_comps);
    graph.output_order.resize(num_comps);
    std::vector<int> local_of_segment(num_segments, -1);
    for (int s = 0; s < num_segments; ++s) {
        const int f = comp_to_frag[comp_of_segment[s]];
        Fragment& frag = graph.fragments[f];
        const WireSegment ws = segment_info[s];
        const int local = static_cast<int>(frag.wires.size());
        local_of_segment[s] = local;
        frag.wires.push_back(ws);
        const int last_segment = static_cast<int>(cut_positions[ws.wire].size());
        if (ws.segment > 0) {
            frag.quantum_inputs.push_back(local);
        }
        if (ws.segment < last_segment) {
            frag.quantum_outputs.push_back(local);
        } else {
            frag.classical_output_wires.push_back(local);
            graph.output_order[f].push_back(ws.wire);
        }
    }
    for (Fragment& frag : graph.fragments) {
        frag.subcircuit.num_qubits = static_cast<int>(frag.wires.size());
    }
    for (int g = 0; g < num_gates; ++g) {
        const Gate& gate = circuit.gates[g];
        Fragment& frag = graph.fragments[comp_to_frag[comp_of_segment[gate_segment[g]]]];
        std::vector<int> local_targets;
        for (int t : gate.targets) {
            local_targets.push_back(local_of_segment[segment_id(t, segment_of_gate(t, g))]);
        }
        frag.subcircuit.gates.push_back(Gate{gate.matrix, std::move(local_targets)});
    }

    auto slot_of = [](const std::vector<int>& slots, int local) {
        return static_cast<int>(std::find(slots.begin(), slots.end(), local) - slots.begin());
    };
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const CutSides& cs = sides[i];
        Stitch st;
        st.cut = cuts[i];
        st.upstream = comp_to_frag[comp_of_segment[cs.upstream_segment]];
        st.downstream = comp_to_frag[comp_of_segment[cs.downstream_segment]];
        st.output_slot =
            slot_of(graph.fragments[st.upstream].quantum_outputs, local_of_segment[cs.upstream_segment]);
        st.input_slot =
            slot_of(graph.fragments[st.downstream].quantum_inputs, local_of_segment[cs.downstream_segment]);
        graph.stitches.push_back(st);
    }
    return graph;
}

Circuit ghz_circuit() {
    const double h = M_SQRT1_2;
    ComplexMatrix hadamard(2, 2);
    hadamard << h, h, h, -h;
    ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
    cnot(0, 0) = 1;
    cnot(1, 1) = 1;
    cnot(2, 3) = 1;
    cnot(3, 2) = 1;
    Circuit c;
    c.num_qubits = 3;
    c.gates.push_back(Gate{hadamard, {0}});
    c.gates.push_back(Gate{cnot, {0, 1}});
    c.gates.push_back(Gate{cnot, {1, 2}});
    return c;
}

}  // namespace qcut
