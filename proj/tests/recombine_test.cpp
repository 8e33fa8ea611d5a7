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
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qcut/direct.hpp"
#include "qcut/errors.hpp"
#include "qcut/fragsim.hpp"
#include "qcut/mlft.hpp"

namespace qcut {
namespace {

std::vector<FragmentTensor> exact_direct_tensors(const FragmentGraph& graph) {
    std::vector<FragmentTensor> out;
    for (int f = 0; f < static_cast<int>(graph.fragments.size()); ++f) {
        out.push_back(direct_fragment_tensor(graph, f, exact_frequencies(graph.fragments[f])));
    }
    return out;
}

std::vector<FragmentTensor> exact_mlft_tensors(const FragmentGraph& graph) {
    std::vector<FragmentTensor> out;
    for (int f = 0; f < static_cast<int>(graph.fragments.size()); ++f) {
        out.push_back(mlft_fragment_tensor(graph, f, exact_frequencies(graph.fragments[f])));
    }
    return out;
}

FragmentGraph ghz_graph() {
    const std::vector<CutPoint> cuts{{1, 1}};
    return cut_circuit(ghz_circuit(), cuts);
}

double raw_total_variation(const RawReconstruction& raw, const Distribution& exact) {
    double tv = 0.0;
    for (const auto& [b, v] : raw.values) {
        tv += std::abs(v - exact.at(b));
    }
    for (const auto& [b, v] : exact.values) {
        if (!raw.values.contains(b)) {
            tv += std::abs(v);
        }
    }
    return tv / 2;
}

TEST(Contract, GhzExactTensorsReproduceGhzDistribution) {
    const FragmentGraph graph = ghz_graph();
    ASSERT_EQ(graph.num_stitches(), 1);
    for (const auto& tensors : {exact_direct_tensors(graph), exact_mlft_tensors(graph)}) {
        const RawReconstruction raw = contract(tensors, graph);
        EXPECT_EQ(raw.num_bits, 3);
        for (Bitstring b = 0; b < 8; ++b) {
            auto it = raw.values.find(b);
            const double v = it == raw.values.end() ? 0.0 : it->second;
            const double expected = (b == 0 || b == 7) ? 0.5 : 0.0;
            EXPECT_NEAR(v, expected, 1e-12) << bitstring_to_string(b, 3);
        }
    }
}

TEST(Contract, GhzTensorEntriesMatchHandComputation) {
    // Upstream fragment: qubit 0 classical, qubit 1 cut. Each Pauli
    // expectation conditioned on s is 1/2 (s=0) or +-1/2 (s=1).
    const FragmentGraph graph = ghz_graph();
    const auto tensors = exact_direct_tensors(graph);
    const FragmentTensor& up = tensors[0];
    ASSERT_EQ(up.num_axes(), 1);
    const Pauli i[] = {Pauli::I};
    const Pauli z[] = {Pauli::Z};
    const Pauli x[] = {Pauli::X};
    EXPECT_NEAR(up.at(i, 0), 0.5, 1e-12);
    EXPECT_NEAR(up.at(i, 1), 0.5, 1e-12);
    EXPECT_NEAR(up.at(z, 0), 0.5, 1e-12);
    EXPECT_NEAR(up.at(z, 1), -0.5, 1e-12);
    EXPECT_NEAR(up.at(x, 0), 0.0, 1e-12);
}

TEST(Contract, SingleFragmentPassesThroughItsDistribution) {
    Rng rng(7);
    Circuit circuit;
    circuit.num_qubits = 2;
    circuit.gates.push_back(Gate{haar_random_unitary(4, rng), {0, 1}});
    Fragment fragment;
    fragment.subcircuit = circuit;
    fragment.wires = {{0, 0}, {1, 0}};
    fragment.classical_output_wires = {0, 1};
    FragmentGraph graph;
    graph.num_qubits = 2;
    graph.fragments = {fragment};
    graph.output_order = {{0, 1}};

    const FragmentTensor tensor = direct_fragment_tensor(graph, 0, exact_frequencies(fragment));
    const RawReconstruction raw = contract(std::span(&tensor, 1), graph);
    const Distribution exact = exact_full_distribution(circuit);
    EXPECT_LT(raw_total_variation(raw, exact), 1e-12);
}

class ClusteredExact : public ::testing::TestWithParam<int> {};

TEST_P(ClusteredExact, MatchesStatevectorWithinTolerance) {
    Rng rng(derive_stream_seed({11, static_cast<std::uint64_t>(GetParam())}));
    const ClusteredCircuit cc = build_clustered_ruc(9, 3, rng);
    const FragmentGraph graph = cut_circuit(cc.circuit, cc.cuts);
    const Distribution exact = exact_full_distribution(cc.circuit);
    for (const auto& tensors : {exact_direct_tensors(graph), exact_mlft_tensors(graph)}) {
        const RawReconstruction raw = contract(tensors, graph);
        EXPECT_LT(raw_total_variation(raw, exact), 1e-9);
        EXPECT_NEAR(raw.total(), 1.0, 1e-9);
        double min_value = 0.0;
        for (const auto& [b, v] : raw.values) {
            min_value = std::min(min_value, v);
        }
        EXPECT_GE(min_value, -1e-9);
    }
}

INSTANTIATE_TEST_SUITE_P(Instances, ClusteredExact, ::testing::Range(0, 3));

TEST(Contract, OrderIndependent) {
    Rng rng(3);
    const ClusteredCircuit cc = build_clustered_ruc(8, 3, rng);
    const FragmentGraph graph = cut_circuit(cc.circuit, cc.cuts);
    // Sampled data so tensors are not exactly physical.
    std::vector<FragmentTensor> tensors;
    for (int f = 0; f < 3; ++f) {
        FragmentCounts counts;
        for (const VariantKey& key : enumerate_variants(graph.fragments[f])) {
            counts.emplace(key, sample_variant(exact_variant_distribution(graph.fragments[f], key), 200, rng));
        }
        tensors.push_back(direct_fragment_tensor(graph, f, frequencies_from_counts(counts)));
    }
    const RawReconstruction reference = contract(tensors, graph);
    std::vector<int> order{0, 1, 2};
    while (std::next_permutation(order.begin(), order.end())) {
        const RawReconstruction raw = contract(tensors, graph, order);
        ASSERT_EQ(raw.values.size(), reference.values.size());
        for (const auto& [b, v] : reference.values) {
            EXPECT_NEAR(raw.values.at(b), v, 1e-10);
        }
    }
}

TEST(Contract, MultilinearInEachTensor) {
    Rng rng(5);
    const FragmentGraph graph = ghz_graph();
    auto base = exact_direct_tensors(graph);
    auto perturbed = base;
    perturbed[1].values = Eigen::MatrixXd::Random(base[1].values.rows(), base[1].values.cols());
    auto combo = base;
    const double a = 0.3;
    const double b = -1.7;
    combo[1].values = a * base[1].values + b * perturbed[1].values;

    const RawReconstruction r0 = contract(base, graph);
    const RawReconstruction r1 = contract(perturbed, graph);
    const RawReconstruction rc = contract(combo, graph);
    for (const auto& [bits, v] : rc.values) {
        EXPECT_NEAR(v, a * r0.values.at(bits) + b * r1.values.at(bits), 1e-12);
    }
}

TEST(Contract, SkipsUnobservedRows) {
    const FragmentGraph graph = ghz_graph();
    auto tensors = exact_direct_tensors(graph);
    // Keep only s = 0 upstream.
    FragmentTensor& up = tensors[0];
    ASSERT_EQ(up.bitstrings.size(), 2U);
    const auto keep = std::find(up.bitstrings.begin(), up.bitstrings.end(), Bitstring{0}) - up.bitstrings.begin();
    up.values = up.values.row(keep).eval();
    up.bitstrings = {0};
    const RawReconstruction raw = contract(tensors, graph);
    for (const auto& [b, v] : raw.values) {
        EXPECT_EQ(b & 1U, 0U);
    }
    EXPECT_NEAR(raw.values.at(0), 0.5, 1e-12);
}

TEST(Contract, RejectsMismatchedTopology) {
    const FragmentGraph graph = ghz_graph();
    auto tensors = exact_direct_tensors(graph);
    EXPECT_THROW(contract(std::span(tensors).first(1), graph), TopologyError);

    auto swapped = tensors;
    std::swap(swapped[0], swapped[1]);
    EXPECT_THROW(contract(swapped, graph), TopologyError);

    auto bad_axes = tensors;
    bad_axes[0].axes[0].side = AxisSide::Input;
    EXPECT_THROW(contract(bad_axes, graph), TopologyError);

    const std::vector<int> bad_order{0, 0};
    EXPECT_THROW(contract(tensors, graph, bad_order), TopologyError);
}

TEST(ClipAndNormalize, DropsNegativesAndRescales) {
    RawReconstruction raw;
    raw.num_bits = 3;
    raw.values = {{bitstring_from_string("000"), 0.6},
                  {bitstring_from_string("011"), -0.1},
                  {bitstring_from_string("111"), 0.5}};
    const Distribution out = clip_and_normalize(raw);
    EXPECT_EQ(out.values.size(), 2U);
    EXPECT_NEAR(out.at(bitstring_from_string("000")), 6.0 / 11.0, 1e-15);
    EXPECT_NEAR(out.at(bitstring_from_string("111")), 5.0 / 11.0, 1e-15);
    EXPECT_NEAR(negative_mass(raw), 0.1, 1e-15);
}

TEST(ClipAndNormalize, ValidDistributionUnchanged) {
    RawReconstruction raw;
    raw.num_bits = 2;
    raw.values = {{0, 0.125}, {1, 0.375}, {2, 0.25}, {3, 0.25}};
    const Distribution out = clip_and_normalize(raw);
    for (const auto& [b, v] : raw.values) {
        EXPECT_NEAR(out.at(b), v, 1e-15);
    }
    double sum = 0.0;
    for (const auto& [b, v] : out.values) {
        sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-15);
    EXPECT_EQ(negative_mass(raw), 0.0);
}

TEST(ClipAndNormalize, AllNonPositiveIsDegenerate) {
    RawReconstruction raw;
    raw.num_bits = 1;
    raw.values = {{0, -0.2}, {1, 0.0}};
    EXPECT_THROW(clip_and_normalize(raw), DegenerateReconstructionError);
    raw.values.clear();
    EXPECT_THROW(clip_and_normalize(raw), DegenerateReconstructionError);
}

TEST(RawReconstructionJson, KeysAreBitstrings) {
    RawReconstruction raw;
    raw.num_bits = 3;
    raw.values = {{bitstring_from_string("100"), 0.25}};
    EXPECT_EQ(raw_reconstruction_to_json(raw), R"({"100":0.25})");
}

}  // namespace
}  // namespace qcut
