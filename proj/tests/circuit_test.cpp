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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "qcut/errors.hpp"

namespace qcut {
namespace {

TEST(HaarRandomUnitary, IsUnitary) {
    Rng rng(1);
    for (int dim : {2, 4, 8, 16, 64}) {
        for (int rep = 0; rep < 20; ++rep) {
            EXPECT_LT(unitarity_error(haar_random_unitary(dim, rng)), 1e-12) << dim;
        }
    }
}

TEST(HaarRandomUnitary, DeterministicForSeed) {
    Rng a(42);
    Rng b(42);
    EXPECT_EQ(haar_random_unitary(4, a), haar_random_unitary(4, b));
}

TEST(HaarRandomUnitary, RejectsNonPowerOfTwo) {
    Rng rng(0);
    for (int dim : {-2, 0, 1, 3, 6, 12}) {
        EXPECT_THROW(haar_random_unitary(dim, rng), std::invalid_argument) << dim;
    }
}

struct MomentEstimate {
    double mean;
    double standard_error;
};

template <typename F>
MomentEstimate monte_carlo(int dim, int samples, std::uint64_t seed, F f) {
    Rng rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double v = f(haar_random_unitary(dim, rng));
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / samples;
    const double var = sum_sq / samples - mean * mean;
    return {mean, std::sqrt(var / samples)};
}

TEST(HaarRandomUnitary, TraceSecondMomentIsOne) {
    // Integral of |tr U|^2 over U(d) is 1 for every d.
    for (int dim : {2, 4}) {
        const auto m = monte_carlo(dim, 10000, 100 + dim, [](const ComplexMatrix& u) { return std::norm(u.trace()); });
        EXPECT_NEAR(m.mean, 1.0, 5 * m.standard_error) << dim;
    }
}

TEST(HaarRandomUnitary, EntriesHaveNoPhaseBias) {
    // E[U_00] = 0 and E[|U_00|^2] = 1/d; an uncorrected QR biases the diagonal.
    const int dim = 2;
    const auto re = monte_carlo(dim, 10000, 7, [](const ComplexMatrix& u) { return u(0, 0).real(); });
    const auto im = monte_carlo(dim, 10000, 8, [](const ComplexMatrix& u) { return u(0, 0).imag(); });
    const auto abs2 = monte_carlo(dim, 10000, 9, [](const ComplexMatrix& u) { return std::norm(u(0, 0)); });
    EXPECT_NEAR(re.mean, 0.0, 5 * re.standard_error);
    EXPECT_NEAR(im.mean, 0.0, 5 * im.standard_error);
    EXPECT_NEAR(abs2.mean, 0.5, 5 * abs2.standard_error);
}

TEST(ClusterSizes, Examples) {
    EXPECT_EQ(cluster_sizes(10, 3), (std::vector<int>{4, 3, 3}));
    EXPECT_EQ(cluster_sizes(4, 2), (std::vector<int>{2, 2}));
    EXPECT_EQ(cluster_sizes(14, 3), (std::vector<int>{5, 5, 4}));
}

TEST(ClusterSizes, EvenPartitionLargestFirst) {
    for (int q = 2; q <= 40; ++q) {
        for (int f = 1; f <= q; ++f) {
            const std::vector<int> sizes = cluster_sizes(q, f);
            ASSERT_EQ(static_cast<int>(sizes.size()), f);
            int total = 0;
            for (std::size_t j = 0; j < sizes.size(); ++j) {
                total += sizes[j];
                EXPECT_LE(sizes.front() - sizes[j], 1);
                if (j > 0) {
                    EXPECT_LE(sizes[j], sizes[j - 1]);
                }
            }
            EXPECT_EQ(total, q);
        }
    }
}

TEST(BuildClusteredRuc, TenQubitsThreeClusters) {
    Rng rng(2024);
    const ClusteredCircuit cc = build_clustered_ruc(10, 3, rng);
    EXPECT_EQ(cc.cluster_sizes, (std::vector<int>{4, 3, 3}));
    EXPECT_EQ(cc.circuit.num_qubits, 10);
    EXPECT_EQ(cc.circuit.gates.size(), 8U);
    ASSERT_EQ(cc.cuts.size(), 2U);
    int two_qubit = 0;
    for (const Gate& g : cc.circuit.gates) {
        two_qubit += g.targets.size() == 2 ? 1 : 0;
        EXPECT_LT(unitarity_error(g.matrix), 1e-12);
    }
    EXPECT_GE(two_qubit, 2);

    const FragmentGraph graph = cut_circuit(cc.circuit, cc.cuts);
    ASSERT_EQ(graph.fragments.size(), 3U);
    const int expected[3][2] = {{0, 1}, {1, 1}, {1, 0}};
    for (int f = 0; f < 3; ++f) {
        EXPECT_EQ(graph.fragments[f].num_quantum_inputs(), expected[f][0]) << f;
        EXPECT_EQ(graph.fragments[f].num_quantum_outputs(), expected[f][1]) << f;
    }
    ASSERT_EQ(graph.num_stitches(), 2);
    EXPECT_EQ(graph.stitches[0].upstream, 0);
    EXPECT_EQ(graph.stitches[0].downstream, 1);
    EXPECT_EQ(graph.stitches[1].upstream, 1);
    EXPECT_EQ(graph.stitches[1].downstream, 2);
    EXPECT_EQ(graph.variant_count(), 19U);
    EXPECT_EQ(graph.fragments[0].classical_output_count(), 4);
    EXPECT_EQ(graph.fragments[1].classical_output_count(), 3);
    EXPECT_EQ(graph.fragments[2].classical_output_count(), 3);
}

TEST(BuildClusteredRuc, SmallestInstance) {
    Rng rng(0);
    const ClusteredCircuit cc = build_clustered_ruc(4, 2, rng);
    EXPECT_EQ(cc.cluster_sizes, (std::vector<int>{2, 2}));
    EXPECT_EQ(cc.cuts.size(), 1U);
    EXPECT_EQ(cut_circuit(cc.circuit, cc.cuts).fragments.size(), 2U);
}

TEST(BuildClusteredRuc, CutsSitRightAfterAGateOnTheirWire) {
    Rng rng(5);
    const ClusteredCircuit cc = build_clustered_ruc(9, 3, rng);
    for (const CutPoint& c : cc.cuts) {
        const Gate& g = cc.circuit.gates.at(c.position);
        EXPECT_EQ(g.targets.size(), 2U);
        EXPECT_NE(std::find(g.targets.begin(), g.targets.end(), c.wire), g.targets.end());
    }
}

TEST(BuildClusteredRuc, Deterministic) {
    Rng a(99);
    Rng b(99);
    const ClusteredCircuit x = build_clustered_ruc(8, 3, a);
    const ClusteredCircuit y = build_clustered_ruc(8, 3, b);
    EXPECT_EQ(x.circuit, y.circuit);
    EXPECT_EQ(x.cuts, y.cuts);
}

TEST(BuildClusteredRuc, RejectsInadmissibleSizes) {
    Rng rng(0);
    EXPECT_THROW(build_clustered_ruc(4, 1, rng), std::invalid_argument);
    EXPECT_THROW(build_clustered_ruc(5, 3, rng), std::invalid_argument);
    EXPECT_THROW(build_clustered_ruc(1, 2, rng), std::invalid_argument);
}

TEST(BuildClusteredRuc, FragmentInvariantsAcrossSizes) {
    for (int f = 2; f <= 5; ++f) {
        for (int q = 2 * f; q <= 2 * f + 6; ++q) {
            Rng rng(derive_stream_seed({static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(f)}));
            const ClusteredCircuit cc = build_clustered_ruc(q, f, rng);
            ASSERT_EQ(static_cast<int>(cc.cuts.size()), f - 1);
            const FragmentGraph graph = cut_circuit(cc.circuit, cc.cuts);
            ASSERT_EQ(static_cast<int>(graph.fragments.size()), f);
            int classical_total = 0;
            std::set<int> covered;
            for (int k = 0; k < f; ++k) {
                const Fragment& frag = graph.fragments[k];
                EXPECT_EQ(frag.num_quantum_inputs() + frag.classical_input_count(), frag.num_qubits());
                EXPECT_EQ(frag.num_quantum_outputs() + frag.classical_output_count(), frag.num_qubits());
                EXPECT_EQ(frag.classical_output_count(), cc.cluster_sizes[k]);
                classical_total += frag.classical_output_count();
                for (int w : graph.output_order[k]) {
                    EXPECT_TRUE(covered.insert(w).second) << "wire " << w << " measured twice";
                }
            }
            EXPECT_EQ(classical_total, q);
            // Each quantum slot belongs to exactly one stitch.
            std::set<std::pair<int, int>> inputs;
            std::set<std::pair<int, int>> outputs;
            for (const Stitch& s : graph.stitches) {
                EXPECT_LT(s.upstream, s.downstream);
                EXPECT_TRUE(outputs.insert({s.upstream, s.output_slot}).second);
                EXPECT_TRUE(inputs.insert({s.downstream, s.input_slot}).second);
            }
            int qi = 0;
            int qo = 0;
            for (const Fragment& frag : graph.fragments) {
                qi += frag.num_quantum_inputs();
                qo += frag.num_quantum_outputs();
            }
            EXPECT_EQ(static_cast<int>(inputs.size()), qi);
            EXPECT_EQ(static_cast<int>(outputs.size()), qo);
        }
    }
}

TEST(CutCircuit, GhzCutOnMiddleWire) {
    const std::vector<CutPoint> cuts{{1, 1}};
    const FragmentGraph graph = cut_circuit(ghz_circuit(), cuts);
    ASSERT_EQ(graph.fragments.size(), 2U);
    EXPECT_EQ(graph.fragments[0].num_quantum_inputs(), 0);
    EXPECT_EQ(graph.fragments[0].num_quantum_outputs(), 1);
    EXPECT_EQ(graph.fragments[1].num_quantum_inputs(), 1);
    EXPECT_EQ(graph.fragments[1].num_quantum_outputs(), 0);
    EXPECT_EQ(graph.num_stitches(), 1);
    EXPECT_EQ(graph.output_order[0], (std::vector<int>{0}));
    EXPECT_EQ(graph.output_order[1], (std::vector<int>{1, 2}));
    EXPECT_EQ(graph.cut_axes(0), (std::vector<CutAxis>{{0, AxisSide::Output}}));
    EXPECT_EQ(graph.cut_axes(1), (std::vector<CutAxis>{{0, AxisSide::Input}}));
}

TEST(CutCircuit, EmptyCutListIsInvalid) {
    EXPECT_THROW(cut_circuit(ghz_circuit(), std::vector<CutPoint>{}), CutSetError);
}

TEST(CutCircuit, NonSeparatingCutIsInvalid) {
    Rng rng(3);
    Circuit c;
    c.num_qubits = 2;
    c.gates.push_back(Gate{haar_random_unitary(4, rng), {0, 1}});
    c.gates.push_back(Gate{haar_random_unitary(4, rng), {0, 1}});
    const std::vector<CutPoint> cuts{{0, 0}};
    EXPECT_THROW(cut_circuit(c, cuts), CutSetError);
}

TEST(CutCircuit, MalformedCutsAreInvalidArguments) {
    const Circuit ghz = ghz_circuit();
    EXPECT_THROW(cut_circuit(ghz, std::vector<CutPoint>{{1, 1}, {1, 1}}), std::invalid_argument);
    EXPECT_THROW(cut_circuit(ghz, std::vector<CutPoint>{{2, 1}}), std::invalid_argument);
    EXPECT_THROW(cut_circuit(ghz, std::vector<CutPoint>{{5, 1}}), std::invalid_argument);
    EXPECT_THROW(cut_circuit(ghz, std::vector<CutPoint>{{1, 7}}), std::invalid_argument);
}

TEST(CutCircuit, WireCutTwiceIsBothInputAndOutput) {
    Rng rng(11);
    Circuit c;
    c.num_qubits = 3;
    c.gates.push_back(Gate{haar_random_unitary(4, rng), {0, 1}});
    c.gates.push_back(Gate{haar_random_unitary(2, rng), {1}});
    c.gates.push_back(Gate{haar_random_unitary(4, rng), {1, 2}});
    const std::vector<CutPoint> cuts{{1, 0}, {1, 1}};
    const FragmentGraph graph = cut_circuit(c, cuts);
    ASSERT_EQ(graph.fragments.size(), 3U);
    EXPECT_EQ(graph.fragments[1].num_quantum_inputs(), 1);
    EXPECT_EQ(graph.fragments[1].num_quantum_outputs(), 1);
    EXPECT_EQ(graph.fragments[1].classical_output_count(), 0);
    EXPECT_EQ(graph.fragments[1].quantum_inputs, graph.fragments[1].quantum_outputs);
}

TEST(CircuitJson, RoundTripIsExact) {
    Rng rng(17);
    const ClusteredCircuit cc = build_clustered_ruc(7, 2, rng);
    EXPECT_EQ(circuit_from_json(circuit_to_json(cc.circuit)), cc.circuit);
    EXPECT_EQ(cuts_from_json(cuts_to_json(cc.cuts)), cc.cuts);
}

TEST(CircuitJson, HandWrittenGhzFixture) {
    const std::string text = R"({"num_qubits": 3, "gates": [
        {"targets": [0], "matrix": [[[0.7071067811865476,0],[0.7071067811865476,0]],
                                    [[0.7071067811865476,0],[-0.7071067811865476,0]]]},
        {"targets": [0,1], "matrix": [[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],
                                      [[0,0],[0,0],[0,0],[1,0]],[[0,0],[0,0],[1,0],[0,0]]]},
        {"targets": [1,2], "matrix": [[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],
                                      [[0,0],[0,0],[0,0],[1,0]],[[0,0],[0,0],[1,0],[0,0]]]}]})";
    const Circuit c = circuit_from_json(text);
    EXPECT_EQ(c.num_qubits, 3);
    ASSERT_EQ(c.gates.size(), 3U);
    const Circuit ghz = ghz_circuit();
    for (std::size_t g = 0; g < 3; ++g) {
        EXPECT_EQ(c.gates[g].targets, ghz.gates[g].targets);
        EXPECT_LT((c.gates[g].matrix - ghz.gates[g].matrix).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(CircuitJson, NonUnitaryGateNamesItsIndex) {
    const std::string text = R"({"num_qubits": 1, "gates": [
        {"targets": [0], "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]},
        {"targets": [0], "matrix": [[[1,0],[1,0]],[[0,0],[1,0]]]}]})";
    try {
        circuit_from_json(text);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("gate 1"), std::string::npos) << e.what();
    }
}

TEST(CircuitJson, MalformedDocumentsReportLocation) {
    try {
        circuit_from_json(R"({"num_qubits": 1, "gates": [)");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos) << e.what();
    }
    try {
        circuit_from_json(R"({"num_qubits": 1, "gates": [{"targets": [0], "matrix": [[[1,0],[0,0]],[[0,0],"x"]]}]})");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("$.gates[0].matrix[1][1]"), std::string::npos) << e.what();
    }
    EXPECT_THROW(circuit_from_json(R"({"gates": []})"), ParseError);
}

TEST(CircuitJson, OutOfRangeTargetsFailValidation) {
    const std::string text = R"({"num_qubits": 1, "gates": [
        {"targets": [3], "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]}]})";
    EXPECT_THROW(circuit_from_json(text), ValidationError);
}

}  // namespace
}  // namespace qcut
