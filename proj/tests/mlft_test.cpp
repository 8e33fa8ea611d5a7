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

#include "qcut/mlft.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "qcut/direct.hpp"
#include "qcut/errors.hpp"

namespace qcut {
namespace {

FragmentGraph ghz_graph() {
    const std::vector<CutPoint> cuts{{1, 1}};
    return cut_circuit(ghz_circuit(), cuts);
}

Fragment identity_fragment() {
    Fragment f;
    f.subcircuit.num_qubits = 1;
    f.wires = {{0, 1}};
    f.quantum_inputs = {0};
    f.quantum_outputs = {0};
    return f;
}

/// Three-qubit fragment with two quantum inputs, one quantum output and two
/// classical outputs.
Fragment random_wide_fragment(Rng& rng) {
    Fragment f;
    f.subcircuit.num_qubits = 3;
    f.subcircuit.gates.push_back(Gate{haar_random_unitary(4, rng), {0, 2}});
    f.subcircuit.gates.push_back(Gate{haar_random_unitary(4, rng), {1, 2}});
    f.subcircuit.gates.push_back(Gate{haar_random_unitary(4, rng), {0, 1}});
    f.wires = {{0, 1}, {1, 1}, {2, 0}};
    f.quantum_inputs = {0, 1};
    f.quantum_outputs = {2};
    f.classical_output_wires = {0, 1};
    return f;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix random_hermitian(int d, Rng& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix a(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    return 0.5 * (a + a.adjoint());
}

ChoiBlocks random_trace_one_blocks(int d_log2, int num_blocks, Rng& rng) {
    ChoiBlocks b;
    b.num_inputs = d_log2 / 2;
    b.num_outputs = d_log2 - b.num_inputs;
    b.num_classical_bits = 3;
    double trace = 0.0;
    for (int s = 0; s < num_blocks; ++s) {
        b.blocks[static_cast<Bitstring>(s)] = random_hermitian(1 << d_log2, rng);
        trace += b.blocks[static_cast<Bitstring>(s)].trace().real();
    }
    const double shift = (1.0 - trace) / (num_blocks * (1 << d_log2));
    for (auto& [s, m] : b.blocks) {
        m += shift * ComplexMatrix::Identity(m.rows(), m.cols());
    }
    return b;
}

/// Sort-and-threshold Euclidean projection onto the probability simplex.
std::vector<double> simplex_projection_oracle(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumulative += u[j];
        const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0) {
            theta = t;
        }
    }
    for (double& x : v) {
        x = std::max(x - theta, 0.0);
    }
    return v;
}

std::vector<double> pooled_spectrum(const ChoiBlocks& b) {
    std::vector<double> out;
    for (const auto& [s, m] : b.blocks) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m);
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
            out.push_back(eig.eigenvalues()[i]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double distance(const ChoiBlocks& a, const ChoiBlocks& b) {
    double sq = 0.0;
    for (const auto& [s, m] : a.blocks) {
        sq += (m - b.blocks.at(s)).squaredNorm();
    }
    return std::sqrt(sq);
}

TEST(FitAnsatz, IdentityChannelGivesMaximallyEntangledState) {
    const Fragment f = identity_fragment();
    const ChoiBlocks fit = fit_ansatz(f, exact_frequencies(f));
    ASSERT_EQ(fit.blocks.size(), 1U);
    ComplexMatrix phi = ComplexMatrix::Zero(4, 4);
    for (int j : {0, 3}) {
        for (int k : {0, 3}) {
            phi(j, k) = 0.5;
        }
    }
    EXPECT_LT((fit.blocks.at(0) - phi).cwiseAbs().maxCoeff(), 1e-10);
    const ChoiBlocks ml = project_maximum_likelihood(fit);
    EXPECT_LT((ml.blocks.at(0) - phi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FitAnsatz, GhzDownstreamReproducesEveryVariant) {
    const FragmentGraph graph = ghz_graph();
    const Fragment& down = graph.fragments[1];
    const ChoiBlocks fit = fit_ansatz(down, exact_frequencies(down));
    for (const VariantKey& key : enumerate_variants(down)) {
        const VariantDistribution exact = exact_variant_distribution(down, key);
        const VariantDistribution predicted = predict_variant_distribution(fit, down, key);
        for (std::size_t i = 0; i < exact.probs.size(); ++i) {
            EXPECT_NEAR(predicted.probs[i], exact.probs[i], 1e-9) << to_string(key) << " outcome " << i;
        }
    }
}

TEST(FitAnsatz, UnobservedBitstringsHaveNoBlock) {
    // Qubit 0 idles in |0>, so s = 1 never occurs.
    Fragment f = identity_fragment();
    f.subcircuit.num_qubits = 2;
    f.wires = {{0, 0}, {1, 1}};
    f.quantum_inputs = {1};
    f.quantum_outputs = {1};
    f.classical_output_wires = {0};
    const ChoiBlocks fit = fit_ansatz(f, exact_frequencies(f));
    EXPECT_EQ(fit.blocks.size(), 1U);
    EXPECT_TRUE(fit.blocks.contains(0));
    EXPECT_FALSE(fit.blocks.contains(1));
    const ChoiBlocks ml = project_maximum_likelihood(fit);
    EXPECT_EQ(ml.blocks.size(), 1U);
}

TEST(FitAnsatz, BlocksAreHermitian) {
    Rng rng(31);
    const Fragment f = random_wide_fragment(rng);
    FragmentCounts counts;
    for (const VariantKey& key : enumerate_variants(f)) {
        counts.emplace(key, sample_variant(exact_variant_distribution(f, key), 100, rng));
    }
    const ChoiBlocks fit = fit_ansatz(f, counts);
    for (const auto& [s, m] : fit.blocks) {
        EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(FitAnsatz, MissingVariantIsIncompleteData) {
    const FragmentGraph graph = ghz_graph();
    FragmentFrequencies data = exact_frequencies(graph.fragments[1]);
    data.erase(data.begin());
    EXPECT_THROW(fit_ansatz(graph.fragments[1], data), IncompleteDataError);
}

TEST(ZeroNegativeAndRedistribute, HandExample) {
    const std::vector<double> in{0.6, 0.5, -0.1};
    const std::vector<double> out = zero_negative_and_redistribute(in);
    EXPECT_NEAR(out[0], 0.55, 1e-15);
    EXPECT_NEAR(out[1], 0.45, 1e-15);
    EXPECT_EQ(out[2], 0.0);
}

TEST(ZeroNegativeAndRedistribute, MatchesSimplexOracle) {
    Rng rng(32);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<double> v(1 + rep % 40);
        for (double& x : v) {
            x = g(rng);
        }
        const std::vector<double> got = zero_negative_and_redistribute(v);
        const std::vector<double> want = simplex_projection_oracle(v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            ASSERT_NEAR(got[i], want[i], 1e-12) << "rep " << rep;
        }
    }
}

TEST(ProjectMaximumLikelihood, FixedPointForPhysicalStates) {
    Rng rng(33);
    ChoiBlocks b;
    b.num_inputs = 1;
    b.num_outputs = 1;
    b.num_classical_bits = 1;
    double trace = 0.0;
    for (Bitstring s = 0; s < 2; ++s) {
        const ComplexMatrix h = random_hermitian(4, rng);
        b.blocks[s] = h * h;
        trace += b.blocks[s].trace().real();
    }
    for (auto& [s, m] : b.blocks) {
        m /= trace;
    }
    const ChoiBlocks p = project_maximum_likelihood(b);
    EXPECT_LT(distance(p, b), 1e-12);
}

TEST(ProjectMaximumLikelihood, SpectrumMatchesOracleAndIsPhysical) {
    Rng rng(34);
    for (int rep = 0; rep < 100; ++rep) {
        const int d_log2 = 1 + rep % 4;
        const int num_blocks = 1 + rep % 8;
        const ChoiBlocks a = random_trace_one_blocks(d_log2, num_blocks, rng);
        const ChoiBlocks p = project_maximum_likelihood(a);
        std::vector<double> want = simplex_projection_oracle(pooled_spectrum(a));
        std::sort(want.begin(), want.end());
        const std::vector<double> got = pooled_spectrum(p);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_NEAR(got[i], want[i], 1e-10);
        }
        EXPECT_GE(got.front(), -1e-10);
        EXPECT_NEAR(p.total_trace(), 1.0, 1e-10);
        for (const auto& [s, m] : p.blocks) {
            EXPECT_LT((m - m.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(ProjectMaximumLikelihood, Idempotent) {
    Rng rng(35);
    for (int rep = 0; rep < 20; ++rep) {
        const ChoiBlocks p = project_maximum_likelihood(random_trace_one_blocks(3, 4, rng));
        EXPECT_LT(distance(project_maximum_likelihood(p), p), 1e-12);
    }
}

TEST(ProjectMaximumLikelihood, CloserThanRandomPhysicalStates) {
    Rng rng(36);
    for (int rep = 0; rep < 10; ++rep) {
        const ChoiBlocks a = random_trace_one_blocks(2, 3, rng);
        const ChoiBlocks p = project_maximum_likelihood(a);
        const double best = distance(p, a);
        for (int trial = 0; trial < 100; ++trial) {
            ChoiBlocks q = a;
            double trace = 0.0;
            for (auto& [s, m] : q.blocks) {
                const ComplexMatrix h = random_hermitian(4, rng);
                m = h * h;
                trace += m.trace().real();
            }
            for (auto& [s, m] : q.blocks) {
                m /= trace;
            }
            EXPECT_LE(best, distance(q, a) + 1e-12);
        }
    }
}

TEST(ProjectMaximumLikelihood, CostRoughlyLinearInBlockCount) {
    Rng rng(37);
    const ChoiBlocks small = random_trace_one_blocks(4, 64, rng);
    const ChoiBlocks large = random_trace_one_blocks(4, 128, rng);
    auto best_time = [](const ChoiBlocks& b) {
        double best = INFINITY;
        for (int rep = 0; rep < 5; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const ChoiBlocks p = project_maximum_likelihood(b);
            const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            EXPECT_EQ(p.blocks.size(), b.blocks.size());
            best = std::min(best, t);
        }
        return best;
    };
    const double t_small = best_time(small);
    const double t_large = best_time(large);
    EXPECT_LT(t_large / t_small, 3.0) << t_small << " s vs " << t_large << " s";
}

TEST(TensorFromChoi, MatchesBruteForceTrace) {
    Rng rng(38);
    const ChoiBlocks p = project_maximum_likelihood(random_trace_one_blocks(3, 2, rng));
    Fragment f;
    f.subcircuit.num_qubits = 3;
    f.quantum_inputs = {0};
    f.quantum_outputs = {1, 2};
    f.classical_output_wires = {0};
    const FragmentTensor t = tensor_from_choi(p, f);
    ASSERT_EQ(t.num_axes(), 3);
    for (const auto& [s, block] : p.blocks) {
        for (Pauli a : kAllPaulis) {
            for (Pauli b : kAllPaulis) {
                for (Pauli c : kAllPaulis) {
                    const ComplexMatrix op = kron(kron(pauli_matrix(a).transpose(), pauli_matrix(b)), pauli_matrix(c));
                    const Complex tr = 2.0 * (block * op).trace();
                    EXPECT_LT(std::abs(tr.imag()), 1e-10);
                    const Pauli abc[] = {a, b, c};
                    EXPECT_NEAR(t.at(abc, s), tr.real(), 1e-12);
                }
            }
        }
    }
}

TEST(TensorFromChoi, ZeroBlockGivesZeroRow) {
    ChoiBlocks b;
    b.num_inputs = 1;
    b.num_outputs = 0;
    b.num_classical_bits = 1;
    b.blocks[1] = ComplexMatrix::Zero(2, 2);
    Fragment f;
    f.subcircuit.num_qubits = 1;
    f.quantum_inputs = {0};
    f.classical_output_wires = {0};
    const FragmentTensor t = tensor_from_choi(b, f);
    ASSERT_EQ(t.bitstrings, (std::vector<Bitstring>{1}));
    EXPECT_EQ(t.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(TensorFromChoi, GhzUpstreamMatchesDirectTensor) {
    const FragmentGraph graph = ghz_graph();
    const FragmentFrequencies data = exact_frequencies(graph.fragments[0]);
    const FragmentTensor direct = direct_fragment_tensor(graph, 0, data);
    const FragmentTensor mlft = mlft_fragment_tensor(graph, 0, data);
    ASSERT_EQ(direct.axes, mlft.axes);
    for (Bitstring s = 0; s < 2; ++s) {
        for (Pauli p : kAllPaulis) {
            const Pauli one[] = {p};
            EXPECT_NEAR(mlft.at(one, s), direct.at(one, s), 1e-9);
        }
    }
}

TEST(TensorFromChoi, ExactLimitAgreesWithDirectOnRandomFragments) {
    Rng rng(39);
    std::vector<Fragment> fragments;
    for (int rep = 0; rep < 3; ++rep) {
        fragments.push_back(random_wide_fragment(rng));
    }
    for (int q : {6, 7}) {
        const ClusteredCircuit cc = build_clustered_ruc(q, 2 + q % 2, rng);
        const FragmentGraph graph = cut_circuit(cc.circuit, cc.cuts);
        fragments.insert(fragments.end(), graph.fragments.begin(), graph.fragments.end());
    }
    for (const Fragment& f : fragments) {
        const FragmentFrequencies data = exact_frequencies(f);
        const FragmentTensor direct = pauli_tensor(complete_preparation_conditions(tabulate_conditions(f, data)));
        const FragmentTensor mlft = tensor_from_choi(project_maximum_likelihood(fit_ansatz(f, data)), f);
        ASSERT_EQ(direct.values.cols(), mlft.values.cols());
        for (std::size_t r = 0; r < mlft.bitstrings.size(); ++r) {
            const Bitstring s = mlft.bitstrings[r];
            const auto it = std::find(direct.bitstrings.begin(), direct.bitstrings.end(), s);
            ASSERT_NE(it, direct.bitstrings.end());
            const Eigen::Index dr = it - direct.bitstrings.begin();
            EXPECT_LT((mlft.values.row(static_cast<Eigen::Index>(r)) - direct.values.row(dr)).cwiseAbs().maxCoeff(),
                      1e-9);
        }
    }
}

TEST(ChoiBlocksJson, RoundTrip) {
    Rng rng(40);
    const ChoiBlocks b = random_trace_one_blocks(2, 3, rng);
    const ChoiBlocks back = choi_blocks_from_json(choi_blocks_to_json(b));
    EXPECT_EQ(back.num_inputs, b.num_inputs);
    EXPECT_EQ(back.num_outputs, b.num_outputs);
    EXPECT_EQ(back.num_classical_bits, b.num_classical_bits);
    ASSERT_EQ(back.blocks.size(), b.blocks.size());
    EXPECT_EQ(distance(back, b), 0.0);
    EXPECT_THROW(choi_blocks_from_json("[1"), ParseError);
    EXPECT_THROW(choi_blocks_from_json(R"({"q_in": 0, "q_out": 1, "blocks": {"0": [[[1,0]]]}})"), ParseError);
}

}  // namespace
}  // namespace qcut
