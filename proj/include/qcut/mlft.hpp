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

#ifndef QCUT_MLFT_HPP
#define QCUT_MLFT_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qcut/circuit.hpp"
#include "qcut/fragment_tensor.hpp"
#include "qcut/fragsim.hpp"

namespace qcut {

/// Block-diagonal reduced Choi state of a fragment, one Hermitian block per
/// observed classical bitstring. Block rows and columns index
/// (quantum inputs) x (quantum outputs), inputs most significant.
///
/// Normalization: for a pure input state rho and output projector Pi,
///   P(r, s | variant) = 2^{Q_i} tr[ block_s (rho^T (x) Pi) ].
/// Bitstrings without a block carry an implicit zero block.
struct ChoiBlocks {
    int num_inputs = 0;
    int num_outputs = 0;
    int num_classical_bits = 0;
    std::map<Bitstring, ComplexMatrix> blocks;

    int dim() const { return 1 << (num_inputs + num_outputs); }
    double total_trace() const;
};

/// Least-squares fit of each block to the observed outcome frequencies.
///
/// Each block is parametrized by d^2 reals (diagonal, then real and imaginary
/// parts of the upper triangle), and one design matrix serves every block
/// because preparations and measurements do not depend on s. Normal equations
/// are solved by LDLT; a pseudoinverse with relative cutoff 1e-10 takes over
/// when they are ill-conditioned. Throws FitError if the design is rank
/// deficient and IncompleteDataError if a variant is missing.
ChoiBlocks fit_ansatz(const Fragment& fragment, const FragmentFrequencies& data);
ChoiBlocks fit_ansatz(const Fragment& fragment, const FragmentCounts& counts);

/// Closest point of the probability simplex to `values` by repeatedly
/// zeroing the most negative entry and shifting the remaining entries
/// uniformly back to unit sum.
std::vector<double> zero_negative_and_redistribute(std::span<const double> values);

/// Maximum-likelihood state: eigen-decompose every block, project the pooled
/// spectrum with zero_negative_and_redistribute, and rebuild each block in
/// its own eigenbasis. Missing blocks stay absent.
ChoiBlocks project_maximum_likelihood(const ChoiBlocks& ansatz);

/// F[P_in, P_out; s] = 2^{Q_i} tr[ block_s ((x) P_in^T (x) (x) P_out) ].
/// Empty `axes` means standalone_axes(fragment).
FragmentTensor tensor_from_choi(const ChoiBlocks& blocks, const Fragment& fragment, std::vector<CutAxis> axes = {},
                                int fragment_id = 0);

/// Outcome distribution implied by the blocks for one variant.
VariantDistribution predict_variant_distribution(const ChoiBlocks& blocks, const Fragment& fragment,
                                                 const VariantKey& key);

/// fit -> project -> tensor for fragment f of a graph.
FragmentTensor mlft_fragment_tensor(const FragmentGraph& graph, int fragment, const FragmentFrequencies& data);

/// { "q_in": int, "q_out": int, "c_out": int, "blocks": { "s": [[ [re,im], ... ], ...] } }
std::string choi_blocks_to_json(const ChoiBlocks& blocks);
ChoiBlocks choi_blocks_from_json(const std::string& text);

}  // namespace qcut

#endif  // QCUT_MLFT_HPP
