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

#ifndef QCUT_RECOMBINE_HPP
#define QCUT_RECOMBINE_HPP

#include <map>
#include <span>
#include <string>

#include "qcut/circuit.hpp"
#include "qcut/distribution.hpp"
#include "qcut/fragment_tensor.hpp"

namespace qcut {

/// Stitched values over global bitstrings. Entries may be negative and need
/// not sum to one; only combinations of observed fragment rows appear.
struct RawReconstruction {
    int num_bits = 0;
    std::map<Bitstring, double> values;

    double total() const;
};

/// Contracts one tensor per fragment over the stitch graph.
///
/// `tensors[f]` must describe fragment f with axes graph.cut_axes(f).
/// Fragments are absorbed in `order` (default 0..F-1); a stitch is summed
/// over its four Pauli values, with weight 1/2, once both of its ends have
/// been absorbed. Throws TopologyError on any mismatch.
RawReconstruction contract(std::span<const FragmentTensor> tensors, const FragmentGraph& graph,
                           std::span<const int> order = {});

/// Zeroes negative entries and rescales to unit sum. Throws
/// DegenerateReconstructionError if nothing positive remains.
Distribution clip_and_normalize(const RawReconstruction& raw);

/// Sum of |value| over negative entries.
double negative_mass(const RawReconstruction& raw);

/// { "bitstring": value }
std::string raw_reconstruction_to_json(const RawReconstruction& raw);

}  // namespace qcut

#endif  // QCUT_RECOMBINE_HPP
