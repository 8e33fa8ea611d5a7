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

#ifndef QCUT_CIRCUIT_HPP
#define QCUT_CIRCUIT_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcut/rng.hpp"

namespace qcut {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Bitstring = std::uint64_t;

/// Maximum tolerated entry of |U^dagger U - I| for a gate matrix.
inline constexpr double kUnitarityTolerance = 1e-12;

/// Dense unitary on `targets`. targets[0] is the most significant bit of the
/// matrix row/column index.
struct Gate {
    ComplexMatrix matrix;
    std::vector<int> targets;

    friend bool operator==(const Gate& a, const Gate& b) {
        return a.targets == b.targets && a.matrix.rows() == b.matrix.rows() &&
               a.matrix.cols() == b.matrix.cols() && a.matrix == b.matrix;
    }
};

struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;

    /// Throws ValidationError naming the first offending gate.
    void validate() const;

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// A cut on `wire` immediately after the gate at index `position`.
struct CutPoint {
    int wire = 0;
    int position = 0;

    friend auto operator<=>(const CutPoint&, const CutPoint&) = default;
};

double unitarity_error(const ComplexMatrix& u);

/// Haar-distributed unitary: complex Ginibre matrix, QR, then column phases
/// fixed by the diagonal of R.
ComplexMatrix haar_random_unitary(int dim, Rng& rng);

/// Cluster sizes for `num_qubits` split over `num_fragments` contiguous
/// blocks, larger blocks first.
std::vector<int> cluster_sizes(int num_qubits, int num_fragments);

struct ClusteredCircuit {
    Circuit circuit;
    std::vector<CutPoint> cuts;
    std::vector<int> cluster_sizes;
};

/// Three-layer clustered random unitary circuit with one cut per adjacent
/// cluster pair.
///
/// Cluster j owns the contiguous block c_j. The entangling gate for the pair
/// (j, j+1) acts on (last of c_j, first of c_{j+1}) and its lower leg, the
/// first qubit of c_{j+1}, is cut right after it. That qubit enters the
/// circuit inside cluster j's first-layer unitary and is handed to cluster
/// j+1 by the cut, so the first layer acts on (c_j minus its first qubit when
/// j > 0) plus the first qubit of c_{j+1}, while the last layer acts on c_j.
/// Every fragment is then exactly one cluster, the gate belongs to the
/// upstream fragment, and F - 1 cuts separate F fragments.
ClusteredCircuit build_clustered_ruc(int num_qubits, int num_fragments, Rng& rng);

/// A maximal piece of a wire between cuts. Segment 0 starts at the circuit
/// input; segment k > 0 starts right after the k-th cut on that wire.
struct WireSegment {
    int wire = 0;
    int segment = 0;

    friend auto operator<=>(const WireSegment&, const WireSegment&) = default;
};

struct Fragment {
    Circuit subcircuit;
    /// Local qubit -> originating wire segment, ordered by (wire, segment).
    std::vector<WireSegment> wires;
    /// Local qubits whose segment starts at a cut, in local order.
    std::vector<int> quantum_inputs;
    /// Local qubits whose segment ends at a cut, in local order.
    std::vector<int> quantum_outputs;
    /// Local qubits measured in the computational basis; bit j of a fragment
    /// bitstring is the outcome on classical_output_wires[j].
    std::vector<int> classical_output_wires;

    int num_qubits() const { return subcircuit.num_qubits; }
    int num_quantum_inputs() const { return static_cast<int>(quantum_inputs.size()); }
    int num_quantum_outputs() const { return static_cast<int>(quantum_outputs.size()); }
    int classical_input_count() const { return num_qubits() - num_quantum_inputs(); }
    int classical_output_count() const { return static_cast<int>(classical_output_wires.size()); }
    int num_cut_axes() const { return num_quantum_inputs() + num_quantum_outputs(); }

    /// 4^{Q_i} 3^{Q_o}.
    std::uint64_t variant_count() const;
};

/// Connects quantum output `output_slot` of `upstream` to quantum input
/// `input_slot` of `downstream`. Stitch ids are indices into
/// FragmentGraph::stitches and match the order of the cut list.
struct Stitch {
    int upstream = 0;
    int output_slot = 0;
    int downstream = 0;
    int input_slot = 0;
    CutPoint cut;
};

enum class AxisSide : std::uint8_t { Input, Output };

/// One Pauli axis of a fragment tensor.
struct CutAxis {
    int stitch = 0;
    AxisSide side = AxisSide::Input;

    friend bool operator==(const CutAxis&, const CutAxis&) = default;
};

struct FragmentGraph {
    int num_qubits = 0;
    /// Topologically ordered by circuit time.
    std::vector<Fragment> fragments;
    std::vector<Stitch> stitches;
    /// output_order[f][j]: global bit position of fragment f's j-th classical output.
    std::vector<std::vector<int>> output_order;

    int num_stitches() const { return static_cast<int>(stitches.size()); }
    /// Total variant count V over all fragments.
    std::uint64_t variant_count() const;
    /// Pauli axes of fragment f: quantum inputs in slot order, then quantum outputs.
    std::vector<CutAxis> cut_axes(int fragment) const;
};

/// Axes for a fragment outside any graph: inputs then outputs, numbered by slot.
std::vector<CutAxis> standalone_axes(const Fragment& fragment);

/// Splits a circuit into fragments at the given cuts.
///
/// Throws std::invalid_argument on malformed cuts (out of range, not after a
/// gate on that wire, duplicated) and CutSetError when the cut list is empty,
/// a cut fails to separate its two sides, or the fragments cannot be ordered
/// in time.
FragmentGraph cut_circuit(const Circuit& circuit, std::span<const CutPoint> cuts);

std::string circuit_to_json(const Circuit& circuit);
/// Throws ParseError (with location) or ValidationError.
Circuit circuit_from_json(const std::string& text);

std::string cuts_to_json(std::span<const CutPoint> cuts);
std::vector<CutPoint> cuts_from_json(const std::string& text);

/// Three-qubit GHZ preparation: H on q0, CNOT(q0,q1), CNOT(q1,q2).
Circuit ghz_circuit();

}  // namespace qcut

#endif  // QCUT_CIRCUIT_HPP
