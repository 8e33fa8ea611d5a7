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

#ifndef QCUT_FRAGMENT_TENSOR_HPP
#define QCUT_FRAGMENT_TENSOR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcut/circuit.hpp"

namespace qcut {

enum class Pauli : std::uint8_t { I, X, Y, Z };

inline constexpr Pauli kAllPaulis[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

const Eigen::Matrix2cd& pauli_matrix(Pauli p);

/// Real tensor with one Pauli axis (I, X, Y, Z) per incident cut and a sparse
/// classical axis. Row i of `values` holds the entries for `bitstrings[i]`;
/// the column index packs the Pauli axes with axis 0 most significant.
struct FragmentTensor {
    int fragment = 0;
    std::vector<CutAxis> axes;
    int num_classical_bits = 0;
    std::vector<Bitstring> bitstrings;
    Eigen::MatrixXd values;

    int num_axes() const { return static_cast<int>(axes.size()); }

    static std::size_t column(std::span<const Pauli> paulis) {
        std::size_t c = 0;
        for (Pauli p : paulis) {
            c = 4 * c + static_cast<std::size_t>(p);
        }
        return c;
    }

    /// Zero for bitstrings without a stored row.
    double at(std::span<const Pauli> paulis, Bitstring s) const;
};

}  // namespace qcut

#endif  // QCUT_FRAGMENT_TENSOR_HPP
