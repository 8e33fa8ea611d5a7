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

#ifndef QCUT_METRICS_HPP
#define QCUT_METRICS_HPP

#include <cstdint>
#include <map>
#include <span>

#include "qcut/circuit.hpp"
#include "qcut/distribution.hpp"

namespace qcut {

struct FidelityReport {
    double fidelity = 0.0;
    double infidelity = 1.0;
};

/// Squared Bhattacharyya overlap over the union of supports; absent keys
/// count as zero. Throws InvalidDistributionError on negative entries.
FidelityReport fidelity(const Distribution& p, const Distribution& q);

/// (2^Q - 1) / (4 S): leading-order infidelity of an S-shot empirical
/// distribution against a spread-out target.
double expected_infidelity_full(int num_qubits, double shots);

/// 2^Q / S, the coarser rule of thumb for the same quantity.
double expected_infidelity_full_rough(int num_qubits, double shots);

struct CutInfidelityEstimate {
    /// sum_f 2^{C_o^f} / n
    double estimate = 0.0;
    /// (4^K / n) sum_f 2^{C_o^f - Q_i^f}; pessimistic in K.
    double bound = 0.0;
};

CutInfidelityEstimate estimate_infidelity_cut(const FragmentGraph& graph, double shots_per_variant);

/// Second-order expansion of 1 - F(p, p + eps):
///   -sum eps - (sum eps)^2 / 4 + sum eps^2 / (4 p).
/// Throws std::invalid_argument if eps is nonzero where p is not positive.
double second_order_infidelity(const Distribution& p, const std::map<Bitstring, double>& epsilon);

struct InstanceStats {
    double mean = 0.0;
    /// Population standard deviation.
    double std = 0.0;
    std::size_t count = 0;
};

InstanceStats instance_stats(std::span<const double> values);

}  // namespace qcut

#endif  // QCUT_METRICS_HPP
