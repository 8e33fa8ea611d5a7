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

#include "qcut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcut/errors.hpp"

namespace qcut {

namespace {

void require_non_negative(const Distribution& d, const char* name) {
    for (const auto& [b, v] : d.values) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw InvalidDistributionError(std::string("fidelity: ") + name + "[" +
                                           bitstring_to_string(b, d.num_bits) + "] = " + std::to_string(v));
        }
    }
}

}  // namespace

FidelityReport fidelity(const Distribution& p, const Distribution& q) {
    require_non_negative(p, "p");
    require_non_negative(q, "q");
    // Only the intersection of supports contributes.
    const Distribution& small = p.values.size() <= q.values.size() ? p : q;
    const Distribution& large = &small == &p ? q : p;
    double overlap = 0.0;
    for (const auto& [b, v] : small.values) {
        auto it = large.values.find(b);
        if (it != large.values.end()) {
            overlap += std::sqrt(v * it->second);
        }
    }
    FidelityReport report;
    report.fidelity = overlap * overlap;
    report.infidelity = 1.0 - report.fidelity;
    return report;
}

double expected_infidelity_full(int num_qubits, double shots) {
    if (!(shots > 0.0)) {
        throw std::invalid_argument("expected_infidelity_full: shots must be positive");
    }
    return (std::ldexp(1.0, num_qubits) - 1.0) / (4.0 * shots);
}

double expected_infidelity_full_rough(int num_qubits, double shots) {
    if (!(shots > 0.0)) {
        throw std::invalid_argument("expected_infidelity_full_rough: shots must be positive");
    }
    return std::ldexp(1.0, num_qubits) / shots;
}

CutInfidelityEstimate estimate_infidelity_cut(const FragmentGraph& graph, double shots_per_variant) {
    if (!(shots_per_variant > 0.0)) {
        throw std::invalid_argument("estimate_infidelity_cut: shots per variant must be positive");
    }
    double sum_estimate = 0.0;
    double sum_bound = 0.0;
    for (const Fragment& f : graph.fragments) {
        sum_estimate += std::ldexp(1.0, f.classical_output_count());
        sum_bound += std::ldexp(1.0, f.classical_output_count() - f.num_quantum_inputs());
    }
    CutInfidelityEstimate out;
    out.estimate = sum_estimate / shots_per_variant;
    out.bound = std::ldexp(1.0, 2 * graph.num_stitches()) * sum_bound / shots_per_variant;
    return out;
}

double second_order_infidelity(const Distribution& p, const std::map<Bitstring, double>& epsilon) {
    double sum = 0.0;
    double weighted = 0.0;
    for (const auto& [b, e] : epsilon) {
        if (e == 0.0) {
            continue;
        }
        const double pb = p.at(b);
        if (!(pb > 0.0)) {
            throw std::invalid_argument("second_order_infidelity: epsilon nonzero outside the support of p at " +
                                        bitstring_to_string(b, p.num_bits));
        }
        sum += e;
        weighted += e * e / pb;
    }
    return -sum - 0.25 * sum * sum + 0.25 * weighted;
}

InstanceStats instance_stats(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("instance_stats: no values");
    }
    InstanceStats stats;
    stats.count = values.size();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    stats.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) {
        sq += (v - stats.mean) * (v - stats.mean);
    }
    stats.std = std::sqrt(sq / static_cast<double>(values.size()));
    return stats;
}

}  // namespace qcut
