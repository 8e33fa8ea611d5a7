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

#ifndef QCUT_FRAGSIM_HPP
#define QCUT_FRAGSIM_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qcut/circuit.hpp"
#include "qcut/distribution.hpp"
#include "qcut/rng.hpp"

namespace qcut {

/// Tomographic input states |0>, |1>, (|0>+|1>)/sqrt2, (|0>+i|1>)/sqrt2.
enum class Prep : std::uint8_t { ZPlus, ZMinus, XPlus, YPlus };

/// Measurement basis of a quantum output. Outcome bit 0 is eigenvalue +1.
enum class Basis : std::uint8_t { X, Y, Z };

inline constexpr Prep kAllPreps[] = {Prep::ZPlus, Prep::ZMinus, Prep::XPlus, Prep::YPlus};
inline constexpr Basis kAllBases[] = {Basis::X, Basis::Y, Basis::Z};

std::string to_string(Prep p);
std::string to_string(Basis b);

Eigen::Vector2cd prep_state(Prep p);
/// Unitary applied before a computational-basis measurement so that the +1
/// eigenstate of the basis maps to |0>.
Eigen::Matrix2cd basis_rotation(Basis b);

struct VariantKey {
    std::vector<Prep> preparations;
    std::vector<Basis> bases;

    friend auto operator<=>(const VariantKey&, const VariantKey&) = default;
    friend bool operator==(const VariantKey&, const VariantKey&) = default;
};

std::string to_string(const VariantKey& key);

/// All 4^{Q_i} 3^{Q_o} variants, preparations varying slowest.
std::vector<VariantKey> enumerate_variants(const Fragment& fragment);

/// Joint outcome index: bit k (k < Q_o) set means eigenvalue -1 on quantum
/// output k; the classical bitstring s occupies the bits above.
inline std::size_t outcome_index(std::uint64_t r_bits, Bitstring s, int num_quantum_outputs) {
    return static_cast<std::size_t>(r_bits | (s << num_quantum_outputs));
}

struct VariantDistribution {
    VariantKey key;
    int num_quantum_outputs = 0;
    int num_classical_outputs = 0;
    std::vector<double> probs;

    double at(std::uint64_t r_bits, Bitstring s) const {
        return probs[outcome_index(r_bits, s, num_quantum_outputs)];
    }
};

struct VariantCounts {
    VariantKey key;
    int num_quantum_outputs = 0;
    int num_classical_outputs = 0;
    std::uint64_t shots = 0;
    std::vector<std::uint64_t> counts;
};

using FragmentCounts = std::map<VariantKey, VariantCounts>;
/// Per-variant outcome frequencies in the VariantDistribution layout.
using FragmentFrequencies = std::map<VariantKey, std::vector<double>>;

/// count / n per outcome; all zeros when n = 0.
FragmentFrequencies frequencies_from_counts(const FragmentCounts& counts);

/// Qubit limit for dense simulation; QCUT_STATEVECTOR_LIMIT overrides the default of 26.
int statevector_limit();

VariantDistribution exact_variant_distribution(const Fragment& fragment, const VariantKey& key,
                                               int limit = statevector_limit());

/// Exact distributions for every variant of a fragment, as frequencies.
FragmentFrequencies exact_frequencies(const Fragment& fragment, int limit = statevector_limit());

/// Draws multinomial counts from a fixed categorical distribution.
///
/// Uses Vose's alias table when the draw count is large relative to the
/// support and inverse-CDF bisection otherwise; both consume the same
/// stream interface, so callers never depend on which one ran.
class CategoricalSampler {
  public:
    explicit CategoricalSampler(std::span<const double> probs);

    std::vector<std::uint64_t> sample_counts(std::uint64_t n, Rng& rng) const;
    std::size_t support_size() const { return support_.size(); }

  private:
    std::size_t size_ = 0;
    std::vector<std::size_t> support_;
    std::vector<double> cdf_;
    std::vector<double> alias_prob_;
    std::vector<std::size_t> alias_index_;
};

VariantCounts sample_variant(const VariantDistribution& dist, std::uint64_t n, Rng& rng);

/// Born probabilities in the computational basis (zero entries omitted).
Distribution exact_full_distribution(const Circuit& circuit, int limit = statevector_limit());

struct FullSample {
    Distribution frequencies;
    std::map<Bitstring, std::uint64_t> counts;
    std::uint64_t shots = 0;
    /// Set when no shots were taken; frequencies are then empty.
    bool degenerate = false;
};

FullSample sample_distribution(const Distribution& exact, std::uint64_t shots, Rng& rng);
FullSample sample_full(const Circuit& circuit, std::uint64_t shots, Rng& rng, int limit = statevector_limit());

/// { "key": {"preparations": [...], "bases": [...]}, "n": int, "counts": { "r:s": int } }
/// where r lists output eigenvalue bits (0 for +1) and s the classical bits.
std::string variant_counts_to_json(const VariantCounts& counts);
VariantCounts variant_counts_from_json(const std::string& text);

}  // namespace qcut

#endif  // QCUT_FRAGSIM_HPP
