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

#include "qcut/fragsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "qcut/errors.hpp"

namespace qcut {

namespace {

constexpr double kNegativeTolerance = 1e-12;

using StateVector = std::vector<Complex>;

void apply_matrix(StateVector& psi, const ComplexMatrix& m, std::span<const int> targets) {
    const int k = static_cast<int>(targets.size());
    const std::size_t dim = std::size_t{1} << k;
    std::vector<std::size_t> offsets(dim, 0);
    std::size_t target_mask = 0;
    for (int j = 0; j < k; ++j) {
        target_mask |= std::size_t{1} << targets[j];
    }
    for (std::size_t a = 0; a < dim; ++a) {
        for (int j = 0; j < k; ++j) {
            if ((a >> (k - 1 - j)) & 1U) {
                offsets[a] |= std::size_t{1} << targets[j];
            }
        }
    }
    Eigen::VectorXcd in(static_cast<Eigen::Index>(dim));
    Eigen::VectorXcd out(static_cast<Eigen::Index>(dim));
    for (std::size_t base = 0; base < psi.size(); ++base) {
        if (base & target_mask) {
            continue;
        }
        for (std::size_t a = 0; a < dim; ++a) {
            in[static_cast<Eigen::Index>(a)] = psi[base | offsets[a]];
        }
        out.noalias() = m * in;
        for (std::size_t a = 0; a < dim; ++a) {
            psi[base | offsets[a]] = out[static_cast<Eigen::Index>(a)];
        }
    }
}

void check_limit(int num_qubits, int limit) {
    if (num_qubits > limit) {
        throw ResourceError("state vector of " + std::to_string(num_qubits) +
                            " qubits exceeds the limit of " + std::to_string(limit));
    }
}

StateVector zero_state(int num_qubits) {
    StateVector psi(std::size_t{1} << num_qubits, Complex(0.0));
    psi[0] = 1.0;
    return psi;
}

void run_gates(StateVector& psi, const Circuit& circuit) {
    for (const Gate& g : circuit.gates) {
        apply_matrix(psi, g.matrix, g.targets);
    }
}

double born(Complex amp) {
    const double p = std::norm(amp);
    return p < kNegativeTolerance && p > -kNegativeTolerance ? std::max(p, 0.0) : p;
}

/// Unitary whose first column is the given normalized state.
Eigen::Matrix2cd state_preparation(const Eigen::Vector2cd& v) {
    Eigen::Matrix2cd u;
    u << v[0], -std::conj(v[1]), v[1], std::conj(v[0]);
    return u;
}

}  // namespace

std::string to_string(Prep p) {
    switch (p) {
        case Prep::ZPlus: return "Z+";
        case Prep::ZMinus: return "Z-";
        case Prep::XPlus: return "X+";
        case Prep::YPlus: return "Y+";
    }
    return "?";
}

std::string to_string(Basis b) {
    switch (b) {
        case Basis::X: return "X";
        case Basis::Y: return "Y";
        case Basis::Z: return "Z";
    }
    return "?";
}

std::string to_string(const VariantKey& key) {
    std::string out = "prep[";
    for (std::size_t k = 0; k < key.preparations.size(); ++k) {
        out += (k ? "," : "") + to_string(key.preparations[k]);
    }
    out += "] basis[";
    for (std::size_t k = 0; k < key.bases.size(); ++k) {
        out += (k ? "," : "") + to_string(key.bases[k]);
    }
    return out + "]";
}

Eigen::Vector2cd prep_state(Prep p) {
    const double h = M_SQRT1_2;
    switch (p) {
        case Prep::ZPlus: return {1.0, 0.0};
        case Prep::ZMinus: return {0.0, 1.0};
        case Prep::XPlus: return {h, h};
        case Prep::YPlus: return {h, Complex(0.0, h)};
    }
    throw std::invalid_argument("unknown preparation label");
}

Eigen::Matrix2cd basis_rotation(Basis b) {
    const double h = M_SQRT1_2;
    Eigen::Matrix2cd r;
    switch (b) {
        case Basis::X:
            r << h, h, h, -h;
            return r;
        case Basis::Y:
            // H S^dagger
            r << h, Complex(0.0, -h), h, Complex(0.0, h);
            return r;
        case Basis::Z:
            return Eigen::Matrix2cd::Identity();
    }
    throw std::invalid_argument("unknown basis label");
}

std::vector<VariantKey> enumerate_variants(const Fragment& fragment) {
    const int qi = fragment.num_quantum_inputs();
    const int qo = fragment.num_quantum_outputs();
    std::vector<VariantKey> out;
    out.reserve(fragment.variant_count());
    std::uint64_t num_preps = 1;
    std::uint64_t num_bases = 1;
    for (int k = 0; k < qi; ++k) num_preps *= 4;
    for (int k = 0; k < qo; ++k) num_bases *= 3;
    for (std::uint64_t p = 0; p < num_preps; ++p) {
        for (std::uint64_t b = 0; b < num_bases; ++b) {
            VariantKey key;
            key.preparations.resize(qi);
            key.bases.resize(qo);
            std::uint64_t rest = p;
            for (int k = qi - 1; k >= 0; --k, rest /= 4) {
                key.preparations[k] = kAllPreps[rest % 4];
            }
            rest = b;
            for (int k = qo - 1; k >= 0; --k, rest /= 3) {
                key.bases[k] = kAllBases[rest % 3];
            }
            out.push_back(std::move(key));
        }
    }
    return out;
}

FragmentFrequencies frequencies_from_counts(const FragmentCounts& counts) {
    FragmentFrequencies out;
    for (const auto& [key, vc] : counts) {
        std::vector<double> f(vc.counts.size(), 0.0);
        if (vc.shots > 0) {
            const double inv = 1.0 / static_cast<double>(vc.shots);
            for (std::size_t i = 0; i < f.size(); ++i) {
                f[i] = static_cast<double>(vc.counts[i]) * inv;
            }
        }
        out.emplace(key, std::move(f));
    }
    return out;
}

int statevector_limit() {
    if (const char* env = std::getenv("QCUT_STATEVECTOR_LIMIT")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 40) {
            return static_cast<int>(v);
        }
    }
    return 26;
}

VariantDistribution exact_variant_distribution(const Fragment& fragment, const VariantKey& key, int limit) {
    const int qo = fragment.num_quantum_outputs();
    const int co = fragment.classical_output_count();
    if (static_cast<int>(key.preparations.size()) != fragment.num_quantum_inputs() ||
        static_cast<int>(key.bases.size()) != qo) {
        throw std::invalid_argument("exact_variant_distribution: variant key does not match fragment");
    }
    check_limit(fragment.num_qubits(), limit);

    StateVector psi = zero_state(fragment.num_qubits());
    for (std::size_t k = 0; k < key.preparations.size(); ++k) {
        const int q = fragment.quantum_inputs[k];
        apply_matrix(psi, state_preparation(prep_state(key.preparations[k])), std::span<const int>(&q, 1));
    }
    run_gates(psi, fragment.subcircuit);
    for (int k = 0; k < qo; ++k) {
        const int q = fragment.quantum_outputs[k];
        apply_matrix(psi, basis_rotation(key.bases[k]), std::span<const int>(&q, 1));
    }

    VariantDistribution dist;
    dist.key = key;
    dist.num_quantum_outputs = qo;
    dist.num_classical_outputs = co;
    dist.probs.assign(std::size_t{1} << (qo + co), 0.0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        std::uint64_t r = 0;
        Bitstring s = 0;
        for (int k = 0; k < qo; ++k) {
            r |= static_cast<std::uint64_t>((i >> fragment.quantum_outputs[k]) & 1U) << k;
        }
        for (int j = 0; j < co; ++j) {
            s |= static_cast<Bitstring>((i >> fragment.classical_output_wires[j]) & 1U) << j;
        }
        dist.probs[outcome_index(r, s, qo)] += born(psi[i]);
    }
    return dist;
}

FragmentFrequencies exact_frequencies(const Fragment& fragment, int limit) {
    FragmentFrequencies out;
    for (const VariantKey& key : enumerate_variants(fragment)) {
        out.emplace(key, exact_variant_distribution(fragment, key, limit).probs);
    }
    return out;
}

CategoricalSampler::CategoricalSampler(std::span<const double> probs) : size_(probs.size()) {
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= -kNegativeTolerance) || !std::isfinite(probs[i])) {
            throw std::invalid_argument("CategoricalSampler: negative or non-finite probability");
        }
        if (probs[i] > 0.0) {
            support_.push_back(i);
            total += probs[i];
        }
    }
    if (support_.empty()) {
        return;
    }
    const std::size_t m = support_.size();
    cdf_.resize(m);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        acc += probs[support_[j]] / total;
        cdf_[j] = acc;
    }
    cdf_.back() = 1.0;

    alias_prob_.assign(m, 0.0);
    alias_index_.assign(m, 0);
    std::vector<double> scaled(m);
    std::vector<std::size_t> small;
    std::vector<std::size_t> large;
    for (std::size_t j = 0; j < m; ++j) {
        scaled[j] = probs[support_[j]] / total * static_cast<double>(m);
        (scaled[j] < 1.0 ? small : large).push_back(j);
    }
    while (!small.empty() && !large.empty()) {
        const std::size_t s = small.back();
        small.pop_back();
        const std::size_t l = large.back();
        alias_prob_[s] = scaled[s];
        alias_index_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::size_t j : large) {
        alias_prob_[j] = 1.0;
        alias_index_[j] = j;
    }
    for (std::size_t j : small) {
        alias_prob_[j] = 1.0;
        alias_index_[j] = j;
    }
}

std::vector<std::uint64_t> CategoricalSampler::sample_counts(std::uint64_t n, Rng& rng) const {
    std::vector<std::uint64_t> counts(size_, 0);
    if (n == 0) {
        return counts;
    }
    if (support_.empty()) {
        throw std::invalid_argument("CategoricalSampler: cannot sample from an all-zero distribution");
    }
    const std::size_t m = support_.size();
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    if (n >= 4 * static_cast<std::uint64_t>(m)) {
        std::uniform_int_distribution<std::size_t> column(0, m - 1);
        for (std::uint64_t t = 0; t < n; ++t) {
            const std::size_t j = column(rng);
            const std::size_t pick = uniform(rng) < alias_prob_[j] ? j : alias_index_[j];
            ++counts[support_[pick]];
        }
    } else {
        for (std::uint64_t t = 0; t < n; ++t) {
            const double u = uniform(rng);
            const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
            const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), m - 1);
            ++counts[support_[j]];
        }
    }
    return counts;
}

VariantCounts sample_variant(const VariantDistribution& dist, std::uint64_t n, Rng& rng) {
    VariantCounts out;
    out.key = dist.key;
    out.num_quantum_outputs = dist.num_quantum_outputs;
    out.num_classical_outputs = dist.num_classical_outputs;
    out.shots = n;
    out.counts = CategoricalSampler(dist.probs).sample_counts(n, rng);
    return out;
}

Distribution exact_full_distribution(const Circuit& circuit, int limit) {
    check_limit(circuit.num_qubits, limit);
    StateVector psi = zero_state(circuit.num_qubits);
    run_gates(psi, circuit);
    Distribution dist;
    dist.num_bits = circuit.num_qubits;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double p = born(psi[i]);
        if (p > 0.0) {
            dist.values.emplace_hint(dist.values.end(), static_cast<Bitstring>(i), p);
        }
    }
    return dist;
}

FullSample sample_distribution(const Distribution& exact, std::uint64_t shots, Rng& rng) {
    FullSample out;
    out.shots = shots;
    out.frequencies.num_bits = exact.num_bits;
    if (shots == 0) {
        out.degenerate = true;
        return out;
    }
    std::vector<Bitstring> keys;
    std::vector<double> probs;
    keys.reserve(exact.values.size());
    probs.reserve(exact.values.size());
    for (const auto& [b, p] : exact.values) {
        keys.push_back(b);
        probs.push_back(p);
    }
    const std::vector<std::uint64_t> counts = CategoricalSampler(probs).sample_counts(shots, rng);
    const double inv = 1.0 / static_cast<double>(shots);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (counts[i] > 0) {
            out.counts.emplace_hint(out.counts.end(), keys[i], counts[i]);
            out.frequencies.values.emplace_hint(out.frequencies.values.end(), keys[i],
                                                static_cast<double>(counts[i]) * inv);
        }
    }
    return out;
}

FullSample sample_full(const Circuit& circuit, std::uint64_t shots, Rng& rng, int limit) {
    return sample_distribution(exact_full_distribution(circuit, limit), shots, rng);
}

std::string variant_counts_to_json(const VariantCounts& vc) {
    using nlohmann::json;
    json preps = json::array();
    for (Prep p : vc.key.preparations) preps.push_back(to_string(p));
    json bases = json::array();
    for (Basis b : vc.key.bases) bases.push_back(to_string(b));
    json counts = json::object();
    const std::uint64_t r_mask = (std::uint64_t{1} << vc.num_quantum_outputs) - 1;
    for (std::size_t i = 0; i < vc.counts.size(); ++i) {
        if (vc.counts[i] == 0) continue;
        const std::string r = bitstring_to_string(i & r_mask, vc.num_quantum_outputs);
        const std::string s = bitstring_to_string(i >> vc.num_quantum_outputs, vc.num_classical_outputs);
        counts[r + ":" + s] = vc.counts[i];
    }
    return json{{"key", {{"preparations", preps}, {"bases", bases}}},
                {"n", vc.shots},
                {"num_classical_outputs", vc.num_classical_outputs},
                {"counts", counts}}
        .dump();
}

VariantCounts variant_counts_from_json(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        VariantCounts vc;
        for (const auto& p : doc.at("key").at("preparations")) {
            const std::string label = p.get<std::string>();
            auto it = std::find_if(std::begin(kAllPreps), std::end(kAllPreps),
                                   [&](Prep x) { return to_string(x) == label; });
            if (it == std::end(kAllPreps)) throw ParseError("$.key.preparations: unknown label " + label);
            vc.key.preparations.push_back(*it);
        }
        for (const auto& b : doc.at("key").at("bases")) {
            const std::string label = b.get<std::string>();
            auto it = std::find_if(std::begin(kAllBases), std::end(kAllBases),
                                   [&](Basis x) { return to_string(x) == label; });
            if (it == std::end(kAllBases)) throw ParseError("$.key.bases: unknown label " + label);
            vc.key.bases.push_back(*it);
        }
        vc.shots = doc.at("n").get<std::uint64_t>();
        vc.num_quantum_outputs = static_cast<int>(vc.key.bases.size());
        vc.num_classical_outputs = doc.at("num_classical_outputs").get<int>();
        vc.counts.assign(std::size_t{1} << (vc.num_quantum_outputs + vc.num_classical_outputs), 0);
        for (const auto& [k, v] : doc.at("counts").items()) {
            const auto colon = k.find(':');
            if (colon == std::string::npos) throw ParseError("$.counts: key \"" + k + "\" lacks ':'");
            const Bitstring r = bitstring_from_string(k.substr(0, colon));
            const Bitstring s = bitstring_from_string(k.substr(colon + 1));
            vc.counts.at(outcome_index(r, s, vc.num_quantum_outputs)) = v.get<std::uint64_t>();
        }
        return vc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("variant counts: ") + e.what());
    }
}

}  // namespace qcut
