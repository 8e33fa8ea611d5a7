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
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "qcut/errors.hpp"

namespace qcut {

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix input_state(const VariantKey& key) {
    ComplexMatrix rho = ComplexMatrix::Identity(1, 1);
    for (Prep p : key.preparations) {
        const Eigen::Vector2cd v = prep_state(p);
        rho = kron(rho, v * v.adjoint());
    }
    return rho;
}

ComplexMatrix output_projector(const VariantKey& key, std::uint64_t r_bits) {
    ComplexMatrix pi = ComplexMatrix::Identity(1, 1);
    for (std::size_t k = 0; k < key.bases.size(); ++k) {
        const Eigen::Matrix2cd rot = basis_rotation(key.bases[k]);
        const Eigen::Index b = static_cast<Eigen::Index>((r_bits >> k) & 1U);
        // Projector onto R^dagger |b>.
        const Eigen::Vector2cd v = rot.row(b).adjoint();
        pi = kron(pi, v * v.adjoint());
    }
    return pi;
}

/// Real coordinates of a Hermitian d x d matrix: d diagonal entries, then
/// (re, im) of each upper-triangle entry in row-major order.
struct HermitianCoordinates {
    int d;

    int size() const { return d * d; }

    /// Coefficients c with tr[H A] = c . theta(H), for Hermitian A.
    Eigen::VectorXd trace_functional(const ComplexMatrix& a) const {
        Eigen::VectorXd c(size());
        int idx = 0;
        for (int i = 0; i < d; ++i) {
            c[idx++] = a(i, i).real();
        }
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                const Complex z = a(j, i);
                c[idx++] = 2.0 * z.real();
                c[idx++] = -2.0 * z.imag();
            }
        }
        return c;
    }

    ComplexMatrix to_matrix(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
        ComplexMatrix h(d, d);
        int idx = 0;
        for (int i = 0; i < d; ++i) {
            h(i, i) = theta[idx++];
        }
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                const Complex z(theta[idx], theta[idx + 1]);
                idx += 2;
                h(i, j) = z;
                h(j, i) = std::conj(z);
            }
        }
        return h;
    }
};

ComplexMatrix pauli_string(std::span<const Pauli> paulis, bool transpose) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    for (Pauli p : paulis) {
        const Eigen::Matrix2cd& base = pauli_matrix(p);
        m = kron(m, transpose ? ComplexMatrix(base.transpose()) : ComplexMatrix(base));
    }
    return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

double ChoiBlocks::total_trace() const {
    double t = 0.0;
    for (const auto& [s, block] : blocks) {
        t += block.trace().real();
    }
    return t;
}

ChoiBlocks fit_ansatz(const Fragment& fragment, const FragmentFrequencies& data) {
    const int qi = fragment.num_quantum_inputs();
    const int qo = fragment.num_quantum_outputs();
    const int co = fragment.classical_output_count();
    const HermitianCoordinates coords{1 << (qi + qo)};
    const double input_scale = static_cast<double>(1 << qi);
    const std::vector<VariantKey> variants = enumerate_variants(fragment);
    const std::uint64_t outcomes_per_variant = std::uint64_t{1} << qo;
    const auto num_rows = static_cast<Eigen::Index>(variants.size() * outcomes_per_variant);
    const auto num_s = static_cast<Eigen::Index>(std::size_t{1} << co);

    Eigen::MatrixXd design(num_rows, coords.size());
    Eigen::MatrixXd targets(num_rows, num_s);
    Eigen::Index row = 0;
    for (const VariantKey& key : variants) {
        auto it = data.find(key);
        if (it == data.end()) {
            throw IncompleteDataError("fit_ansatz: missing variant " + to_string(key));
        }
        if (it->second.size() != (std::size_t{1} << (qo + co))) {
            throw IncompleteDataError("fit_ansatz: variant " + to_string(key) + " has the wrong outcome count");
        }
        const ComplexMatrix rho_t = input_state(key).transpose();
        for (std::uint64_t r = 0; r < outcomes_per_variant; ++r, ++row) {
            design.row(row) = input_scale * coords.trace_functional(kron(rho_t, output_projector(key, r)));
            for (Eigen::Index s = 0; s < num_s; ++s) {
                targets(row, s) = it->second[outcome_index(r, static_cast<Bitstring>(s), qo)];
            }
        }
    }

    const Eigen::MatrixXd normal = design.transpose() * design;
    const Eigen::MatrixXd rhs = design.transpose() * targets;
    Eigen::MatrixXd theta;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    const Eigen::VectorXd pivots = ldlt.vectorD();
    const double max_pivot = pivots.cwiseAbs().maxCoeff();
    if (ldlt.info() == Eigen::Success && pivots.minCoeff() > 1e-10 * max_pivot) {
        theta = ldlt.solve(rhs);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
        cod.setThreshold(1e-10);
        if (cod.rank() < coords.size()) {
            throw FitError("fit_ansatz: design matrix has rank " + std::to_string(cod.rank()) + " < " +
                           std::to_string(coords.size()));
        }
        theta = cod.solve(targets);
    }

    ChoiBlocks out;
    out.num_inputs = qi;
    out.num_outputs = qo;
    out.num_classical_bits = co;
    for (Eigen::Index s = 0; s < num_s; ++s) {
        if ((targets.col(s).array() == 0.0).all()) {
            continue;
        }
        out.blocks.emplace(static_cast<Bitstring>(s), coords.to_matrix(theta.col(s)));
    }
    return out;
}

ChoiBlocks fit_ansatz(const Fragment& fragment, const FragmentCounts& counts) {
    return fit_ansatz(fragment, frequencies_from_counts(counts));
}

std::vector<double> zero_negative_and_redistribute(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) {
        return out;
    }
    // A uniform shift preserves order, so the most negative active entry is
    // always the next one in ascending order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    double active_sum = std::accumulate(values.begin(), values.end(), 0.0);
    std::size_t lo = 0;
    double shift = 0.0;
    while (true) {
        const std::size_t active = n - lo;
        shift = (1.0 - active_sum) / static_cast<double>(active);
        if (values[order[lo]] + shift >= 0.0 || active == 1) {
            break;
        }
        active_sum -= values[order[lo]];
        ++lo;
    }
    // Recompute the final shift from scratch to shed accumulated rounding.
    double exact_sum = 0.0;
    for (std::size_t i = lo; i < n; ++i) {
        exact_sum += values[order[i]];
    }
    shift = (1.0 - exact_sum) / static_cast<double>(n - lo);
    for (std::size_t i = lo; i < n; ++i) {
        out[order[i]] = values[order[i]] + shift;
    }
    return out;
}

ChoiBlocks project_maximum_likelihood(const ChoiBlocks& ansatz) {
    struct Decomposed {
        Bitstring s;
        ComplexMatrix vectors;
        std::size_t offset;
    };
    std::vector<Decomposed> parts;
    std::vector<double> spectrum;
    for (const auto& [s, block] : ansatz.blocks) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian_part(block));
        parts.push_back(Decomposed{s, eig.eigenvectors(), spectrum.size()});
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
            spectrum.push_back(eig.eigenvalues()[i]);
        }
    }
    const std::vector<double> projected = zero_negative_and_redistribute(spectrum);

    ChoiBlocks out;
    out.num_inputs = ansatz.num_inputs;
    out.num_outputs = ansatz.num_outputs;
    out.num_classical_bits = ansatz.num_classical_bits;
    for (const Decomposed& part : parts) {
        const Eigen::Index d = part.vectors.cols();
        Eigen::VectorXd lambda(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            lambda[i] = projected[part.offset + static_cast<std::size_t>(i)];
        }
        ComplexMatrix block = part.vectors * lambda.cast<Complex>().asDiagonal() * part.vectors.adjoint();
        out.blocks.emplace(part.s, hermitian_part(block));
    }
    return out;
}

FragmentTensor tensor_from_choi(const ChoiBlocks& blocks, const Fragment& fragment, std::vector<CutAxis> axes,
                                int fragment_id) {
    const int qi = blocks.num_inputs;
    const int qo = blocks.num_outputs;
    if (qi != fragment.num_quantum_inputs() || qo != fragment.num_quantum_outputs()) {
        throw std::invalid_argument("tensor_from_choi: blocks do not match fragment");
    }
    if (axes.empty()) {
        axes = standalone_axes(fragment);
    }
    const int k_axes = qi + qo;
    const std::size_t num_cols = std::size_t{1} << (2 * k_axes);
    const double input_scale = static_cast<double>(1 << qi);

    // Transposed operators so that tr[B O] = sum(B .* O^T).
    std::vector<ComplexMatrix> operators_t(num_cols);
    std::vector<Pauli> paulis(k_axes);
    for (std::size_t c = 0; c < num_cols; ++c) {
        std::size_t rest = c;
        for (int k = k_axes - 1; k >= 0; --k, rest /= 4) {
            paulis[k] = static_cast<Pauli>(rest % 4);
        }
        const ComplexMatrix op =
            kron(pauli_string(std::span<const Pauli>(paulis).first(qi), true),
                 pauli_string(std::span<const Pauli>(paulis).subspan(qi), false));
        operators_t[c] = op.transpose();
    }

    FragmentTensor tensor;
    tensor.fragment = fragment_id;
    tensor.axes = std::move(axes);
    tensor.num_classical_bits = blocks.num_classical_bits;
    tensor.values.resize(static_cast<Eigen::Index>(blocks.blocks.size()), static_cast<Eigen::Index>(num_cols));
    Eigen::Index row = 0;
    for (const auto& [s, block] : blocks.blocks) {
        tensor.bitstrings.push_back(s);
        for (std::size_t c = 0; c < num_cols; ++c) {
            tensor.values(row, static_cast<Eigen::Index>(c)) =
                input_scale * block.cwiseProduct(operators_t[c]).sum().real();
        }
        ++row;
    }
    return tensor;
}

VariantDistribution predict_variant_distribution(const ChoiBlocks& blocks, const Fragment& fragment,
                                                 const VariantKey& key) {
    const int qo = fragment.num_quantum_outputs();
    VariantDistribution dist;
    dist.key = key;
    dist.num_quantum_outputs = qo;
    dist.num_classical_outputs = fragment.classical_output_count();
    dist.probs.assign(std::size_t{1} << (qo + dist.num_classical_outputs), 0.0);
    const ComplexMatrix rho_t = input_state(key).transpose();
    const double input_scale = static_cast<double>(1 << blocks.num_inputs);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << qo); ++r) {
        const ComplexMatrix op_t = kron(rho_t, output_projector(key, r)).transpose();
        for (const auto& [s, block] : blocks.blocks) {
            dist.probs[outcome_index(r, s, qo)] = input_scale * block.cwiseProduct(op_t).sum().real();
        }
    }
    return dist;
}

FragmentTensor mlft_fragment_tensor(const FragmentGraph& graph, int fragment, const FragmentFrequencies& data) {
    const Fragment& frag = graph.fragments.at(fragment);
    return tensor_from_choi(project_maximum_likelihood(fit_ansatz(frag, data)), frag, graph.cut_axes(fragment),
                            fragment);
}

std::string choi_blocks_to_json(const ChoiBlocks& blocks) {
    using nlohmann::json;
    json out_blocks = json::object();
    for (const auto& [s, block] : blocks.blocks) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < block.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < block.cols(); ++j) {
                row.push_back(json::array({block(i, j).real(), block(i, j).imag()}));
            }
            rows.push_back(std::move(row));
        }
        out_blocks[bitstring_to_string(s, blocks.num_classical_bits)] = std::move(rows);
    }
    return json{{"q_in", blocks.num_inputs},
                {"q_out", blocks.num_outputs},
                {"c_out", blocks.num_classical_bits},
                {"blocks", std::move(out_blocks)}}
        .dump();
}

ChoiBlocks choi_blocks_from_json(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        ChoiBlocks out;
        out.num_inputs = doc.at("q_in").get<int>();
        out.num_outputs = doc.at("q_out").get<int>();
        out.num_classical_bits = doc.value("c_out", 0);
        const int d = out.dim();
        for (const auto& [key, rows] : doc.at("blocks").items()) {
            if (static_cast<int>(rows.size()) != d) {
                throw ParseError("$.blocks." + key + ": expected " + std::to_string(d) + " rows");
            }
            ComplexMatrix block(d, d);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    const json& e = rows.at(i).at(j);
                    block(i, j) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
                }
            }
            if (out.num_classical_bits == 0) {
                out.num_classical_bits = static_cast<int>(key.size());
            }
            out.blocks.emplace(bitstring_from_string(key), std::move(block));
        }
        return out;
    } catch (const json::exception& e) {
        throw ParseError(std::string("choi blocks: ") + e.what());
    }
}

}  // namespace qcut
