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

#ifndef QCUT_HARNESS_HPP
#define QCUT_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcut/circuit.hpp"
#include "qcut/direct.hpp"
#include "qcut/fragsim.hpp"

namespace qcut {

enum class Method { Full, Direct, Mlft };

std::string to_string(Method m);
/// Accepts "full", "direct", "mlft"; throws std::invalid_argument otherwise.
Method method_from_string(const std::string& text);

struct ExperimentConfig {
    std::vector<int> qubit_counts;
    std::vector<int> fragment_counts;
    std::vector<std::uint64_t> shot_budgets;
    int instances = 1;
    std::uint64_t master_seed = 0;
    std::vector<Method> methods{Method::Full, Method::Direct, Method::Mlft};
    int statevector_limit = qcut::statevector_limit();
    /// Optional directory of cached circuits keyed by (seed, Q, F, instance).
    std::optional<std::filesystem::path> circuit_cache_dir;
    IdentityRule identity_rule = IdentityRule::AverageBases;

    /// Throws ValidationError on empty lists or non-positive counts.
    void validate() const;
};

/// Keys mirror the field names; "methods" holds strings and
/// "identity_rule" is "average" or "z".
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

struct ResultRecord {
    Method method = Method::Full;
    int num_qubits = 0;
    int num_fragments = 0;
    std::uint64_t shots = 0;
    /// Shots per variant; equals `shots` for the full method.
    std::uint64_t shots_per_variant = 0;
    /// Total variant count; 1 for the full method.
    std::uint64_t variants = 0;
    int cuts = 0;
    int instance = 0;
    std::uint64_t seed = 0;
    double infidelity = 0.0;
    double clipped_mass = 0.0;
    double wall_time_s = 0.0;
    std::string counts_checksum;
};

/// Uniquely identifies a row of a sweep.
struct CellKey {
    Method method;
    int num_qubits;
    int num_fragments;
    std::uint64_t shots;
    int instance;

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

CellKey key_of(const ResultRecord& record);

/// Per-instance stream seed: derive_stream_seed({master, Q, F, instance}).
std::uint64_t instance_seed(std::uint64_t master_seed, int num_qubits, int num_fragments, int instance);

/// Shot stream for the full method at budget S.
Rng full_stream(std::uint64_t instance_seed, std::uint64_t shots);
/// Shot stream for one variant of one fragment at budget S.
Rng variant_stream(std::uint64_t instance_seed, std::uint64_t shots, int fragment, std::uint64_t variant_index);

/// The instance's circuit, drawn from its circuit stream. With a cache
/// directory, the circuit is read from or written to a JSON file there.
ClusteredCircuit instance_circuit(std::uint64_t master_seed, int num_qubits, int num_fragments, int instance,
                                  const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

/// Fragment structure of build_clustered_ruc(Q, F) without gate matrices.
FragmentGraph clustered_topology(int num_qubits, int num_fragments);

/// floor(S / V); throws InsufficientBudgetError naming V when it is zero.
std::uint64_t shots_per_variant(std::uint64_t shots, std::uint64_t variants);

/// 64-bit FNV-1a over counts as 16 hex digits.
std::string counts_checksum(const std::vector<FragmentCounts>& counts);
std::string counts_checksum(const std::map<Bitstring, std::uint64_t>& counts);

/// All requested methods for one circuit instance and every shot budget.
///
/// The circuit is built once; direct and mlft consume the same counts at
/// each budget. Rows come out ordered by budget, then by method in the
/// order given. `skip` filters rows that already exist.
std::vector<ResultRecord> run_instance(const ExperimentConfig& config, int num_qubits, int num_fragments,
                                       int instance, const std::function<bool(const CellKey&)>& skip = {});

/// One row.
ResultRecord run_cell(const ExperimentConfig& config, int num_qubits, int num_fragments, std::uint64_t shots,
                      int instance, Method method);

inline constexpr const char* kCsvHeader =
    "method,Q,F,S,n,V,K,instance,seed,infidelity,clipped_mass,wall_time_s,counts_checksum";

std::string format_record(const ResultRecord& record);
/// Throws ParseError naming the line number.
std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path);

struct SweepOutcome {
    std::size_t rows_written = 0;
    std::size_t rows_skipped = 0;
};

/// Runs every (method, Q, F, S, instance) cell and appends rows to `out`.
///
/// Rows already present in `out` are skipped, so an interrupted sweep
/// resumes where it stopped. Instances run on `jobs` threads but rows are
/// written in a fixed order, so the file depends only on the configuration.
SweepOutcome run_sweep(const ExperimentConfig& config, const std::filesystem::path& out, int jobs = 1);

struct SummaryRow {
    Method method = Method::Full;
    int num_qubits = 0;
    int num_fragments = 0;
    std::uint64_t shots = 0;
    std::uint64_t shots_per_variant = 0;
    std::uint64_t variants = 0;
    int cuts = 0;
    std::size_t instances = 0;
    double mean_infidelity = 0.0;
    double std_infidelity = 0.0;
    double mean_clipped_mass = 0.0;
    /// (2^Q - 1) / (4 S).
    double estimate_full = 0.0;
    /// 2^Q / S.
    double estimate_full_rough = 0.0;
    /// sum_f 2^{C_o} / n and its 4^K bound; zero for the full method.
    double estimate_cut = 0.0;
    double bound_cut = 0.0;
};

/// Mean and spread per (method, Q, F, S), ordered by that key.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

struct ReportOutcome {
    std::vector<std::filesystem::path> files;
    std::size_t summary_rows = 0;
};

/// Writes summary.csv, one panel per fixed (F, Q) over S and per fixed
/// (F, S) over Q, and optionally an SVG chart per panel.
ReportOutcome write_report(const std::filesystem::path& csv, const std::filesystem::path& out_dir,
                           bool svg = false);

/// "trace", "debug", "info", "warn", "error", "off".
void set_log_level(const std::string& level);

}  // namespace qcut

#endif  // QCUT_HARNESS_HPP
