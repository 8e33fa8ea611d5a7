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

#include "qcut/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "qcut/errors.hpp"
#include "qcut/metrics.hpp"
#include "qcut/mlft.hpp"
#include "qcut/recombine.hpp"

namespace qcut {

using nlohmann::json;

std::string to_string(Method m) {
    switch (m) {
        case Method::Full:
            return "full";
        case Method::Direct:
            return "direct";
        case Method::Mlft:
            return "mlft";
    }
    return "?";
}

Method method_from_string(const std::string& text) {
    if (text == "full") {
        return Method::Full;
    }
    if (text == "direct") {
        return Method::Direct;
    }
    if (text == "mlft") {
        return Method::Mlft;
    }
    throw std::invalid_argument("unknown method '" + text + "' (expected full, direct or mlft)");
}

void ExperimentConfig::validate() const {
    if (qubit_counts.empty() || fragment_counts.empty() || shot_budgets.empty()) {
        throw ValidationError("config: qubit_counts, fragment_counts and shot_budgets must be non-empty");
    }
    if (methods.empty()) {
        throw ValidationError("config: methods must be non-empty");
    }
    if (instances < 1) {
        throw ValidationError("config: instances must be at least 1");
    }
    for (std::uint64_t s : shot_budgets) {
        if (s == 0) {
            throw ValidationError("config: shot budgets must be positive");
        }
    }
    for (int f : fragment_counts) {
        for (int q : qubit_counts) {
            if (f < 2 || q < 2 * f) {
                throw ValidationError("config: Q=" + std::to_string(q) + ", F=" + std::to_string(f) +
                                      " needs F >= 2 and Q >= 2F");
            }
        }
    }
    if (statevector_limit < 1) {
        throw ValidationError("config: statevector_limit must be positive");
    }
}

ExperimentConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("config: JSON parse error at byte " + std::to_string(e.byte));
    }
    ExperimentConfig c;
    try {
        c.qubit_counts = doc.at("qubit_counts").get<std::vector<int>>();
        c.fragment_counts = doc.at("fragment_counts").get<std::vector<int>>();
        c.shot_budgets = doc.at("shot_budgets").get<std::vector<std::uint64_t>>();
        c.instances = doc.value("instances", 1);
        c.master_seed = doc.value("master_seed", std::uint64_t{0});
        if (doc.contains("methods")) {
            c.methods.clear();
            for (const auto& m : doc.at("methods")) {
                c.methods.push_back(method_from_string(m.get<std::string>()));
            }
        }
        c.statevector_limit = doc.value("statevector_limit", qcut::statevector_limit());
        if (doc.contains("circuit_cache_dir") && !doc.at("circuit_cache_dir").is_null()) {
            c.circuit_cache_dir = doc.at("circuit_cache_dir").get<std::string>();
        }
        const std::string rule = doc.value("identity_rule", std::string("average"));
        if (rule == "average") {
            c.identity_rule = IdentityRule::AverageBases;
        } else if (rule == "z") {
            c.identity_rule = IdentityRule::ZBasisOnly;
        } else {
            throw ParseError("config: identity_rule must be \"average\" or \"z\"");
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    json methods = json::array();
    for (Method m : c.methods) {
        methods.push_back(to_string(m));
    }
    json doc{{"qubit_counts", c.qubit_counts},
             {"fragment_counts", c.fragment_counts},
             {"shot_budgets", c.shot_budgets},
             {"instances", c.instances},
             {"master_seed", c.master_seed},
             {"methods", methods},
             {"statevector_limit", c.statevector_limit},
             {"identity_rule", c.identity_rule == IdentityRule::AverageBases ? "average" : "z"}};
    if (c.circuit_cache_dir) {
        doc["circuit_cache_dir"] = c.circuit_cache_dir->string();
    }
    return doc.dump(2);
}

CellKey key_of(const ResultRecord& r) {
    return CellKey{r.method, r.num_qubits, r.num_fragments, r.shots, r.instance};
}

std::uint64_t instance_seed(std::uint64_t master_seed, int num_qubits, int num_fragments, int instance) {
    return derive_stream_seed({master_seed, static_cast<std::uint64_t>(num_qubits),
                               static_cast<std::uint64_t>(num_fragments), static_cast<std::uint64_t>(instance)});
}

Rng full_stream(std::uint64_t seed, std::uint64_t shots) {
    return make_rng({seed, shots, static_cast<std::uint64_t>(StreamTag::Full)});
}

Rng variant_stream(std::uint64_t seed, std::uint64_t shots, int fragment, std::uint64_t variant_index) {
    return make_rng({seed, shots, static_cast<std::uint64_t>(StreamTag::Variant),
                     static_cast<std::uint64_t>(fragment), variant_index});
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomically(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + tmp.string());
        }
        out << text;
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

}  // namespace

ClusteredCircuit instance_circuit(std::uint64_t master_seed, int num_qubits, int num_fragments, int instance,
                                  const std::optional<std::filesystem::path>& cache_dir) {
    const std::uint64_t seed = instance_seed(master_seed, num_qubits, num_fragments, instance);
    std::filesystem::path cache_file;
    if (cache_dir) {
        cache_file = *cache_dir / ("ruc_s" + std::to_string(master_seed) + "_q" + std::to_string(num_qubits) + "_f" +
                                   std::to_string(num_fragments) + "_i" + std::to_string(instance) + ".json");
        if (std::filesystem::exists(cache_file)) {
            const json doc = json::parse(read_file(cache_file));
            ClusteredCircuit cc;
            cc.circuit = circuit_from_json(doc.at("circuit").dump());
            cc.cuts = cuts_from_json(doc.at("cuts").dump());
            cc.cluster_sizes = cluster_sizes(num_qubits, num_fragments);
            return cc;
        }
    }
    Rng rng = make_rng({seed, static_cast<std::uint64_t>(StreamTag::Circuit)});
    ClusteredCircuit cc = build_clustered_ruc(num_qubits, num_fragments, rng);
    if (cache_dir) {
        std::filesystem::create_directories(*cache_dir);
        const json doc{{"circuit", json::parse(circuit_to_json(cc.circuit))},
                       {"cuts", json::parse(cuts_to_json(cc.cuts))}};
        write_file_atomically(cache_file, doc.dump());
    }
    return cc;
}

FragmentGraph clustered_topology(int num_qubits, int num_fragments) {
    if (num_fragments < 2 || num_qubits < 2 * num_fragments) {
        throw std::invalid_argument("clustered_topology: need F >= 2 and Q >= 2F");
    }
    const std::vector<int> sizes = cluster_sizes(num_qubits, num_fragments);
    std::vector<int> first(num_fragments + 1, 0);
    for (int j = 0; j < num_fragments; ++j) {
        first[j + 1] = first[j] + sizes[j];
    }
    FragmentGraph graph;
    graph.num_qubits = num_qubits;
    for (int j = 0; j < num_fragments; ++j) {
        Fragment frag;
        std::vector<int> order;
        for (int k = 0; k < sizes[j]; ++k) {
            const int wire = first[j] + k;
            frag.wires.push_back(WireSegment{wire, (j > 0 && k == 0) ? 1 : 0});
            frag.classical_output_wires.push_back(k);
            order.push_back(wire);
        }
        if (j > 0) {
            frag.quantum_inputs.push_back(0);
        }
        if (j + 1 < num_fragments) {
            frag.wires.push_back(WireSegment{first[j + 1], 0});
            frag.quantum_outputs.push_back(sizes[j]);
        }
        frag.subcircuit.num_qubits = static_cast<int>(frag.wires.size());
        graph.fragments.push_back(std::move(frag));
        graph.output_order.push_back(std::move(order));
    }
    // Gate order of the construction: F first-layer blocks, then the F - 1
    // inter-cluster gates, each followed by its cut.
    for (int j = 0; j + 1 < num_fragments; ++j) {
        graph.stitches.push_back(Stitch{j, 0, j + 1, 0, CutPoint{first[j + 1], num_fragments + j}});
    }
    return graph;
}

std::uint64_t shots_per_variant(std::uint64_t shots, std::uint64_t variants) {
    const std::uint64_t n = variants == 0 ? 0 : shots / variants;
    if (n == 0) {
        throw InsufficientBudgetError("budget of " + std::to_string(shots) + " shots is below the variant count V=" +
                                      std::to_string(variants));
    }
    return n;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t value) {
    for (int byte = 0; byte < 8; ++byte) {
        h ^= (value >> (8 * byte)) & 0xffU;
        h *= kFnvPrime;
    }
}

std::string hex16(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::string counts_checksum(const std::vector<FragmentCounts>& counts) {
    std::uint64_t h = kFnvOffset;
    for (std::size_t f = 0; f < counts.size(); ++f) {
        fnv_mix(h, f);
        for (const auto& [key, vc] : counts[f]) {
            for (Prep p : key.preparations) {
                fnv_mix(h, static_cast<std::uint64_t>(p));
            }
            for (Basis b : key.bases) {
                fnv_mix(h, 16 + static_cast<std::uint64_t>(b));
            }
            fnv_mix(h, vc.shots);
            for (std::uint64_t c : vc.counts) {
                fnv_mix(h, c);
            }
        }
    }
    return hex16(h);
}

std::string counts_checksum(const std::map<Bitstring, std::uint64_t>& counts) {
    std::uint64_t h = kFnvOffset;
    for (const auto& [b, c] : counts) {
        fnv_mix(h, b);
        fnv_mix(h, c);
    }
    return hex16(h);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// 1 - F, with the rounding excess of F above one removed.
double infidelity_of(const Distribution& exact, const Distribution& estimate) {
    return std::max(0.0, fidelity(exact, estimate).infidelity);
}

struct Reconstruction {
    double infidelity = 1.0;
    double clipped_mass = 0.0;
};

Reconstruction reconstruct(const FragmentGraph& graph, const std::vector<FragmentFrequencies>& freqs, Method method,
                           IdentityRule rule, const Distribution& exact) {
    std::vector<FragmentTensor> tensors;
    for (int f = 0; f < static_cast<int>(graph.fragments.size()); ++f) {
        tensors.push_back(method == Method::Direct ? direct_fragment_tensor(graph, f, freqs[f], rule)
                                                   : mlft_fragment_tensor(graph, f, freqs[f]));
    }
    const RawReconstruction raw = contract(tensors, graph);
    Reconstruction out;
    out.clipped_mass = negative_mass(raw);
    try {
        out.infidelity = infidelity_of(exact, clip_and_normalize(raw));
    } catch (const DegenerateReconstructionError&) {
        spdlog::warn("{} reconstruction has no positive entries; recording infidelity 1", to_string(method));
        out.infidelity = 1.0;
    }
    return out;
}

}  // namespace

std::vector<ResultRecord> run_instance(const ExperimentConfig& config, int num_qubits, int num_fragments,
                                       int instance, const std::function<bool(const CellKey&)>& skip) {
    auto wanted = [&](Method m, std::uint64_t s) {
        return !skip || !skip(CellKey{m, num_qubits, num_fragments, s, instance});
    };

    const std::uint64_t seed = instance_seed(config.master_seed, num_qubits, num_fragments, instance);
    const ClusteredCircuit cc =
        instance_circuit(config.master_seed, num_qubits, num_fragments, instance, config.circuit_cache_dir);
    const Distribution exact = exact_full_distribution(cc.circuit, config.statevector_limit);
    const FragmentGraph graph = cut_circuit(cc.circuit, cc.cuts);
    const std::uint64_t num_variants = graph.variant_count();

    const bool any_cut_method = std::any_of(config.methods.begin(), config.methods.end(),
                                            [](Method m) { return m != Method::Full; });
    // Exact variant distributions are shared by every budget.
    std::vector<std::vector<VariantDistribution>> variant_dists(graph.fragments.size());
    if (any_cut_method) {
        for (std::size_t f = 0; f < graph.fragments.size(); ++f) {
            for (const VariantKey& key : enumerate_variants(graph.fragments[f])) {
                variant_dists[f].push_back(exact_variant_distribution(graph.fragments[f], key, config.statevector_limit));
            }
        }
    }

    std::vector<ResultRecord> rows;
    for (std::uint64_t shots : config.shot_budgets) {
        ResultRecord base;
        base.num_qubits = num_qubits;
        base.num_fragments = num_fragments;
        base.shots = shots;
        base.instance = instance;
        base.seed = seed;

        std::optional<std::vector<FragmentFrequencies>> freqs;
        std::string cut_checksum;
        std::uint64_t n = 0;
        double sampling_time = 0.0;
        auto ensure_counts = [&] {
            if (freqs) {
                return;
            }
            const auto start = Clock::now();
            n = shots_per_variant(shots, num_variants);
            if (shots > n * num_variants) {
                spdlog::debug("Q={} F={} S={}: {} shots unused (n={}, V={})", num_qubits, num_fragments, shots,
                              shots - n * num_variants, n, num_variants);
            }
            std::vector<FragmentCounts> counts(graph.fragments.size());
            for (std::size_t f = 0; f < graph.fragments.size(); ++f) {
                for (std::size_t v = 0; v < variant_dists[f].size(); ++v) {
                    Rng rng = variant_stream(seed, shots, static_cast<int>(f), v);
                    counts[f].emplace(variant_dists[f][v].key, sample_variant(variant_dists[f][v], n, rng));
                }
            }
            cut_checksum = counts_checksum(counts);
            freqs.emplace();
            for (const FragmentCounts& fc : counts) {
                freqs->push_back(frequencies_from_counts(fc));
            }
            sampling_time = seconds_since(start);
        };

        for (Method method : config.methods) {
            if (!wanted(method, shots)) {
                continue;
            }
            ResultRecord row = base;
            row.method = method;
            if (method == Method::Full) {
                const auto start = Clock::now();
                Rng rng = full_stream(seed, shots);
                const FullSample sample = sample_distribution(exact, shots, rng);
                row.shots_per_variant = shots;
                row.variants = 1;
                row.cuts = 0;
                row.infidelity = infidelity_of(exact, sample.frequencies);
                row.counts_checksum = counts_checksum(sample.counts);
                row.wall_time_s = seconds_since(start);
            } else {
                ensure_counts();
                const auto start = Clock::now();
                const Reconstruction rec = reconstruct(graph, *freqs, method, config.identity_rule, exact);
                row.shots_per_variant = n;
                row.variants = num_variants;
                row.cuts = graph.num_stitches();
                row.infidelity = rec.infidelity;
                row.clipped_mass = rec.clipped_mass;
                row.counts_checksum = cut_checksum;
                row.wall_time_s = sampling_time + seconds_since(start);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

ResultRecord run_cell(const ExperimentConfig& config, int num_qubits, int num_fragments, std::uint64_t shots,
                      int instance, Method method) {
    ExperimentConfig single = config;
    single.shot_budgets = {shots};
    single.methods = {method};
    std::vector<ResultRecord> rows = run_instance(single, num_qubits, num_fragments, instance);
    return rows.front();
}

std::string format_record(const ResultRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%llu,%llu,%llu,%d,%d,%llu,%.17g,%.17g,%.6f,%s", to_string(r.method).c_str(),
                  r.num_qubits, r.num_fragments, static_cast<unsigned long long>(r.shots),
                  static_cast<unsigned long long>(r.shots_per_variant), static_cast<unsigned long long>(r.variants),
                  r.cuts, r.instance, static_cast<unsigned long long>(r.seed), r.infidelity, r.clipped_mass,
                  r.wall_time_s, r.counts_checksum.c_str());
    return buf;
}

namespace {

template <typename T>
T parse_field(const std::string& text, std::size_t line, const char* name) {
    T value{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ParseError("line " + std::to_string(line) + ": bad " + name + " '" + text + "'");
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

}  // namespace

std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::vector<ResultRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1) {
            if (line != kCsvHeader) {
                throw ParseError(path.string() + ": line 1: unexpected header");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 13) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + ": expected 13 fields, found " +
                             std::to_string(f.size()));
        }
        try {
            ResultRecord r;
            try {
                r.method = method_from_string(f[0]);
            } catch (const std::invalid_argument& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
            r.num_qubits = parse_field<int>(f[1], line_no, "Q");
            r.num_fragments = parse_field<int>(f[2], line_no, "F");
            r.shots = parse_field<std::uint64_t>(f[3], line_no, "S");
            r.shots_per_variant = parse_field<std::uint64_t>(f[4], line_no, "n");
            r.variants = parse_field<std::uint64_t>(f[5], line_no, "V");
            r.cuts = parse_field<int>(f[6], line_no, "K");
            r.instance = parse_field<int>(f[7], line_no, "instance");
            r.seed = parse_field<std::uint64_t>(f[8], line_no, "seed");
            r.infidelity = parse_field<double>(f[9], line_no, "infidelity");
            r.clipped_mass = parse_field<double>(f[10], line_no, "clipped_mass");
            r.wall_time_s = parse_field<double>(f[11], line_no, "wall_time_s");
            r.counts_checksum = f[12];
            records.push_back(std::move(r));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }
    if (line_no == 0) {
        throw ParseError(path.string() + ": line 1: missing header");
    }
    return records;
}

SweepOutcome run_sweep(const ExperimentConfig& config, const std::filesystem::path& out, int jobs) {
    config.validate();
    std::set<CellKey> existing;
    const bool has_content = std::filesystem::exists(out) && std::filesystem::file_size(out) > 0;
    if (has_content) {
        for (const ResultRecord& r : read_results_csv(out)) {
            existing.insert(key_of(r));
        }
    }
    std::ofstream csv(out, std::ios::app);
    if (!csv) {
        throw IoError("cannot open " + out.string() + " for writing");
    }
    if (!has_content) {
        csv << kCsvHeader << '\n';
    }

    struct Unit {
        int q;
        int f;
        int instance;
    };
    std::vector<Unit> units;
    SweepOutcome outcome;
    auto skip = [&existing](const CellKey& k) { return existing.contains(k); };
    for (int q : config.qubit_counts) {
        for (int f : config.fragment_counts) {
            for (int i = 0; i < config.instances; ++i) {
                std::size_t present = 0;
                for (std::uint64_t s : config.shot_budgets) {
                    for (Method m : config.methods) {
                        present += skip(CellKey{m, q, f, s, i}) ? 1 : 0;
                    }
                }
                outcome.rows_skipped += present;
                if (present < config.shot_budgets.size() * config.methods.size()) {
                    units.push_back(Unit{q, f, i});
                }
            }
        }
    }
    spdlog::info("sweep: {} instance units to run, {} rows already present in {}", units.size(),
                 outcome.rows_skipped, out.string());

    std::vector<std::optional<std::vector<ResultRecord>>> results(units.size());
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<std::size_t> next_unit{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t u = next_unit.fetch_add(1);
            if (u >= units.size()) {
                return;
            }
            try {
                auto rows = run_instance(config, units[u].q, units[u].f, units[u].instance, skip);
                std::lock_guard lock(mutex);
                results[u] = std::move(rows);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed.store(true);
            }
            ready.notify_all();
        }
    };

    const int num_threads = std::max(1, std::min<int>(jobs, static_cast<int>(units.size())));
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < num_threads; ++t) {
            pool.emplace_back(worker);
        }
        // Write in unit order regardless of completion order.
        for (std::size_t u = 0; u < units.size(); ++u) {
            std::vector<ResultRecord> rows;
            {
                std::unique_lock lock(mutex);
                ready.wait(lock, [&] { return results[u].has_value() || failed.load(); });
                if (!results[u]) {
                    break;
                }
                rows = std::move(*results[u]);
                results[u].reset();
            }
            for (const ResultRecord& r : rows) {
                csv << format_record(r) << '\n';
            }
            csv.flush();
            if (!csv) {
                failed.store(true);
                throw IoError("write failed for " + out.string());
            }
            outcome.rows_written += rows.size();
            spdlog::info("sweep: [{}/{}] Q={} F={} instance={} ({} rows)", u + 1, units.size(), units[u].q,
                         units[u].f, units[u].instance, rows.size());
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return outcome;
}

void set_log_level(const std::string& level) { spdlog::set_level(spdlog::level::from_str(level)); }

}  // namespace qcut
