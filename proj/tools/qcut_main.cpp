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

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcut/errors.hpp"
#include "qcut/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qcut::IoError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qcut: circuit cutting experiments with direct and maximum-likelihood reconstruction"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")->capture_default_str();

    int qubits = 8;
    int fragments = 2;
    std::uint64_t seed = 0;
    int instance = 0;

    auto* generate = app.add_subcommand("generate", "Emit a clustered random circuit and its cuts as JSON");
    std::string generate_out;
    generate->add_option("--qubits", qubits, "Qubit count Q")->required();
    generate->add_option("--fragments", fragments, "Fragment count F")->required();
    generate->add_option("--seed", seed, "Master seed")->capture_default_str();
    generate->add_option("--instance", instance, "Instance index")->capture_default_str();
    generate->add_option("--out", generate_out, "Output file (default: stdout)");

    auto* run = app.add_subcommand("run", "Run one (method, Q, F, S, instance) cell and print its CSV row");
    std::uint64_t shots = 100000;
    std::string method = "mlft";
    run->add_option("--qubits", qubits, "Qubit count Q")->required();
    run->add_option("--fragments", fragments, "Fragment count F")->required();
    run->add_option("--shots", shots, "Total shot budget S")->required();
    run->add_option("--method", method, "full, direct or mlft")->capture_default_str();
    run->add_option("--seed", seed, "Master seed")->capture_default_str();
    run->add_option("--instance", instance, "Instance index")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Run every cell of a configuration, appending to a CSV");
    std::string config_path;
    std::string sweep_out;
    int jobs = 1;
    sweep->add_option("--config", config_path, "Experiment configuration JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", sweep_out, "Results CSV (resumed if present)")->required();
    sweep->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "Summarize a results CSV into tables and charts");
    std::string report_in;
    std::string report_dir = "reports";
    bool svg = false;
    report->add_option("--in", report_in, "Results CSV")->required()->check(CLI::ExistingFile);
    report->add_option("--out-dir", report_dir, "Output directory")->capture_default_str();
    report->add_flag("--svg", svg, "Also render SVG charts");

    CLI11_PARSE(app, argc, argv);

    try {
        qcut::set_log_level(log_level);
        if (*generate) {
            const qcut::ClusteredCircuit cc = qcut::instance_circuit(seed, qubits, fragments, instance);
            const nlohmann::json doc{{"circuit", nlohmann::json::parse(qcut::circuit_to_json(cc.circuit))},
                                     {"cuts", nlohmann::json::parse(qcut::cuts_to_json(cc.cuts))},
                                     {"cluster_sizes", cc.cluster_sizes}};
            if (generate_out.empty()) {
                std::cout << doc.dump() << '\n';
            } else {
                std::ofstream out(generate_out);
                if (!out) {
                    throw qcut::IoError("cannot write " + generate_out);
                }
                out << doc.dump() << '\n';
            }
        } else if (*run) {
            qcut::ExperimentConfig config;
            config.master_seed = seed;
            const qcut::ResultRecord record =
                qcut::run_cell(config, qubits, fragments, shots, instance, qcut::method_from_string(method));
            std::cout << qcut::kCsvHeader << '\n' << qcut::format_record(record) << '\n';
        } else if (*sweep) {
            const qcut::ExperimentConfig config = qcut::config_from_json(read_file(config_path));
            const qcut::SweepOutcome outcome = qcut::run_sweep(config, sweep_out, jobs);
            std::cerr << "wrote " << outcome.rows_written << " rows, skipped " << outcome.rows_skipped
                      << " existing rows\n";
        } else if (*report) {
            const qcut::ReportOutcome outcome = qcut::write_report(report_in, report_dir, svg);
            for (const auto& f : outcome.files) {
                std::cout << f.string() << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "qcut: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
