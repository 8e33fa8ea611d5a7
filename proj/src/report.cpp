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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <spdlog/spdlog.h>

#include "qcut/errors.hpp"
#include "qcut/harness.hpp"
#include "qcut/metrics.hpp"

namespace qcut {

namespace {

using SummaryKey = std::tuple<Method, int, int, std::uint64_t>;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

constexpr const char* kSummaryHeader =
    "method,Q,F,S,n,V,K,instances,mean_infidelity,std_infidelity,mean_clipped_mass,"
    "estimate_full,estimate_full_rough,estimate_cut,bound_cut";

std::string format_summary(const SummaryRow& r) {
    std::ostringstream out;
    out << to_string(r.method) << ',' << r.num_qubits << ',' << r.num_fragments << ',' << r.shots << ','
        << r.shots_per_variant << ',' << r.variants << ',' << r.cuts << ',' << r.instances << ','
        << format_double(r.mean_infidelity) << ',' << format_double(r.std_infidelity) << ','
        << format_double(r.mean_clipped_mass) << ',' << format_double(r.estimate_full) << ','
        << format_double(r.estimate_full_rough) << ',' << format_double(r.estimate_cut) << ','
        << format_double(r.bound_cut);
    return out.str();
}

void write_summary_file(const std::filesystem::path& path, const std::vector<const SummaryRow*>& rows) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << kSummaryHeader << '\n';
    for (const SummaryRow* r : rows) {
        out << format_summary(*r) << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

/// Log-log line chart: one solid series per method and a dashed analytic
/// estimate per method.
std::string render_svg(const std::string& title, const std::string& x_label, bool log2_x,
                       const std::vector<const SummaryRow*>& rows, double (*x_of)(const SummaryRow&)) {
    constexpr double kWidth = 640;
    constexpr double kHeight = 420;
    constexpr double kLeft = 70;
    constexpr double kRight = 130;
    constexpr double kTop = 40;
    constexpr double kBottom = 50;

    struct Series {
        std::vector<std::pair<double, double>> measured;
        std::vector<std::pair<double, double>> estimate;
    };
    std::map<Method, Series> series;
    double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
    auto tx = [&](double x) { return log2_x ? x : std::log10(x); };
    for (const SummaryRow* r : rows) {
        const double x = tx(x_of(*r));
        const double est = r->method == Method::Full ? r->estimate_full : r->estimate_cut;
        Series& s = series[r->method];
        if (r->mean_infidelity > 0) {
            s.measured.emplace_back(x, std::log10(r->mean_infidelity));
        }
        if (est > 0) {
            s.estimate.emplace_back(x, std::log10(est));
        }
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        for (double y : {r->mean_infidelity, est}) {
            if (y > 0) {
                y_min = std::min(y_min, std::log10(y));
                y_max = std::max(y_max, std::log10(y));
            }
        }
    }
    if (!(x_max > x_min)) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (!(y_max > y_min)) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    y_min = std::floor(y_min);
    y_max = std::ceil(y_max);
    auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight); };
    auto py = [&](double y) { return kHeight - kBottom - (y - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom); };

    static const std::map<Method, const char*> kColors = {
        {Method::Full, "#1f77b4"}, {Method::Direct, "#d62728"}, {Method::Mlft, "#2ca02c"}};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\"/>\n";
    for (double y = y_min; y <= y_max + 1e-9; y += 1.0) {
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">1e" << y
            << "</text>\n";
    }
    for (const SummaryRow* r : rows) {
        const double x = tx(x_of(*r));
        svg << "<text x=\"" << px(x) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
            << format_double(x_of(*r)) << "</text>\n";
    }
    svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    svg << "<text x=\"16\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 16 " << kHeight / 2
        << ")\" text-anchor=\"middle\">mean infidelity</text>\n";

    int legend_row = 0;
    for (auto& [method, s] : series) {
        const char* color = kColors.at(method);
        for (auto* points : {&s.measured, &s.estimate}) {
            std::sort(points->begin(), points->end());
            points->erase(std::unique(points->begin(), points->end()), points->end());
            if (points->empty()) {
                continue;
            }
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
            if (points == &s.estimate) {
                svg << " stroke-dasharray=\"6 4\"";
            }
            svg << " points=\"";
            for (const auto& [x, y] : *points) {
                svg << px(x) << ',' << py(y) << ' ';
            }
            svg << "\"/>\n";
            if (points == &s.measured) {
                for (const auto& [x, y] : *points) {
                    svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color
                        << "\"/>\n";
                }
            }
        }
        const double ly = kTop + 20.0 * legend_row++;
        svg << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 30
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << ly + 4 << "\">" << to_string(method)
            << "</text>\n";
    }
    svg << "<text x=\"" << kWidth - kRight + 10 << "\" y=\"" << kTop + 20.0 * legend_row + 4
        << "\">dashed: estimate</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
    std::map<SummaryKey, std::vector<const ResultRecord*>> groups;
    for (const ResultRecord& r : records) {
        groups[{r.method, r.num_qubits, r.num_fragments, r.shots}].push_back(&r);
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, rows] : groups) {
        std::vector<double> infidelities;
        double clipped = 0.0;
        for (const ResultRecord* r : rows) {
            infidelities.push_back(r->infidelity);
            clipped += r->clipped_mass;
        }
        const InstanceStats stats = instance_stats(infidelities);
        SummaryRow row;
        std::tie(row.method, row.num_qubits, row.num_fragments, row.shots) = key;
        row.shots_per_variant = rows.front()->shots_per_variant;
        row.variants = rows.front()->variants;
        row.cuts = rows.front()->cuts;
        row.instances = stats.count;
        row.mean_infidelity = stats.mean;
        row.std_infidelity = stats.std;
        row.mean_clipped_mass = clipped / static_cast<double>(rows.size());
        const double shots = static_cast<double>(row.shots);
        row.estimate_full = expected_infidelity_full(row.num_qubits, shots);
        row.estimate_full_rough = expected_infidelity_full_rough(row.num_qubits, shots);
        if (row.method != Method::Full && row.shots_per_variant > 0) {
            const CutInfidelityEstimate est = estimate_infidelity_cut(
                clustered_topology(row.num_qubits, row.num_fragments), static_cast<double>(row.shots_per_variant));
            row.estimate_cut = est.estimate;
            row.bound_cut = est.bound;
        }
        out.push_back(row);
    }
    return out;
}

ReportOutcome write_report(const std::filesystem::path& csv, const std::filesystem::path& out_dir, bool svg) {
    const std::vector<ResultRecord> records = read_results_csv(csv);
    if (records.empty()) {
        throw ParseError(csv.string() + ": no result rows");
    }
    const std::vector<SummaryRow> summary = summarize(records);
    std::filesystem::create_directories(out_dir);
    ReportOutcome outcome;
    outcome.summary_rows = summary.size();

    std::vector<const SummaryRow*> all;
    std::map<std::pair<int, int>, std::vector<const SummaryRow*>> by_fq;
    std::map<std::pair<int, std::uint64_t>, std::vector<const SummaryRow*>> by_fs;
    for (const SummaryRow& r : summary) {
        all.push_back(&r);
        by_fq[{r.num_fragments, r.num_qubits}].push_back(&r);
        by_fs[{r.num_fragments, r.shots}].push_back(&r);
    }
    const auto summary_path = out_dir / "summary.csv";
    write_summary_file(summary_path, all);
    outcome.files.push_back(summary_path);

    auto shots_of = [](const SummaryRow& r) { return static_cast<double>(r.shots); };
    auto qubits_of = [](const SummaryRow& r) { return static_cast<double>(r.num_qubits); };

    for (const auto& [fq, rows] : by_fq) {
        const std::string stem = "vs_shots_F" + std::to_string(fq.first) + "_Q" + std::to_string(fq.second);
        write_summary_file(out_dir / (stem + ".csv"), rows);
        outcome.files.push_back(out_dir / (stem + ".csv"));
        if (svg) {
            write_text(out_dir / (stem + ".svg"),
                       render_svg("F=" + std::to_string(fq.first) + ", Q=" + std::to_string(fq.second),
                                  "total shots S", false, rows, shots_of));
            outcome.files.push_back(out_dir / (stem + ".svg"));
        }
    }
    for (const auto& [fs, rows] : by_fs) {
        const std::string stem = "vs_qubits_F" + std::to_string(fs.first) + "_S" + std::to_string(fs.second);
        write_summary_file(out_dir / (stem + ".csv"), rows);
        outcome.files.push_back(out_dir / (stem + ".csv"));
        if (svg) {
            write_text(out_dir / (stem + ".svg"),
                       render_svg("F=" + std::to_string(fs.first) + ", S=" + std::to_string(fs.second), "qubits Q",
                                  true, rows, qubits_of));
            outcome.files.push_back(out_dir / (stem + ".svg"));
        }
    }
    spdlog::info("report: {} summary rows, {} files in {}", summary.size(), outcome.files.size(), out_dir.string());
    return outcome;
}

}  // namespace qcut
