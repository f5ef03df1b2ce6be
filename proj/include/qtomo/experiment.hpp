// Copyright 2026 The qtomo Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtomo/errors.hpp"
#include "qtomo/information.hpp"
#include "qtomo/json_io.hpp"

namespace qtomo {

/// Malformed or out-of-range experiment configuration (CLI exit code 2).
class ConfigError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

enum class ExperimentKind { Scaling, Hardcase, Certify, Mi, Bound };

std::string to_string(ExperimentKind k);
ExperimentKind parse_kind(std::string_view s);

/// Declarative experiment description; see docs/config.md for the schema.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Scaling;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "qtomo_out";
    bool plot = false;
    unsigned threads = 0;  ///< 0 = hardware concurrency

    std::vector<int> n_qubits;
    std::vector<std::size_t> copies;
    std::vector<double> eps{0.1};
    std::vector<int> min_weight;  ///< empty = per-kind default
    std::size_t trials = 1000;
    std::size_t repetitions = 100;
    double c = 1.0 / 200.0;
    std::string state = "maximally_mixed";  ///< or "random"

    std::vector<std::string> strategies{"z", "uniform", "adaptive"};
    MiMode mi_mode = MiMode::Exact;
    std::size_t mc_samples = 100000;
    bool miller_madow = false;
    double concentration_C = 2.0;

    static ExperimentConfig from_json(const Json& j);
    Json to_json() const;
};

/// Sets a dotted key ("grid.trials", "seed") in a config document; the value is parsed as JSON when possible.
void apply_override(Json& config, std::string_view dotted_key, std::string_view value);

struct ExperimentOutcome {
    bool all_pass = true;
    std::vector<std::filesystem::path> files;
    std::vector<std::pair<std::string, std::uint64_t>> seeds;
    Json summary = Json::object();
};

ExperimentOutcome run_scaling(const ExperimentConfig& cfg);
ExperimentOutcome run_hardcase(const ExperimentConfig& cfg);
ExperimentOutcome run_certify(const ExperimentConfig& cfg);
ExperimentOutcome run_mi(const ExperimentConfig& cfg);
ExperimentOutcome run_bound(const ExperimentConfig& cfg);
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Runs the experiment and writes manifest.json next to its outputs.
ExperimentOutcome run_with_manifest(const ExperimentConfig& cfg);

/// Strategy by name: "z", "uniform", "adaptive" (one qubit only), "random_basis".
MeasurementStrategy strategy_by_name(const std::string& name, int n_qubits, std::uint64_t seed);

/// QTOMO_THREADS, else the configured value, else hardware concurrency.
unsigned resolve_threads(unsigned configured);
/// fn(i) for i in [0, count); indices are claimed dynamically by `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

std::string sha256_hex(std::string_view data);
/// 17 significant digits, '.' decimal separator.
std::string format_double(double v);
/// Least-squares slope of y on x.
double fit_slope(std::span<const double> x, std::span<const double> y);

class CsvWriter {
   public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& add(double v);
    CsvWriter& add(std::uint64_t v);
    CsvWriter& add(std::int64_t v);
    CsvWriter& add(int v) { return add(static_cast<std::int64_t>(v)); }
    CsvWriter& add(bool v);
    CsvWriter& add(std::string_view v);
    CsvWriter& add(const char* v) { return add(std::string_view(v)); }
    void end_row();
    std::string str() const;
    void write(const std::filesystem::path& path) const;

   private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> current_;
};

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_loglog_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<PlotSeries>& series);
void write_histogram_svg(const std::filesystem::path& path, const std::string& title, std::span<const double> values,
                         std::size_t bins);

}  // namespace qtomo
