// Copyright 2026 The robustdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBUSTDIST_HARNESS_HPP_
#define ROBUSTDIST_HARNESS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "robustdist/config.hpp"

namespace robustdist {

// One aggregated measurement: a metric at one grid point, with its Monte
// Carlo error and the matching reference-rate overlay.
struct ReportRow {
  std::string task;
  int k = 0;
  long n = 0;
  std::optional<int> ell;
  std::optional<double> epsilon;
  double gamma = 0.0;
  std::string attack;
  std::string metric;
  double value = 0.0;
  double stderr_ = 0.0;
  long trials = 0;
  double bound_upper = 0.0;
  double bound_lower = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const ReportRow&) const = default;
};

struct RiskReport {
  std::vector<ReportRow> rows;
  std::uint64_t config_hash = 0;
  nlohmann::json config;
  double wall_seconds = 0.0;  // informational; never serialized

  bool operator==(const RiskReport& other) const {
    return rows == other.rows && config_hash == other.config_hash && config == other.config;
  }
};

// Monte Carlo estimate of the learning risk: per gamma grid point and source,
// the mean TV distance between the projected estimate and the trial's truth.
// Deterministic given (config, master_seed, trials) for any worker count.
RiskReport run_learning_experiment(const ExperimentConfig& cfg);

// Yes rate under the null and no rate under each alternate source, per gamma
// grid point, against the 0.9 targets.
RiskReport run_testing_experiment(const ExperimentConfig& cfg);

// Dispatch on cfg.task.
RiskReport run_experiment(const ExperimentConfig& cfg);

// Runs the experiment once per value of the named axis ("n", "k", "ell",
// "epsilon", "gamma", "alpha", "trials"), deriving per-value seeds from the
// template's master seed.
std::vector<RiskReport> sweep(const ExperimentConfig& base, const std::string& axis,
                              std::span<const double> values);

// CSV schema, fixed: one row per report row, header exactly as below.
std::string report_csv_header();
std::string report_to_csv(const RiskReport& report);

// JSON mirrors the RiskReport structure (minus wall-clock). Byte-stable for
// equal reports, loss-free on round trip.
std::string report_to_json_string(const RiskReport& report);
RiskReport report_from_json(const nlohmann::json& j);

void emit_report(const RiskReport& report, const std::string& format, const std::string& path);

}  // namespace robustdist

#endif  // ROBUSTDIST_HARNESS_HPP_
