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

#ifndef ROBUSTDIST_CONFIG_HPP_
#define ROBUSTDIST_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "robustdist/adversary.hpp"
#include "robustdist/constraint.hpp"
#include "robustdist/testing.hpp"

namespace robustdist {

enum class Task { kDL, kIT, kUT };

std::string task_name(Task task);
Task task_from_name(const std::string& name);

// Where each trial's true distribution comes from. "worst_of_list" runs every
// member and reports per-member risk plus the worst; the paired-perturbation
// source draws a fresh sign pattern per trial unless one is pinned.
struct SourceSpec {
  enum class Kind { kUniform, kPaninski, kExplicit, kWorstOfList };

  Kind kind = Kind::kUniform;
  double alpha = 0.1;
  bool fresh_signs = true;
  std::vector<int> signs;
  std::vector<double> probs;
  std::vector<SourceSpec> list;

  std::string label() const;
};

// Which attack strategy the adversary runs, with its parameters.
struct AttackSpec {
  enum class Kind { kNull, kFlatten, kSpike, kCoupling, kHashFlood };

  Kind kind = Kind::kNull;
  int target = 0;                       // spike
  std::vector<int> target_set;          // hash_flood; empty means first half
  BudgetPolicy policy = BudgetPolicy::kPartial;  // coupling
  std::vector<double> coupling_target;  // empty means the reference law

  std::string name() const;
};

// One point of the experiment grid: the task, the instance size, the channel
// constraint, the corruption budgets to sweep, the data source, the attack,
// the server-side estimator or tester, and the Monte Carlo budget.
struct ExperimentConfig {
  Task task = Task::kDL;
  int k = 2;
  long n = 1;
  ConstraintSpec constraint;
  std::vector<double> gamma_grid{0.0};
  SourceSpec source;
  AttackSpec attack;
  std::string estimator = "empirical";  // DL: "empirical" | "hashing"
  TesterConfig tester;                  // IT / UT
  SourceSpec reference;                 // IT: uniform or explicit
  long trials = 200;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 = library default
};

// All problems with the config, or empty if it can run. Every failure mode is
// listed; nothing short-circuits.
std::vector<std::string> validate(const ExperimentConfig& cfg);

// Raised by the experiment runners on an invalid config.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

// FNV-1a over the canonical serialized form.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace robustdist

#endif  // ROBUSTDIST_CONFIG_HPP_
