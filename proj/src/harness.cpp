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

#include "robustdist/harness.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "robustdist/bounds.hpp"
#include "robustdist/estimation.hpp"
#include "robustdist/parallel.hpp"

namespace robustdist {

namespace {

using Clock = std::chrono::steady_clock;

void ensure_valid(const ExperimentConfig& cfg) {
  auto issues = validate(cfg);
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

Distribution draw_source(const SourceSpec& src, int k, std::uint64_t seed) {
  switch (src.kind) {
    case SourceSpec::Kind::kUniform:
      return Distribution::uniform(k);
    case SourceSpec::Kind::kPaninski: {
      if (src.fresh_signs) {
        Rng rng(seed);
        return paninski_dist(random_paninski_index(k, src.alpha, rng), k);
      }
      return paninski_dist(PaninskiIndex{src.signs, src.alpha}, k);
    }
    case SourceSpec::Kind::kExplicit:
      return Distribution(src.probs);
    case SourceSpec::Kind::kWorstOfList:
      break;
  }
  throw std::logic_error("draw_source: list sources must be expanded first");
}

std::vector<SourceSpec> expand_sources(const SourceSpec& src) {
  if (src.kind == SourceSpec::Kind::kWorstOfList) return src.list;
  return {src};
}

Distribution resolve_reference(const ExperimentConfig& cfg) {
  if (cfg.reference.kind == SourceSpec::Kind::kExplicit) {
    return Distribution(cfg.reference.probs);
  }
  return Distribution::uniform(cfg.k);
}

// Pushforward of p through a deterministic symbol -> cell table.
Distribution push_through_cells(const Distribution& p, const std::vector<std::int32_t>& cell,
                                long bins) {
  std::vector<double> out(static_cast<size_t>(bins), 0.0);
  for (int x = 0; x < p.k(); ++x) out[static_cast<size_t>(cell[static_cast<size_t>(x)])] += p[x];
  return Distribution(std::move(out));
}

Distribution push_through_hash(const Distribution& p, const HashFunction& h) {
  std::vector<double> out(static_cast<size_t>(h.bins()), 0.0);
  for (int x = 0; x < p.k(); ++x) out[static_cast<size_t>(h(x))] += p[x];
  return Distribution(std::move(out));
}

// One attack application. The coupling plan, when needed, is built by the
// caller because it depends on the protocol's per-user message laws.
std::vector<int> apply_attack(const AttackSpec& atk, std::vector<int> y, int message_k,
                              const AttackBudget& budget, std::uint64_t seed,
                              std::span<const HashFunction> hashes, const CouplingPlan* plan) {
  switch (atk.kind) {
    case AttackSpec::Kind::kNull:
      return null_attack(y, budget).z;
    case AttackSpec::Kind::kFlatten:
      return flatten_attack(y, message_k, budget).z;
    case AttackSpec::Kind::kSpike:
      return spike_attack(y, atk.target, message_k, budget).z;
    case AttackSpec::Kind::kCoupling:
      return coupling_attack(y, *plan, budget, seed, atk.policy).z;
    case AttackSpec::Kind::kHashFlood: {
      std::vector<int> targets = atk.target_set;
      if (targets.empty()) {
        const int k = hashes.empty() ? message_k : hashes[0].k;
        targets.resize(static_cast<size_t>((k + 1) / 2));
        for (size_t i = 0; i < targets.size(); ++i) targets[i] = static_cast<int>(i);
      }
      return hash_flood_attack(y, hashes, targets, budget, seed).z;
    }
  }
  throw std::logic_error("apply_attack: unreachable");
}

struct Aggregate {
  double mean = 0.0;
  double se = 0.0;
};

// Fixed-order reduction over trial index; the same numbers come out no matter
// how the trials were scheduled.
Aggregate aggregate(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n)};
}

ReportRow base_row(const ExperimentConfig& cfg, double gamma) {
  ReportRow row;
  row.task = task_name(cfg.task);
  row.k = cfg.k;
  row.n = cfg.n;
  if (cfg.constraint.kind == ConstraintSpec::Kind::kBits) row.ell = cfg.constraint.ell;
  if (cfg.constraint.kind == ConstraintSpec::Kind::kLdp) row.epsilon = cfg.constraint.epsilon;
  row.gamma = gamma;
  row.attack = cfg.attack.name();
  row.trials = cfg.trials;
  row.seed = cfg.master_seed;
  return row;
}

}  // namespace

RiskReport run_learning_experiment(const ExperimentConfig& cfg) {
  ensure_valid(cfg);
  if (cfg.task != Task::kDL) {
    throw ConfigError({"task: run_learning_experiment requires task == DL"});
  }
  const auto started = Clock::now();
  RiskReport report;
  report.config = config_to_json(cfg);
  report.config_hash = config_hash(cfg);

  const bool hashing = cfg.estimator == "hashing";
  const int ell = cfg.constraint.ell;
  const int message_k = hashing ? (1 << ell) : cfg.k;
  const auto sources = expand_sources(cfg.source);
  const bool multi = cfg.source.kind == SourceSpec::Kind::kWorstOfList;
  const Distribution coupling_target = cfg.attack.coupling_target.empty()
                                           ? Distribution::uniform(cfg.k)
                                           : Distribution(cfg.attack.coupling_target);

  for (double gamma : cfg.gamma_grid) {
    const AttackBudget budget(gamma, cfg.n);
    const auto bounds = rate_dl(cfg.k, cfg.n, cfg.constraint, gamma);
    std::vector<ReportRow> point_rows;
    for (const auto& src : sources) {
      std::vector<double> tv_error(static_cast<size_t>(cfg.trials));
      run_indexed(cfg.trials, cfg.workers, [&](long t) {
        const std::uint64_t trial_seed =
            derive_seed(cfg.master_seed, "trial", static_cast<std::uint64_t>(t));
        const Distribution truth = draw_source(src, cfg.k, derive_seed(trial_seed, "source"));
        const SampleBlock x = sample(truth, cfg.n, derive_seed(trial_seed, "samples"));

        std::vector<int> y;
        std::vector<HashFunction> hashes;
        if (hashing) {
          hashes.resize(static_cast<size_t>(cfg.n));
          y.resize(static_cast<size_t>(cfg.n));
          for (long i = 0; i < cfg.n; ++i) {
            hashes[static_cast<size_t>(i)] = random_hash_function(
                cfg.k, ell, derive_seed(trial_seed, "hash", static_cast<std::uint64_t>(i)));
            y[static_cast<size_t>(i)] =
                hashes[static_cast<size_t>(i)](x.values[static_cast<size_t>(i)]);
          }
        } else {
          y = x.values;
        }

        CouplingPlan plan;
        if (cfg.attack.kind == AttackSpec::Kind::kCoupling) {
          if (hashing) {
            plan.kernels.reserve(static_cast<size_t>(cfg.n));
            for (long i = 0; i < cfg.n; ++i) {
              const auto& h = hashes[static_cast<size_t>(i)];
              plan.kernels.push_back(std::make_shared<const CouplingKernel>(
                  build_maximal_coupling(push_through_hash(truth, h),
                                         push_through_hash(coupling_target, h))));
            }
          } else {
            plan = shared_coupling_plan(truth, coupling_target, cfg.n);
          }
        }
        const std::vector<int> z =
            apply_attack(cfg.attack, std::move(y), message_k, budget,
                         derive_seed(trial_seed, "attack"), hashes,
                         cfg.attack.kind == AttackSpec::Kind::kCoupling ? &plan : nullptr);

        const EstimateReport estimate =
            hashing ? hashing_estimator(z, hashes, ell, cfg.k) : empirical_estimator(z, cfg.k);
        tv_error[static_cast<size_t>(t)] = tv_distance(estimate.projected, truth);
      });
      const auto stats = aggregate(tv_error);
      ReportRow row = base_row(cfg, gamma);
      row.metric = multi ? "mean_tv[" + src.label() + "]" : "mean_tv";
      row.value = stats.mean;
      row.stderr_ = stats.se;
      row.bound_upper = bounds.upper;
      row.bound_lower = bounds.lower;
      point_rows.push_back(std::move(row));
    }
    if (multi) {
      ReportRow worst = point_rows.front();
      for (const auto& row : point_rows) {
        if (row.value > worst.value) worst = row;
      }
      worst.metric = "mean_tv[worst]";
      point_rows.push_back(std::move(worst));
    }
    for (auto& row : point_rows) report.rows.push_back(std::move(row));
  }
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

RiskReport run_testing_experiment(const ExperimentConfig& cfg) {
  ensure_valid(cfg);
  if (cfg.task != Task::kIT && cfg.task != Task::kUT) {
    throw ConfigError({"task: run_testing_experiment requires task IT or UT"});
  }
  const auto started = Clock::now();
  RiskReport report;
  report.config = config_to_json(cfg);
  report.config_hash = config_hash(cfg);

  const bool bits = cfg.constraint.kind == ConstraintSpec::Kind::kBits;
  const Distribution q = resolve_reference(cfg);
  const auto sources = expand_sources(cfg.source);
  const Distribution coupling_target =
      cfg.attack.coupling_target.empty() ? q : Distribution(cfg.attack.coupling_target);

  struct Arm {
    bool null_arm;
    const SourceSpec* src;  // null for the null arm
    std::string metric;
  };
  std::vector<Arm> arms;
  arms.push_back({true, nullptr, "yes_rate"});
  for (const auto& src : sources) {
    arms.push_back({false, &src, "no_rate[" + src.label() + "]"});
  }

  for (double gamma : cfg.gamma_grid) {
    const AttackBudget budget(gamma, cfg.n);
    const auto bounds = rate_it(cfg.k, cfg.n, cfg.constraint, gamma);
    TesterConfig tcfg = cfg.tester;
    tcfg.gamma = gamma;

    // Freeze thresholds once per grid point; trials only read them.
    std::optional<UniformityTester> uniformity;
    std::optional<IdentityTester> identity;
    if (!bits) {
      if (cfg.task == Task::kUT) {
        uniformity = make_uniformity_tester(cfg.k, cfg.n, tcfg);
      } else {
        identity = make_identity_tester(q, cfg.n, tcfg);
      }
    } else {
      warm_compressed_thresholds(cfg.k, cfg.constraint.ell, cfg.n, tcfg);
    }

    for (const auto& arm : arms) {
      std::vector<double> yes(static_cast<size_t>(cfg.trials));
      run_indexed(cfg.trials, cfg.workers, [&](long t) {
        const std::uint64_t trial_seed =
            derive_seed(cfg.master_seed, "trial", static_cast<std::uint64_t>(t));
        const Distribution truth =
            arm.null_arm ? q : draw_source(*arm.src, cfg.k, derive_seed(trial_seed, "source"));
        const SampleBlock x = sample(truth, cfg.n, derive_seed(trial_seed, "samples"));

        TestVerdict verdict;
        if (!bits) {
          std::vector<int> y = x.values;
          CouplingPlan plan;
          if (cfg.attack.kind == AttackSpec::Kind::kCoupling) {
            plan = shared_coupling_plan(truth, coupling_target, cfg.n);
          }
          const std::vector<int> z =
              apply_attack(cfg.attack, std::move(y), cfg.k, budget,
                           derive_seed(trial_seed, "attack"), {},
                           cfg.attack.kind == AttackSpec::Kind::kCoupling ? &plan : nullptr);
          verdict = cfg.task == Task::kUT
                        ? uniformity->apply(z)
                        : identity->apply(z, derive_seed(trial_seed, "server"));
        } else {
          const CompressedProtocol proto =
              make_compressed_protocol(cfg.k, cfg.constraint.ell, cfg.n,
                                       derive_seed(trial_seed, "compression"));
          std::vector<int> y = compressed_messages(proto, x.values);
          CouplingPlan plan;
          if (cfg.attack.kind == AttackSpec::Kind::kCoupling) {
            plan.kernels.resize(static_cast<size_t>(cfg.n));
            for (int j = 0; j < proto.batches; ++j) {
              Distribution from = truth;
              Distribution to = coupling_target;
              if (proto.compress) {
                const auto& cell = proto.cells[static_cast<size_t>(j)];
                from = push_through_cells(truth, cell, proto.bins);
                to = push_through_cells(coupling_target, cell, proto.bins);
              }
              auto kernel =
                  std::make_shared<const CouplingKernel>(build_maximal_coupling(from, to));
              for (long i = proto.offsets[static_cast<size_t>(j)];
                   i < proto.offsets[static_cast<size_t>(j) + 1]; ++i) {
                plan.kernels[static_cast<size_t>(i)] = kernel;
              }
            }
          }
          const std::vector<int> z = apply_attack(
              cfg.attack, std::move(y), static_cast<int>(proto.bins), budget,
              derive_seed(trial_seed, "attack"), {},
              cfg.attack.kind == AttackSpec::Kind::kCoupling ? &plan : nullptr);
          verdict = compressed_verdict(proto, z, q, tcfg, derive_seed(trial_seed, "server"));
        }
        yes[static_cast<size_t>(t)] = verdict.yes ? 1.0 : 0.0;
      });
      std::vector<double> outcome(yes.size());
      for (size_t i = 0; i < yes.size(); ++i) {
        outcome[i] = arm.null_arm ? yes[i] : 1.0 - yes[i];
      }
      const auto stats = aggregate(outcome);
      ReportRow row = base_row(cfg, gamma);
      row.metric = arm.metric;
      row.value = stats.mean;
      row.stderr_ = stats.se;
      row.bound_upper = bounds.upper;
      row.bound_lower = bounds.lower;
      report.rows.push_back(std::move(row));
    }
  }
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

RiskReport run_experiment(const ExperimentConfig& cfg) {
  return cfg.task == Task::kDL ? run_learning_experiment(cfg) : run_testing_experiment(cfg);
}

std::vector<RiskReport> sweep(const ExperimentConfig& base, const std::string& axis,
                              std::span<const double> values) {
  std::vector<RiskReport> reports;
  for (double value : values) {
    ExperimentConfig cfg = base;
    if (axis == "n") {
      cfg.n = static_cast<long>(value);
    } else if (axis == "k") {
      cfg.k = static_cast<int>(value);
    } else if (axis == "ell") {
      cfg.constraint = ConstraintSpec::bits(static_cast<int>(value));
    } else if (axis == "epsilon") {
      cfg.constraint = ConstraintSpec::ldp(value);
    } else if (axis == "gamma") {
      cfg.gamma_grid = {value};
    } else if (axis == "alpha") {
      cfg.tester.alpha = value;
      if (cfg.source.kind == SourceSpec::Kind::kPaninski) cfg.source.alpha = value;
      for (auto& member : cfg.source.list) {
        if (member.kind == SourceSpec::Kind::kPaninski) member.alpha = value;
      }
    } else if (axis == "trials") {
      cfg.trials = static_cast<long>(value);
    } else {
      throw ConfigError({"sweep: unknown axis '" + axis + "'"});
    }
    cfg.master_seed =
        derive_seed(base.master_seed, "sweep:" + axis, std::bit_cast<std::uint64_t>(value));
    reports.push_back(run_experiment(cfg));
  }
  return reports;
}

namespace {

// Numbers are rendered through the JSON writer so CSV and JSON agree and
// doubles survive a round trip (shortest representation).
std::string number(double v) { return nlohmann::json(v).dump(); }

nlohmann::json row_to_json(const ReportRow& row) {
  nlohmann::json j;
  j["task"] = row.task;
  j["k"] = row.k;
  j["n"] = row.n;
  if (row.ell) j["ell"] = *row.ell;
  if (row.epsilon) j["epsilon"] = *row.epsilon;
  j["gamma"] = row.gamma;
  j["attack"] = row.attack;
  j["metric"] = row.metric;
  j["value"] = row.value;
  j["stderr"] = row.stderr_;
  j["trials"] = row.trials;
  j["bound_upper"] = row.bound_upper;
  j["bound_lower"] = row.bound_lower;
  j["seed"] = row.seed;
  return j;
}

ReportRow row_from_json(const nlohmann::json& j) {
  ReportRow row;
  row.task = j.at("task").get<std::string>();
  row.k = j.at("k").get<int>();
  row.n = j.at("n").get<long>();
  if (j.contains("ell")) row.ell = j.at("ell").get<int>();
  if (j.contains("epsilon")) row.epsilon = j.at("epsilon").get<double>();
  row.gamma = j.at("gamma").get<double>();
  row.attack = j.at("attack").get<std::string>();
  row.metric = j.at("metric").get<std::string>();
  row.value = j.at("value").get<double>();
  row.stderr_ = j.at("stderr").get<double>();
  row.trials = j.at("trials").get<long>();
  row.bound_upper = j.at("bound_upper").get<double>();
  row.bound_lower = j.at("bound_lower").get<double>();
  row.seed = j.at("seed").get<std::uint64_t>();
  return row;
}

}  // namespace

std::string report_csv_header() {
  return "task,k,n,ell,epsilon,gamma,attack,metric,value,stderr,trials,bound_upper,"
         "bound_lower,seed";
}

std::string report_to_csv(const RiskReport& report) {
  std::string out = report_csv_header() + "\n";
  for (const auto& row : report.rows) {
    out += row.task;
    out += ',' + std::to_string(row.k);
    out += ',' + std::to_string(row.n);
    out += ',';
    if (row.ell) out += std::to_string(*row.ell);
    out += ',';
    if (row.epsilon) out += number(*row.epsilon);
    out += ',' + number(row.gamma);
    out += ',' + row.attack;
    out += ',' + row.metric;
    out += ',' + number(row.value);
    out += ',' + number(row.stderr_);
    out += ',' + std::to_string(row.trials);
    out += ',' + number(row.bound_upper);
    out += ',' + number(row.bound_lower);
    out += ',' + std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

std::string report_to_json_string(const RiskReport& report) {
  nlohmann::json j;
  j["config_hash"] = report.config_hash;
  j["config"] = report.config;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) rows.push_back(row_to_json(row));
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

RiskReport report_from_json(const nlohmann::json& j) {
  RiskReport report;
  report.config_hash = j.at("config_hash").get<std::uint64_t>();
  report.config = j.at("config");
  for (const auto& row : j.at("rows")) report.rows.push_back(row_from_json(row));
  return report;
}

void emit_report(const RiskReport& report, const std::string& format, const std::string& path) {
  std::string payload;
  if (format == "csv") {
    payload = report_to_csv(report);
  } else if (format == "json") {
    payload = report_to_json_string(report);
  } else {
    throw std::invalid_argument("emit_report: format must be csv or json");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot open '" + path + "' for writing");
  out << payload;
  if (!out) throw std::runtime_error("emit_report: write to '" + path + "' failed");
}

}  // namespace robustdist
