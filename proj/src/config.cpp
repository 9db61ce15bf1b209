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

#include "robustdist/config.hpp"

#include <cmath>
#include <sstream>

#include "robustdist/distribution.hpp"
#include "robustdist/serde.hpp"

namespace robustdist {

using nlohmann::json;

std::string task_name(Task task) {
  switch (task) {
    case Task::kDL: return "DL";
    case Task::kIT: return "IT";
    case Task::kUT: return "UT";
  }
  throw std::logic_error("task_name: unreachable");
}

Task task_from_name(const std::string& name) {
  if (name == "DL") return Task::kDL;
  if (name == "IT") return Task::kIT;
  if (name == "UT") return Task::kUT;
  throw std::invalid_argument("unknown task '" + name + "'");
}

std::string SourceSpec::label() const {
  switch (kind) {
    case Kind::kUniform:
      return "uniform";
    case Kind::kPaninski: {
      std::ostringstream out;
      out << "paninski(" << alpha << (fresh_signs ? ",fresh" : ",fixed") << ")";
      return out.str();
    }
    case Kind::kExplicit:
      return "explicit";
    case Kind::kWorstOfList:
      return "worst_of_list";
  }
  throw std::logic_error("SourceSpec::label: unreachable");
}

std::string AttackSpec::name() const {
  switch (kind) {
    case Kind::kNull: return "null";
    case Kind::kFlatten: return "flatten";
    case Kind::kSpike: return "spike";
    case Kind::kCoupling:
      return policy == BudgetPolicy::kStrict ? "coupling[strict]" : "coupling[partial]";
    case Kind::kHashFlood: return "hash_flood";
  }
  throw std::logic_error("AttackSpec::name: unreachable");
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error("invalid experiment config (" + std::to_string(issues.size()) +
                         " issue(s); first: " + (issues.empty() ? "?" : issues.front()) + ")"),
      issues_(std::move(issues)) {}

namespace {

void validate_source(const SourceSpec& src, int k, const std::string& where,
                     std::vector<std::string>& issues, bool allow_list) {
  switch (src.kind) {
    case SourceSpec::Kind::kUniform:
      break;
    case SourceSpec::Kind::kPaninski:
      if (k % 2 != 0) issues.push_back(where + ": paninski source requires even k");
      if (!(src.alpha > 0.0) || 2.0 * src.alpha > 1.0) {
        issues.push_back(where + ": paninski alpha must lie in (0, 1/2]");
      }
      if (!src.fresh_signs && static_cast<int>(src.signs.size()) != k / 2) {
        issues.push_back(where + ": fixed sign pattern must have length k/2");
      }
      break;
    case SourceSpec::Kind::kExplicit:
      if (static_cast<int>(src.probs.size()) != k) {
        issues.push_back(where + ": explicit distribution must have k entries");
      } else {
        try {
          Distribution probe(src.probs);
        } catch (const std::exception& e) {
          issues.push_back(where + ": " + e.what());
        }
      }
      break;
    case SourceSpec::Kind::kWorstOfList:
      if (!allow_list) {
        issues.push_back(where + ": nested worst_of_list is not allowed");
        break;
      }
      if (src.list.empty()) issues.push_back(where + ": worst_of_list needs members");
      for (size_t i = 0; i < src.list.size(); ++i) {
        validate_source(src.list[i], k, where + ".list[" + std::to_string(i) + "]", issues,
                        /*allow_list=*/false);
      }
      break;
  }
}

}  // namespace

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> issues;
  if (cfg.k < 2) issues.push_back("k: need k >= 2");
  if (cfg.n < 1) issues.push_back("n: need n >= 1");
  if (cfg.trials < 1) issues.push_back("trials: need trials >= 1");
  if (cfg.gamma_grid.empty()) issues.push_back("gamma_grid: must not be empty");
  for (double g : cfg.gamma_grid) {
    if (!(g >= 0.0) || g > 1.0) {
      issues.push_back("gamma_grid: value " + std::to_string(g) + " outside [0, 1]");
      break;
    }
  }
  if (cfg.constraint.kind == ConstraintSpec::Kind::kBits && cfg.constraint.ell < 1) {
    issues.push_back("constraint: bit budget requires ell >= 1");
  }
  if (cfg.constraint.kind == ConstraintSpec::Kind::kLdp) {
    if (!(cfg.constraint.epsilon > 0.0)) {
      issues.push_back("constraint: LDP requires epsilon > 0");
    }
    issues.push_back(
        "constraint: LDP experiments are not supported (the LDP class enters only "
        "through reference curves; use `bounds`)");
  }

  validate_source(cfg.source, cfg.k, "source", issues, /*allow_list=*/true);

  const bool bits = cfg.constraint.kind == ConstraintSpec::Kind::kBits;
  const long message_k = bits ? std::min<long>(1L << cfg.constraint.ell, cfg.k) : cfg.k;

  if (cfg.task == Task::kDL) {
    if (cfg.estimator != "empirical" && cfg.estimator != "hashing") {
      issues.push_back("estimator: unknown estimator '" + cfg.estimator + "'");
    }
    if (cfg.estimator == "hashing" && !bits) {
      issues.push_back("estimator: hashing decoder requires a bit constraint");
    }
    if (cfg.estimator == "empirical" && bits) {
      issues.push_back("estimator: empirical decoder requires unconstrained messages");
    }
  } else {
    if (!(cfg.tester.alpha > 0.0) || cfg.tester.alpha > 1.0) {
      issues.push_back("tester: alpha must lie in (0, 1]");
    }
    if (!(cfg.tester.c2 > 0.0)) issues.push_back("tester: c2 must be positive");
    if (!(cfg.tester.beta > 0.0) || cfg.tester.beta >= 1.0) {
      issues.push_back("tester: beta must lie in (0, 1)");
    }
    if (cfg.tester.calibration_trials < 1) {
      issues.push_back("tester: calibration_trials must be >= 1");
    }
    if (cfg.task == Task::kUT && cfg.reference.kind != SourceSpec::Kind::kUniform) {
      issues.push_back("reference: uniformity testing fixes the reference at uniform");
    }
    if (cfg.task == Task::kIT && cfg.reference.kind != SourceSpec::Kind::kUniform &&
        cfg.reference.kind != SourceSpec::Kind::kExplicit) {
      issues.push_back("reference: identity testing needs a uniform or explicit reference");
    }
    if (cfg.reference.kind == SourceSpec::Kind::kExplicit) {
      validate_source(cfg.reference, cfg.k, "reference", issues, /*allow_list=*/false);
    }
  }

  switch (cfg.attack.kind) {
    case AttackSpec::Kind::kSpike:
      if (cfg.attack.target < 0 || cfg.attack.target >= message_k) {
        issues.push_back("attack: spike target outside the message alphabet");
      }
      break;
    case AttackSpec::Kind::kHashFlood:
      if (!(cfg.task == Task::kDL && cfg.estimator == "hashing")) {
        issues.push_back("attack: hash_flood targets the hashing protocol only");
      }
      for (int x : cfg.attack.target_set) {
        if (x < 0 || x >= cfg.k) {
          issues.push_back("attack: hash_flood target set contains out-of-range symbols");
          break;
        }
      }
      break;
    case AttackSpec::Kind::kCoupling:
      if (!cfg.attack.coupling_target.empty() &&
          static_cast<int>(cfg.attack.coupling_target.size()) != cfg.k) {
        issues.push_back("attack: coupling target must be a distribution over [k]");
      } else if (!cfg.attack.coupling_target.empty()) {
        try {
          Distribution probe(cfg.attack.coupling_target);
        } catch (const std::exception& e) {
          issues.push_back(std::string("attack: coupling target: ") + e.what());
        }
      }
      break;
    default:
      break;
  }
  return issues;
}

namespace {

json source_to_json(const SourceSpec& src) {
  json j;
  switch (src.kind) {
    case SourceSpec::Kind::kUniform:
      j["kind"] = "uniform";
      break;
    case SourceSpec::Kind::kPaninski:
      j["kind"] = "paninski";
      j["alpha"] = src.alpha;
      j["z_policy"] = src.fresh_signs ? "fresh" : "fixed";
      if (!src.fresh_signs) j["signs"] = src.signs;
      break;
    case SourceSpec::Kind::kExplicit:
      j["kind"] = "explicit";
      j["probs"] = src.probs;
      break;
    case SourceSpec::Kind::kWorstOfList: {
      j["kind"] = "worst_of_list";
      json members = json::array();
      for (const auto& member : src.list) members.push_back(source_to_json(member));
      j["list"] = std::move(members);
      break;
    }
  }
  return j;
}

SourceSpec source_from_json(const json& j) {
  SourceSpec src;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "uniform") {
    src.kind = SourceSpec::Kind::kUniform;
  } else if (kind == "paninski") {
    src.kind = SourceSpec::Kind::kPaninski;
    src.alpha = j.at("alpha").get<double>();
    src.fresh_signs = j.value("z_policy", std::string("fresh")) == "fresh";
    if (!src.fresh_signs) src.signs = j.at("signs").get<std::vector<int>>();
  } else if (kind == "explicit") {
    src.kind = SourceSpec::Kind::kExplicit;
    src.probs = j.at("probs").get<std::vector<double>>();
  } else if (kind == "worst_of_list") {
    src.kind = SourceSpec::Kind::kWorstOfList;
    for (const auto& member : j.at("list")) src.list.push_back(source_from_json(member));
  } else {
    throw std::invalid_argument("source: unknown kind '" + kind + "'");
  }
  return src;
}

json attack_to_json(const AttackSpec& atk) {
  json j;
  switch (atk.kind) {
    case AttackSpec::Kind::kNull: j["name"] = "null"; break;
    case AttackSpec::Kind::kFlatten: j["name"] = "flatten"; break;
    case AttackSpec::Kind::kSpike:
      j["name"] = "spike";
      j["target"] = atk.target;
      break;
    case AttackSpec::Kind::kCoupling:
      j["name"] = "coupling";
      j["mode"] = atk.policy == BudgetPolicy::kStrict ? "strict" : "partial";
      if (!atk.coupling_target.empty()) j["coupling_target"] = atk.coupling_target;
      break;
    case AttackSpec::Kind::kHashFlood:
      j["name"] = "hash_flood";
      if (!atk.target_set.empty()) j["target_set"] = atk.target_set;
      break;
  }
  return j;
}

AttackSpec attack_from_json(const json& j) {
  AttackSpec atk;
  const auto name = j.at("name").get<std::string>();
  if (name == "null") {
    atk.kind = AttackSpec::Kind::kNull;
  } else if (name == "flatten") {
    atk.kind = AttackSpec::Kind::kFlatten;
  } else if (name == "spike") {
    atk.kind = AttackSpec::Kind::kSpike;
    atk.target = j.at("target").get<int>();
  } else if (name == "coupling") {
    atk.kind = AttackSpec::Kind::kCoupling;
    atk.policy = j.value("mode", std::string("partial")) == "strict" ? BudgetPolicy::kStrict
                                                                     : BudgetPolicy::kPartial;
    if (j.contains("coupling_target")) {
      atk.coupling_target = j.at("coupling_target").get<std::vector<double>>();
    }
  } else if (name == "hash_flood") {
    atk.kind = AttackSpec::Kind::kHashFlood;
    if (j.contains("target_set")) atk.target_set = j.at("target_set").get<std::vector<int>>();
  } else {
    throw std::invalid_argument("attack: unknown name '" + name + "'");
  }
  return atk;
}

json tester_to_json(const TesterConfig& t) {
  return {{"alpha", t.alpha},
          {"gamma", t.gamma},
          {"c2", t.c2},
          {"beta", t.beta},
          {"calibration_trials", t.calibration_trials},
          {"calibration_seed", t.calibration_seed},
          {"mode", t.mode == ThresholdMode::kAnalytic ? "analytic" : "calibrated"}};
}

TesterConfig tester_from_json(const json& j) {
  TesterConfig t;
  t.alpha = j.value("alpha", t.alpha);
  t.gamma = j.value("gamma", t.gamma);
  t.c2 = j.value("c2", t.c2);
  t.beta = j.value("beta", t.beta);
  t.calibration_trials = j.value("calibration_trials", t.calibration_trials);
  t.calibration_seed = j.value("calibration_seed", t.calibration_seed);
  t.mode = j.value("mode", std::string("calibrated")) == "analytic" ? ThresholdMode::kAnalytic
                                                                    : ThresholdMode::kCalibrated;
  return t;
}

}  // namespace

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["task"] = task_name(cfg.task);
  j["k"] = cfg.k;
  j["n"] = cfg.n;
  j["constraint"] = constraint_to_json(cfg.constraint);
  j["gamma_grid"] = cfg.gamma_grid;
  j["source"] = source_to_json(cfg.source);
  j["attack"] = attack_to_json(cfg.attack);
  if (cfg.task == Task::kDL) {
    j["estimator"] = cfg.estimator;
  } else {
    j["tester"] = tester_to_json(cfg.tester);
    j["reference"] = source_to_json(cfg.reference);
  }
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  // workers is an execution knob, not part of the experiment: reports must
  // not depend on it.
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.task = task_from_name(j.at("task").get<std::string>());
  cfg.k = j.at("k").get<int>();
  cfg.n = j.at("n").get<long>();
  if (j.contains("constraint")) cfg.constraint = constraint_from_json(j.at("constraint"));
  if (j.contains("gamma_grid")) cfg.gamma_grid = j.at("gamma_grid").get<std::vector<double>>();
  if (j.contains("source")) cfg.source = source_from_json(j.at("source"));
  if (j.contains("attack")) cfg.attack = attack_from_json(j.at("attack"));
  if (j.contains("estimator")) cfg.estimator = j.at("estimator").get<std::string>();
  if (j.contains("tester")) cfg.tester = tester_from_json(j.at("tester"));
  if (j.contains("reference")) cfg.reference = source_from_json(j.at("reference"));
  cfg.trials = j.value("trials", cfg.trials);
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  return cfg;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string canonical = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace robustdist
