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

// Command line front end: `learn` and `test` run Monte Carlo experiments from
// a JSON config, `bounds` evaluates the reference rate curves, `emd` solves
// exact small-instance transport, and `calibrate` measures the constants the
// calibrated testers ship with.
//
// Exit codes: 0 success, 2 config validation failure, 3 runtime failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "robustdist/bounds.hpp"
#include "robustdist/emd.hpp"
#include "robustdist/harness.hpp"
#include "robustdist/serde.hpp"
#include "robustdist/testing.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw robustdist::ConfigError({"config: cannot open '" + path + "'"});
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw robustdist::ConfigError({"config: '" + path + "' is not valid JSON: " + e.what()});
  }
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  std::optional<int> workers;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags.config_path, "experiment config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--seed", flags.seed, "override master_seed");
  cmd->add_option("--trials", flags.trials, "override trial count");
  cmd->add_option("--workers", flags.workers, "worker threads (0 = default)");
  cmd->add_option("--out", flags.out, "output path (default: stdout)");
  cmd->add_option("--format", flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void write_output(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
  out << payload;
}

int run_experiment_cmd(const CommonFlags& flags, robustdist::Task expected) {
  robustdist::ExperimentConfig cfg =
      robustdist::config_from_json(load_json(flags.config_path));
  if (flags.seed) cfg.master_seed = *flags.seed;
  if (flags.trials) cfg.trials = *flags.trials;
  if (flags.workers) cfg.workers = *flags.workers;
  if (expected == robustdist::Task::kDL && cfg.task != robustdist::Task::kDL) {
    throw robustdist::ConfigError({"task: `learn` requires a DL config"});
  }
  if (expected != robustdist::Task::kDL && cfg.task == robustdist::Task::kDL) {
    throw robustdist::ConfigError({"task: `test` requires an IT or UT config"});
  }
  const robustdist::RiskReport report = robustdist::run_experiment(cfg);
  if (flags.out.empty()) {
    std::cout << (flags.format == "csv" ? robustdist::report_to_csv(report)
                                        : robustdist::report_to_json_string(report));
  } else {
    robustdist::emit_report(report, flags.format, flags.out);
  }
  return kExitOk;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw robustdist::ConfigError({what + ": cannot parse '" + item + "'"});
    }
  }
  if (values.empty()) throw robustdist::ConfigError({what + ": empty list"});
  return values;
}

struct BoundsFlags {
  std::string task = "dl";
  int k = 0;
  std::string constraint = "unconstrained";
  int ell = 0;
  double epsilon = 0.0;
  std::string n_list;
  std::string gamma_list = "0";
  std::string out;
};

int run_bounds_cmd(const BoundsFlags& flags) {
  robustdist::ConstraintSpec constraint;
  if (flags.constraint == "bits") {
    if (flags.ell < 1) throw robustdist::ConfigError({"bounds: --ell required with bits"});
    constraint = robustdist::ConstraintSpec::bits(flags.ell);
  } else if (flags.constraint == "ldp") {
    if (!(flags.epsilon > 0)) {
      throw robustdist::ConfigError({"bounds: --epsilon required with ldp"});
    }
    constraint = robustdist::ConstraintSpec::ldp(flags.epsilon);
  } else if (flags.constraint != "unconstrained") {
    throw robustdist::ConfigError({"bounds: unknown constraint '" + flags.constraint + "'"});
  }
  if (flags.k < 2) throw robustdist::ConfigError({"bounds: need --k >= 2"});
  if (flags.task != "dl" && flags.task != "it" && flags.task != "ut") {
    throw robustdist::ConfigError({"bounds: task must be dl, it or ut"});
  }
  const auto ns = parse_list(flags.n_list, "bounds --n");
  const auto gammas = parse_list(flags.gamma_list, "bounds --gamma");

  std::string out = robustdist::report_csv_header() + "\n";
  const std::string task_label = flags.task == "dl" ? "DL" : (flags.task == "it" ? "IT" : "UT");
  for (double nd : ns) {
    const long n = static_cast<long>(nd);
    for (double gamma : gammas) {
      const auto rate = flags.task == "dl"
                            ? robustdist::rate_dl(flags.k, n, constraint, gamma)
                            : robustdist::rate_it(flags.k, n, constraint, gamma);
      for (const bool upper : {true, false}) {
        std::ostringstream line;
        line << task_label << ',' << flags.k << ',' << n << ',';
        if (constraint.kind == robustdist::ConstraintSpec::Kind::kBits) line << constraint.ell;
        line << ',';
        if (constraint.kind == robustdist::ConstraintSpec::Kind::kLdp) {
          line << nlohmann::json(constraint.epsilon).dump();
        }
        line << ',' << nlohmann::json(gamma).dump() << ",,"
             << (upper ? "rate_upper" : "rate_lower") << ','
             << nlohmann::json(upper ? rate.upper : rate.lower).dump() << ",0,0,"
             << nlohmann::json(rate.upper).dump() << ',' << nlohmann::json(rate.lower).dump()
             << ",0\n";
        out += line.str();
      }
    }
  }
  write_output(out, flags.out);
  return kExitOk;
}

robustdist::FiniteJoint joint_from_json(const nlohmann::json& j, const std::string& mass_key) {
  if (j.contains("product")) {
    const auto& lists = j.at("product").at(mass_key);
    std::vector<robustdist::Distribution> coords;
    for (const auto& probs : lists) {
      coords.emplace_back(probs.get<std::vector<double>>());
    }
    return robustdist::product_joint(coords);
  }
  return robustdist::FiniteJoint(j.at("alphabets").get<std::vector<int>>(),
                                 j.at(mass_key).get<std::vector<double>>());
}

int run_emd_cmd(const std::string& config_path, const std::string& out_path) {
  const auto j = load_json(config_path);
  nlohmann::json result;
  try {
    const auto q1 = joint_from_json(j, j.contains("product") ? "p" : "q1");
    const auto q2 = joint_from_json(j, j.contains("product") ? "q" : "q2");
    result["emd"] = robustdist::exact_emd_hamming(q1, q2);
    if (j.contains("product")) {
      std::vector<robustdist::Distribution> p_coords, q_coords;
      for (const auto& probs : j.at("product").at("p")) {
        p_coords.emplace_back(probs.get<std::vector<double>>());
      }
      for (const auto& probs : j.at("product").at("q")) {
        q_coords.emplace_back(probs.get<std::vector<double>>());
      }
      result["naive_coupling_bound"] =
          robustdist::naive_coupling_emd_bound(p_coords, q_coords);
    }
  } catch (const std::invalid_argument& e) {
    throw robustdist::ConfigError({std::string("emd: ") + e.what()});
  }
  write_output(result.dump(2) + "\n", out_path);
  return kExitOk;
}

// Measures the fraction of partitions that keep at least c1 * alpha *
// sqrt(2^ell / k) of the TV distance between a perturbed pair, for a ladder
// of c1 candidates. The shipped CompressionConstants come from this table.
int run_calibrate_compression(int k, int ell, double alpha, long seeds,
                              const std::string& out_path) {
  using namespace robustdist;
  if (k < 2 || k % 2 != 0) throw ConfigError({"calibrate: need even k >= 2"});
  PaninskiIndex idx;
  idx.alpha = alpha;
  idx.z.resize(static_cast<size_t>(k / 2));
  for (size_t i = 0; i < idx.z.size(); ++i) idx.z[i] = (i % 2 == 0) ? 1 : -1;
  const Distribution p = paninski_dist(idx, k);
  const Distribution q = Distribution::uniform(k);
  const double base = alpha * std::sqrt(static_cast<double>(1L << ell) / k);
  const std::vector<double> c1_ladder = {0.25, 0.375, 0.5, 0.625, 0.75, 1.0};
  std::vector<long> hits(c1_ladder.size(), 0);
  const long bins = 1L << ell;
  for (long s = 0; s < seeds; ++s) {
    const auto cell = random_balanced_partition(k, static_cast<int>(bins),
                                                derive_seed(0x636f6d70, "partition",
                                                            static_cast<std::uint64_t>(s)));
    std::vector<double> dp(static_cast<size_t>(bins), 0.0), dq(static_cast<size_t>(bins), 0.0);
    for (int x = 0; x < k; ++x) {
      dp[static_cast<size_t>(cell[static_cast<size_t>(x)])] += p[x];
      dq[static_cast<size_t>(cell[static_cast<size_t>(x)])] += q[x];
    }
    double tv = 0.0;
    for (long b = 0; b < bins; ++b) {
      tv += std::abs(dp[static_cast<size_t>(b)] - dq[static_cast<size_t>(b)]);
    }
    tv *= 0.5;
    for (size_t c = 0; c < c1_ladder.size(); ++c) {
      if (tv >= c1_ladder[c] * base) ++hits[c];
    }
  }
  nlohmann::json result;
  result["k"] = k;
  result["ell"] = ell;
  result["alpha"] = alpha;
  result["seeds"] = seeds;
  nlohmann::json table = nlohmann::json::array();
  for (size_t c = 0; c < c1_ladder.size(); ++c) {
    table.push_back({{"c1", c1_ladder[c]},
                     {"fraction", static_cast<double>(hits[c]) / static_cast<double>(seeds)}});
  }
  result["retention"] = std::move(table);
  write_output(result.dump(2) + "\n", out_path);
  return kExitOk;
}

int run_calibrate_tester(int k, long n, double gamma, double beta, long trials,
                         const std::string& out_path) {
  using namespace robustdist;
  TesterConfig cfg;
  cfg.gamma = gamma;
  cfg.beta = beta;
  cfg.calibration_trials = trials;
  const auto tester = make_uniformity_tester(k, n, cfg);
  nlohmann::json result;
  result["k"] = k;
  result["n"] = n;
  result["gamma"] = gamma;
  result["beta"] = beta;
  result["calibration_trials"] = trials;
  result["mu"] = tester.mu;
  result["threshold"] = tester.threshold;
  result["null_quantile"] =
      null_deviation_quantile(k, n, trials, 1.0 - beta, cfg.calibration_seed);
  write_output(result.dump(2) + "\n", out_path);
  return kExitOk;
}

// Sweeps the distance scale of the batched tester and reports its power, to
// justify the shipped kCompressedDistanceScale.
int run_calibrate_compressed(int k, int ell, long n, long trials, const std::string& out_path) {
  using namespace robustdist;
  if (k < 2 || k % 2 != 0) throw ConfigError({"calibrate: need even k >= 2"});
  const Distribution q = Distribution::uniform(k);
  nlohmann::json table = nlohmann::json::array();
  for (const double scale : {1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
    const double alpha = compressed_testable_alpha(k, ell, n, 0.0, scale);
    if (2.0 * alpha > 1.0) {
      table.push_back({{"scale", scale}, {"alpha", alpha}, {"power", nullptr}});
      continue;
    }
    TesterConfig cfg;
    cfg.alpha = alpha;
    long rejections = 0;
    for (long t = 0; t < trials; ++t) {
      const std::uint64_t seed = derive_seed(0x63616c6962, "trial", static_cast<std::uint64_t>(t));
      Rng rng(derive_seed(seed, "signs"));
      const Distribution p = paninski_dist(random_paninski_index(k, alpha, rng), k);
      const SampleBlock x = sample(p, n, derive_seed(seed, "samples"));
      const auto verdict = compressed_identity_test(x.values, k, ell, q, cfg,
                                                    derive_seed(seed, "test"));
      if (!verdict.yes) ++rejections;
    }
    table.push_back({{"scale", scale},
                     {"alpha", alpha},
                     {"power", static_cast<double>(rejections) / static_cast<double>(trials)}});
  }
  nlohmann::json result;
  result["k"] = k;
  result["ell"] = ell;
  result["n"] = n;
  result["trials"] = trials;
  result["power_by_scale"] = std::move(table);
  write_output(result.dump(2) + "\n", out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust distributed inference on discrete distributions"};
  app.require_subcommand(1);

  CommonFlags learn_flags, test_flags;
  auto* learn = app.add_subcommand("learn", "run a distribution learning experiment");
  add_common(learn, learn_flags, /*config_required=*/true);
  auto* test = app.add_subcommand("test", "run an identity/uniformity testing experiment");
  add_common(test, test_flags, /*config_required=*/true);

  BoundsFlags bounds_flags;
  auto* bounds = app.add_subcommand("bounds", "evaluate reference rate curves to CSV");
  bounds->add_option("--task", bounds_flags.task, "dl, it or ut")->required();
  bounds->add_option("--k", bounds_flags.k, "alphabet size")->required();
  bounds->add_option("--constraint", bounds_flags.constraint, "unconstrained, bits or ldp");
  bounds->add_option("--ell", bounds_flags.ell, "bit budget (with bits)");
  bounds->add_option("--epsilon", bounds_flags.epsilon, "privacy budget (with ldp)");
  bounds->add_option("--n", bounds_flags.n_list, "comma-separated n values")->required();
  bounds->add_option("--gamma", bounds_flags.gamma_list, "comma-separated gamma values");
  bounds->add_option("--out", bounds_flags.out, "output path (default: stdout)");

  std::string emd_config, emd_out;
  auto* emd = app.add_subcommand("emd", "exact small-instance earth-mover distance");
  emd->add_option("--config", emd_config, "joint description (JSON)")->required();
  emd->add_option("--out", emd_out, "output path (default: stdout)");

  auto* calibrate = app.add_subcommand("calibrate", "measure tester/compression constants");
  calibrate->require_subcommand(1);
  int cal_k = 30, cal_ell = 2;
  double cal_alpha = 0.3, cal_gamma = 0.0, cal_beta = 0.05;
  long cal_seeds = 2000, cal_n = 10000, cal_trials = 2000;
  std::string cal_out;
  auto* cal_comp = calibrate->add_subcommand("compression", "distance retention of partitions");
  cal_comp->add_option("--k", cal_k);
  cal_comp->add_option("--ell", cal_ell);
  cal_comp->add_option("--alpha", cal_alpha);
  cal_comp->add_option("--seeds", cal_seeds);
  cal_comp->add_option("--out", cal_out);
  auto* cal_test = calibrate->add_subcommand("tester", "null quantile and threshold");
  cal_test->add_option("--k", cal_k);
  cal_test->add_option("--n", cal_n);
  cal_test->add_option("--gamma", cal_gamma);
  cal_test->add_option("--beta", cal_beta);
  cal_test->add_option("--trials", cal_trials);
  cal_test->add_option("--out", cal_out);
  auto* cal_batched = calibrate->add_subcommand("compressed", "power of the batched tester");
  cal_batched->add_option("--k", cal_k);
  cal_batched->add_option("--ell", cal_ell);
  cal_batched->add_option("--n", cal_n);
  cal_batched->add_option("--trials", cal_trials);
  cal_batched->add_option("--out", cal_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (learn->parsed()) return run_experiment_cmd(learn_flags, robustdist::Task::kDL);
    if (test->parsed()) return run_experiment_cmd(test_flags, robustdist::Task::kIT);
    if (bounds->parsed()) return run_bounds_cmd(bounds_flags);
    if (emd->parsed()) return run_emd_cmd(emd_config, emd_out);
    if (calibrate->parsed()) {
      if (cal_comp->parsed()) {
        return run_calibrate_compression(cal_k, cal_ell, cal_alpha, cal_seeds, cal_out);
      }
      if (cal_test->parsed()) {
        return run_calibrate_tester(cal_k, cal_n, cal_gamma, cal_beta, cal_trials, cal_out);
      }
      if (cal_batched->parsed()) {
        return run_calibrate_compressed(cal_k, cal_ell, cal_n, cal_trials, cal_out);
      }
    }
  } catch (const robustdist::ConfigError& e) {
    std::cerr << "config error(s):\n";
    for (const auto& issue : e.issues()) std::cerr << "  - " << issue << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
