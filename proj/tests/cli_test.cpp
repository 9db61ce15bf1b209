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

// End-to-end checks of the command line tool: exit codes, file output, and
// run-to-run reproducibility of emitted reports.

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>

#include "gtest/gtest.h"

#ifndef ROBUSTDIST_CLI_PATH
#error "ROBUSTDIST_CLI_PATH must be defined by the build"
#endif

namespace {

int run_command(const std::string& args) {
  const std::string command = std::string(ROBUSTDIST_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string write_temp(const std::string& name, const std::string& contents) {
  const std::string path = ::testing::TempDir() + "/" + name;
  std::ofstream out(path);
  out << contents;
  return path;
}

constexpr const char* kLearnConfig = R"json({
  "task": "DL", "k": 6, "n": 300,
  "constraint": {"kind": "unconstrained"},
  "gamma_grid": [0.0, 0.1],
  "source": {"kind": "uniform"},
  "attack": {"name": "flatten"},
  "estimator": "empirical",
  "trials": 16, "master_seed": 11
})json";

TEST(Cli, LearnProducesByteIdenticalReportsAcrossRunsAndWorkers) {
  const std::string cfg = write_temp("cli_learn.json", kLearnConfig);
  const std::string out1 = ::testing::TempDir() + "/cli_r1.csv";
  const std::string out2 = ::testing::TempDir() + "/cli_r2.csv";
  const std::string out8 = ::testing::TempDir() + "/cli_r8.csv";
  ASSERT_EQ(run_command("learn --config " + cfg + " --workers 1 --out " + out1), 0);
  ASSERT_EQ(run_command("learn --config " + cfg + " --workers 1 --out " + out2), 0);
  ASSERT_EQ(run_command("learn --config " + cfg + " --workers 8 --out " + out8), 0);
  const std::string first = slurp(out1);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(out2));
  EXPECT_EQ(first, slurp(out8));
}

TEST(Cli, JsonFormatAlsoStable) {
  const std::string cfg = write_temp("cli_learn2.json", kLearnConfig);
  const std::string out1 = ::testing::TempDir() + "/cli_j1.json";
  const std::string out2 = ::testing::TempDir() + "/cli_j8.json";
  ASSERT_EQ(run_command("learn --config " + cfg + " --workers 1 --format json --out " + out1), 0);
  ASSERT_EQ(run_command("learn --config " + cfg + " --workers 8 --format json --out " + out2), 0);
  EXPECT_EQ(slurp(out1), slurp(out2));
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_command("learn --config /definitely/missing.json"), 2);
  const std::string bad = write_temp("cli_bad.json", R"json({
    "task": "DL", "k": 1, "n": 0,
    "estimator": "nope", "trials": 0, "master_seed": 1
  })json");
  EXPECT_EQ(run_command("learn --config " + bad), 2);
  // A testing config fed to `learn` is a config error.
  const std::string ut = write_temp("cli_ut.json", R"json({
    "task": "UT", "k": 4, "n": 50,
    "source": {"kind": "paninski", "alpha": 0.3},
    "tester": {"alpha": 0.3, "calibration_trials": 100},
    "trials": 5, "master_seed": 1
  })json");
  EXPECT_EQ(run_command("learn --config " + ut), 2);
  EXPECT_EQ(run_command("test --config " + ut), 0);
}

TEST(Cli, RuntimeFailuresExitThree) {
  const std::string cfg = write_temp("cli_learn3.json", kLearnConfig);
  EXPECT_EQ(run_command("learn --config " + cfg + " --out /nonexistent-dir/out.csv"), 3);
}

TEST(Cli, BoundsAndEmdSubcommands) {
  EXPECT_EQ(run_command("bounds --task it --k 100 --n 1000,10000 --gamma 0,0.01"), 0);
  const std::string joint = write_temp("cli_joint.json", R"json({
    "product": {"p": [[1.0, 0.0], [1.0, 0.0]], "q": [[0.0, 1.0], [0.0, 1.0]]}
  })json");
  const std::string out = ::testing::TempDir() + "/emd.json";
  ASSERT_EQ(run_command("emd --config " + joint + " --out " + out), 0);
  const std::string result = slurp(out);
  EXPECT_NE(result.find("\"emd\": 2.0"), std::string::npos) << result;
}

}  // namespace
