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

#include "robustdist/emd.hpp"

#include <vector>

#include "gtest/gtest.h"

namespace robustdist {
namespace {

Distribution random_distribution(int k, Rng& rng) {
  std::vector<double> v(static_cast<size_t>(k));
  double total = 0.0;
  for (auto& x : v) {
    x = 0.05 + rng.next_double();
    total += x;
  }
  for (auto& x : v) x /= total;
  double sum = 0.0;
  for (double x : v) sum += x;
  v.back() += 1.0 - sum;
  return Distribution(v);
}

TEST(FiniteJoint, ValidatesShapeAndMass) {
  EXPECT_NO_THROW(FiniteJoint({2, 2}, {0.25, 0.25, 0.25, 0.25}));
  EXPECT_THROW(FiniteJoint({2, 2}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(FiniteJoint({2}, {0.9, 0.2}), std::invalid_argument);
  EXPECT_THROW(FiniteJoint({40, 40, 40, 40}, {}, 1000), std::invalid_argument);  // cap
}

TEST(FiniteJoint, DecodeIsLexicographicLastFastest) {
  const FiniteJoint j({2, 3}, {1.0, 0, 0, 0, 0, 0});
  EXPECT_EQ(j.decode(0), (std::vector<int>{0, 0}));
  EXPECT_EQ(j.decode(2), (std::vector<int>{0, 2}));
  EXPECT_EQ(j.decode(3), (std::vector<int>{1, 0}));
  EXPECT_EQ(j.decode(5), (std::vector<int>{1, 2}));
}

TEST(ProductJoint, MatchesManualProduct) {
  const Distribution a({0.25, 0.75});
  const Distribution b({0.5, 0.5});
  const auto joint = product_joint(std::vector<Distribution>{a, b});
  EXPECT_NEAR(joint.mass[0], 0.125, 1e-15);  // (0,0)
  EXPECT_NEAR(joint.mass[1], 0.125, 1e-15);  // (0,1)
  EXPECT_NEAR(joint.mass[2], 0.375, 1e-15);  // (1,0)
  EXPECT_NEAR(joint.mass[3], 0.375, 1e-15);  // (1,1)
}

TEST(ExactEmd, ZeroOnIdenticalJoints) {
  Rng rng(5);
  const auto p = random_distribution(3, rng);
  const auto joint = product_joint(std::vector<Distribution>{p, p});
  EXPECT_NEAR(exact_emd_hamming(joint, joint), 0.0, 1e-12);
}

TEST(ExactEmd, SingleCoordinateEqualsTv) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(4));
    const Distribution p = random_distribution(k, rng);
    const Distribution q = random_distribution(k, rng);
    const auto jp = product_joint(std::vector<Distribution>{p});
    const auto jq = product_joint(std::vector<Distribution>{q});
    EXPECT_NEAR(exact_emd_hamming(jp, jq), tv_distance(p, q), 1e-9);
  }
}

TEST(ExactEmd, AllCoordinatesMustMove) {
  const Distribution one({0.0, 1.0});
  const Distribution zero({1.0, 0.0});
  const auto jp = product_joint(std::vector<Distribution>{one, one});
  const auto jq = product_joint(std::vector<Distribution>{zero, zero});
  EXPECT_NEAR(exact_emd_hamming(jp, jq), 2.0, 1e-12);
}

TEST(ExactEmd, RejectsSupportMismatch) {
  const FiniteJoint a({2}, {0.5, 0.5});
  const FiniteJoint b({3}, {0.5, 0.25, 0.25});
  EXPECT_THROW(exact_emd_hamming(a, b), std::invalid_argument);
}

TEST(NaiveCouplingBound, SumsPerCoordinateTv) {
  const Distribution a({0.5, 0.5});
  EXPECT_DOUBLE_EQ(
      naive_coupling_emd_bound(std::vector<Distribution>{a, a}, std::vector<Distribution>{a, a}),
      0.0);
  const Distribution p1({0.6, 0.4}), q1({0.4, 0.6});  // tv 0.2
  const Distribution p2({0.8, 0.2}), q2({0.5, 0.5});  // tv 0.3
  EXPECT_NEAR(naive_coupling_emd_bound(std::vector<Distribution>{p1, p2},
                                       std::vector<Distribution>{q1, q2}),
              0.5, 1e-12);
  EXPECT_THROW(naive_coupling_emd_bound(std::vector<Distribution>{p1},
                                        std::vector<Distribution>{q1, q2}),
               std::invalid_argument);
}

// The independent-coordinates coupling is one feasible transport plan, so the
// exact optimum can never exceed it.
TEST(NaiveCouplingBound, DominatesExactEmdOnFuzzedProducts) {
  Rng rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const int coords = 1 + static_cast<int>(rng.below(3));
    std::vector<Distribution> ps, qs;
    for (int c = 0; c < coords; ++c) {
      const int k = 2 + static_cast<int>(rng.below(3));
      ps.push_back(random_distribution(k, rng));
      qs.push_back(random_distribution(k, rng));
    }
    const double exact = exact_emd_hamming(product_joint(ps), product_joint(qs));
    const double bound = naive_coupling_emd_bound(ps, qs);
    EXPECT_LE(exact, bound + 1e-9);
    EXPECT_GE(exact, -1e-12);
  }
}

TEST(MixJoints, WeightsAndSupportChecked) {
  const Distribution a({0.25, 0.75});
  const Distribution b({0.75, 0.25});
  const auto ja = product_joint(std::vector<Distribution>{a});
  const auto jb = product_joint(std::vector<Distribution>{b});
  const auto mix = mix_joints(std::vector<FiniteJoint>{ja, jb}, std::vector<double>{0.5, 0.5});
  EXPECT_NEAR(mix.mass[0], 0.5, 1e-15);
  EXPECT_NEAR(mix.mass[1], 0.5, 1e-15);
}

}  // namespace
}  // namespace robustdist
