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

#include "robustdist/testing.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "robustdist/adversary.hpp"

namespace robustdist {
namespace {

TEST(SStatistic, HandValues) {
  EXPECT_NEAR(s_statistic(std::vector<int>{0, 0, 1, 2}, 4), 0.25, 1e-15);
  EXPECT_NEAR(s_statistic(std::vector<int>{0, 1, 2, 3}, 4), 0.0, 1e-15);
}

TEST(SStatistic, MissingMassIdentityWhenNSmall) {
  // n = 2 < k = 4 and both seen symbols exceed 1/k, so S equals the number of
  // missing symbols over k.
  const std::vector<int> z{0, 1};
  EXPECT_NEAR(s_statistic(z, 4), 0.5, 1e-15);
  EXPECT_NEAR(s_statistic(z, 4), 2.0 / 4.0, 1e-15);
}

TEST(MeanSUniform, ExactSmallCases) {
  EXPECT_DOUBLE_EQ(mean_s_uniform(2, 2), 0.25);
  EXPECT_DOUBLE_EQ(mean_s_uniform(1, 10), 0.0);
}

TEST(MeanSUniform, MatchesMonteCarlo) {
  const int k = 10;
  const long n = 100;
  const double exact = mean_s_uniform(k, n);
  const long trials = 100000;
  double total = 0.0, total_sq = 0.0;
  std::vector<int> z(static_cast<size_t>(n));
  Rng rng(6060);
  for (long t = 0; t < trials; ++t) {
    for (auto& v : z) v = static_cast<int>(rng.below(k));
    const double s = s_statistic(z, k);
    total += s;
    total_sq += s * s;
  }
  const double mc = total / trials;
  const double sd = std::sqrt(total_sq / trials - mc * mc);
  EXPECT_NEAR(exact, mc, 3.0 * sd / std::sqrt(static_cast<double>(trials)));
}

TEST(MeanSUniform, MonotoneDecreasingInN) {
  for (const int k : {2, 5, 17}) {
    double previous = mean_s_uniform(k, 1);
    for (const long n : {2L, 4L, 8L, 16L, 64L, 256L, 1024L}) {
      const double current = mean_s_uniform(k, n);
      EXPECT_LE(current, previous + 1e-12) << "k=" << k << " n=" << n;
      previous = current;
    }
  }
}

TEST(UniformityTester, BoundaryCaseIsYes) {
  TesterConfig cfg;
  cfg.mode = ThresholdMode::kAnalytic;
  cfg.alpha = 0.2;
  cfg.c2 = 0.1;
  const auto tester = make_uniformity_tester(4, 4, cfg);
  EXPECT_GT(tester.threshold, 0.0);
  // Perfectly balanced counts: S = 0 <= mu + threshold.
  const auto verdict = tester.apply(std::vector<int>{0, 1, 2, 3});
  EXPECT_TRUE(verdict.yes);
  EXPECT_EQ(verdict.statistic - verdict.mu <= verdict.threshold, verdict.yes);
}

TEST(UniformityTester, AnalyticThresholdFormula) {
  // c2 * alpha^2 * min{n^2/k^2, sqrt(n/k), 1/alpha}
  EXPECT_NEAR(analytic_threshold(100, 10000, 0.1, 0.1), 0.1 * 0.01 * 10.0, 1e-12);
  EXPECT_NEAR(analytic_threshold(100, 10, 0.1, 1.0), 1.0 * 0.01 * 0.01, 1e-12);
  EXPECT_NEAR(analytic_threshold(4, 10000, 0.5, 1.0), 1.0 * 0.25 * 2.0, 1e-12);
}

TEST(UniformityTester, NullAcceptanceAndPower) {
  const int k = 50;
  const long n = 5000;
  TesterConfig cfg;
  cfg.alpha = 0.15;
  cfg.calibration_trials = 1500;
  const auto tester = make_uniformity_tester(k, n, cfg);
  const Distribution uniform = Distribution::uniform(k);

  int null_yes = 0, alt_no = 0;
  const int trials = 300;
  for (int t = 0; t < trials; ++t) {
    const auto z = sample(uniform, n, derive_seed(12, "null", static_cast<std::uint64_t>(t)));
    if (tester.apply(z.values).yes) ++null_yes;
    Rng rng(derive_seed(12, "signs", static_cast<std::uint64_t>(t)));
    const auto p = paninski_dist(random_paninski_index(k, cfg.alpha, rng), k);
    const auto za = sample(p, n, derive_seed(12, "alt", static_cast<std::uint64_t>(t)));
    if (!tester.apply(za.values).yes) ++alt_no;
  }
  EXPECT_GE(null_yes, static_cast<int>(0.9 * trials));
  EXPECT_GE(alt_no, static_cast<int>(0.9 * trials));
}

TEST(UniformityTester, VerdictDeterminism) {
  TesterConfig cfg;
  cfg.calibration_trials = 500;
  const auto z = sample(Distribution::uniform(6), 600, 5);
  const auto a = uniformity_test(z.values, 6, cfg);
  const auto b = uniformity_test(z.values, 6, cfg);
  EXPECT_EQ(a.yes, b.yes);
  EXPECT_EQ(a.statistic, b.statistic);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.threshold, b.threshold);
}

TEST(GoldreichMap, HandConstructionForPointMass) {
  // q = (1, 0): q' = (0.75, 0.25), 12 outputs, bucket sizes 9 and 3, no
  // leftover, and every output bucket carries exactly 1/12 under q.
  const auto map = goldreich_map(Distribution({1.0, 0.0}));
  EXPECT_EQ(map.out_size(), 12);
  EXPECT_EQ(map.buckets[0], (std::pair<int, int>{0, 9}));
  EXPECT_EQ(map.buckets[1], (std::pair<int, int>{9, 12}));
  EXPECT_EQ(map.leftover.first, map.leftover.second);
  for (int j = 0; j < 12; ++j) {
    EXPECT_NEAR(map.prob(j, 0), 1.0 / 12.0, 1e-12);  // q is a point mass on 0
  }
}

TEST(GoldreichMap, ReferenceMapsToUniformAndRowsStochastic) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(10));
    std::vector<double> qv(static_cast<size_t>(k));
    double total = 0.0;
    for (auto& v : qv) {
      v = rng.next_double() < 0.2 ? 0.0 : 0.05 + rng.next_double();
      total += v;
    }
    if (total == 0.0) {
      qv[0] = 1.0;
      total = 1.0;
    }
    for (auto& v : qv) v /= total;
    double fix = 0.0;
    for (double v : qv) fix += v;
    qv.back() += 1.0 - fix;
    if (qv.back() < 0) continue;
    const Distribution q(qv);
    const auto map = goldreich_map(q);
    const int out = map.out_size();
    for (int j = 0; j < out; ++j) {
      double mass = 0.0;
      for (int x = 0; x < k; ++x) mass += q[x] * map.prob(j, x);
      EXPECT_NEAR(mass, 1.0 / out, 1e-12);
    }
    for (int x = 0; x < k; ++x) {
      double row = 0.0;
      for (int j = 0; j < out; ++j) row += map.prob(j, x);
      EXPECT_NEAR(row, 1.0, 1e-9);
    }
    // Buckets are disjoint and, together with the leftover, tile [6k].
    int covered = 0;
    for (const auto& [begin, end] : map.buckets) covered += end - begin;
    covered += map.leftover.second - map.leftover.first;
    EXPECT_EQ(covered, out);
  }
}

TEST(GoldreichMap, PreservesAThirdOfTheDistance) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(20));
    std::vector<double> qv(static_cast<size_t>(k)), pv(static_cast<size_t>(k));
    double qt = 0.0, pt = 0.0;
    for (size_t i = 0; i < qv.size(); ++i) {
      qv[i] = 0.02 + rng.next_double();
      pv[i] = 0.02 + rng.next_double();
      qt += qv[i];
      pt += pv[i];
    }
    for (size_t i = 0; i < qv.size(); ++i) {
      qv[i] /= qt;
      pv[i] /= pt;
    }
    double fix = 0.0;
    for (double v : qv) fix += v;
    qv.back() += 1.0 - fix;
    fix = 0.0;
    for (double v : pv) fix += v;
    pv.back() += 1.0 - fix;
    const Distribution q(qv), p(pv);
    const auto map = goldreich_map(q);
    const int out = map.out_size();
    std::vector<double> mapped(static_cast<size_t>(out), 0.0);
    for (int j = 0; j < out; ++j) {
      for (int x = 0; x < k; ++x) mapped[static_cast<size_t>(j)] += p[x] * map.prob(j, x);
    }
    double mapped_tv = 0.0;
    for (int j = 0; j < out; ++j) mapped_tv += std::abs(mapped[static_cast<size_t>(j)] - 1.0 / out);
    mapped_tv *= 0.5;
    EXPECT_GE(mapped_tv, tv_distance(p, q) / 3.0 - 1e-12);
  }
}

TEST(IdentityTester, NullAcceptsAlternateRejects) {
  const int k = 12;
  const long n = 4000;
  std::vector<double> qv(k, 1.0 / k);
  qv[0] += 0.06;
  qv[1] -= 0.06;
  const Distribution q(qv);
  TesterConfig cfg;
  cfg.alpha = 0.25;
  cfg.calibration_trials = 1500;
  const auto tester = make_identity_tester(q, n, cfg);

  int null_yes = 0, alt_no = 0;
  const int trials = 200;
  // Alternate: mix 30% of a point mass into q; TV to q is 0.3 * (1 - q[2]).
  std::vector<double> far(k);
  for (int x = 0; x < k; ++x) far[static_cast<size_t>(x)] = 0.7 * q[x];
  far[2] += 0.3;
  const Distribution alt(far);
  ASSERT_GE(tv_distance(alt, q), 0.25);
  for (int t = 0; t < trials; ++t) {
    const auto z = sample(q, n, derive_seed(77, "null", static_cast<std::uint64_t>(t)));
    if (tester.apply(z.values, derive_seed(77, "m1", static_cast<std::uint64_t>(t))).yes) {
      ++null_yes;
    }
    const auto za = sample(alt, n, derive_seed(77, "alt", static_cast<std::uint64_t>(t)));
    if (!tester.apply(za.values, derive_seed(77, "m2", static_cast<std::uint64_t>(t))).yes) {
      ++alt_no;
    }
  }
  EXPECT_GE(null_yes, static_cast<int>(0.9 * trials));
  EXPECT_GE(alt_no, static_cast<int>(0.9 * trials));
}

TEST(CompressionBatches, CountFormula) {
  // c2 = 0.5: ceil(log(0.1) / log(0.75)) = 9.
  EXPECT_EQ(compression_batches(0.5), 9);
  EXPECT_EQ(compression_batches(1.0), 4);  // ceil(log(0.1) / log(0.5))
  EXPECT_THROW(compression_batches(0.0), std::invalid_argument);
}

TEST(CompressedProtocol, BatchSizesAndDegenerateCompression) {
  const auto proto = make_compressed_protocol(60, 2, 100, 5);
  EXPECT_EQ(proto.batches, 9);
  long total = 0;
  for (int j = 0; j < proto.batches; ++j) {
    const long size = proto.offsets[static_cast<size_t>(j) + 1] - proto.offsets[static_cast<size_t>(j)];
    EXPECT_GE(size, 100 / 9);
    EXPECT_LE(size, 100 / 9 + 1);
    total += size;
  }
  EXPECT_EQ(total, 100);
  EXPECT_TRUE(proto.compress);

  // 2^ell >= k: the compression step is the identity.
  const auto identity_proto = make_compressed_protocol(4, 3, 50, 5);
  EXPECT_FALSE(identity_proto.compress);
  std::vector<int> x(50);
  for (size_t i = 0; i < x.size(); ++i) x[i] = static_cast<int>(i % 4);
  EXPECT_EQ(compressed_messages(identity_proto, x), x);
}

TEST(CompressedTester, NullYesRateMeetsTarget) {
  const int k = 30, ell = 2;
  const long n = 3000;
  const Distribution q = Distribution::uniform(k);
  TesterConfig cfg;
  cfg.alpha = 0.4;
  cfg.calibration_trials = 3000;
  warm_compressed_thresholds(k, ell, n, cfg);
  int yes = 0;
  const int trials = 150;
  for (int t = 0; t < trials; ++t) {
    const auto x = sample(q, n, derive_seed(55, "null", static_cast<std::uint64_t>(t)));
    const auto verdict = compressed_identity_test(
        x.values, k, ell, q, cfg, derive_seed(55, "test", static_cast<std::uint64_t>(t)));
    EXPECT_EQ(verdict.batches.size(), 9u);
    EXPECT_EQ(verdict.yes, verdict.statistic - verdict.mu <= verdict.threshold);
    if (verdict.yes) ++yes;
  }
  const double rate = static_cast<double>(yes) / trials;
  const double se = std::sqrt(rate * (1.0 - rate) / trials);
  EXPECT_GE(rate, 0.9 - 2.0 * se - 1e-9);
}

TEST(CompressedTester, VerdictDeterminism) {
  const int k = 20, ell = 1;
  const long n = 400;
  const Distribution q = Distribution::uniform(k);
  TesterConfig cfg;
  cfg.calibration_trials = 400;
  const auto x = sample(q, n, 31);
  const auto a = compressed_identity_test(x.values, k, ell, q, cfg, 77);
  const auto b = compressed_identity_test(x.values, k, ell, q, cfg, 77);
  EXPECT_EQ(a.yes, b.yes);
  EXPECT_EQ(a.statistic, b.statistic);
  ASSERT_EQ(a.batches.size(), b.batches.size());
  for (size_t j = 0; j < a.batches.size(); ++j) {
    EXPECT_EQ(a.batches[j].statistic, b.batches[j].statistic);
    EXPECT_EQ(a.batches[j].threshold, b.batches[j].threshold);
  }
}

// The empirical-distance perturbation bound, checked against every attack in
// the library on fuzzed transcripts.
TEST(PerturbationBound, HoldsForAllLibraryAttacks) {
  Rng rng(424242);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(8));
    const long n = 1 + static_cast<long>(rng.below(100));
    const double gamma = rng.next_double();
    const AttackBudget budget(gamma, n);
    std::vector<int> y(static_cast<size_t>(n));
    for (auto& v : y) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    const double s_before = s_statistic(y, k);
    const double bound =
        std::min(gamma, static_cast<double>(n) * gamma / static_cast<double>(k)) + 1e-12;

    const auto plan = shared_coupling_plan(Distribution::uniform(k),
                                           Distribution::point_mass(k, 0), n);
    const std::vector<AttackOutcome> outcomes = {
        null_attack(y, budget),
        flatten_attack(y, k, budget),
        spike_attack(y, static_cast<int>(rng.below(static_cast<std::uint64_t>(k))), k, budget),
        coupling_attack(y, plan, budget, trial),
        coupling_attack(y, plan, budget, trial, BudgetPolicy::kStrict),
    };
    for (const auto& out : outcomes) {
      EXPECT_LE(std::abs(s_before - s_statistic(out.z, k)), bound);
    }
  }
}

}  // namespace
}  // namespace robustdist
