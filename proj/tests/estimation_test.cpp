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

#include "robustdist/estimation.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

namespace robustdist {
namespace {

TEST(EmpiricalEstimator, CountsAndPointMass) {
  const std::vector<int> z{0, 0, 1, 2};
  const auto report = empirical_estimator(z, 4);
  EXPECT_EQ(report.raw, (std::vector<double>{0.5, 0.25, 0.25, 0.0}));
  EXPECT_EQ(report.projected.probs(), report.raw);

  const std::vector<int> single{3};
  const auto point = empirical_estimator(single, 5);
  EXPECT_EQ(point.projected.probs(), (std::vector<double>{0, 0, 0, 1.0, 0}));

  EXPECT_THROW(empirical_estimator(std::vector<int>{5}, 4), std::invalid_argument);
}

TEST(HashingEstimator, SingleUserClosedForm) {
  // One user, two symbols, one bit: symbol 0 -> bin 0, symbol 1 -> bin 1.
  HashFunction h;
  h.k = 2;
  h.ell = 1;
  h.table = {0, 1};
  const std::vector<int> z{0};
  const auto report = hashing_estimator(z, std::vector<HashFunction>{h}, 1, 2);
  ASSERT_EQ(report.raw.size(), 2u);
  EXPECT_DOUBLE_EQ(report.raw[0], 1.0);
  EXPECT_DOUBLE_EQ(report.raw[1], -1.0);
  EXPECT_DOUBLE_EQ(report.projected[0], 1.0);
  EXPECT_DOUBLE_EQ(report.projected[1], 0.0);
}

TEST(HashingEstimator, CenteredCountsGiveUniform) {
  // Four users, each "hits" a different symbol so every symbol is hit by
  // exactly n / 2^ell = 2 of the 4 users; the centered estimate is flat.
  const int k = 2, ell = 1;
  std::vector<HashFunction> hashes(4);
  hashes[0].table = {0, 0};
  hashes[1].table = {0, 0};
  hashes[2].table = {1, 1};
  hashes[3].table = {1, 1};
  for (auto& h : hashes) {
    h.k = k;
    h.ell = ell;
  }
  const std::vector<int> z{0, 1, 0, 1};  // each user's report hits one table side
  const auto report = hashing_estimator(z, hashes, ell, k);
  EXPECT_DOUBLE_EQ(report.raw[0], 0.0);
  EXPECT_DOUBLE_EQ(report.raw[1], 0.0);
  EXPECT_DOUBLE_EQ(report.projected[0], 0.5);
  EXPECT_DOUBLE_EQ(report.projected[1], 0.5);
}

TEST(HashingEstimator, RejectsBadShapes) {
  HashFunction h;
  h.k = 2;
  h.ell = 1;
  h.table = {0, 1};
  EXPECT_THROW(hashing_estimator(std::vector<int>{0, 1}, std::vector<HashFunction>{h}, 1, 2),
               std::invalid_argument);
  EXPECT_THROW(hashing_estimator(std::vector<int>{0}, std::vector<HashFunction>{h}, 0, 2),
               std::invalid_argument);
  EXPECT_THROW(hashing_estimator(std::vector<int>{2}, std::vector<HashFunction>{h}, 1, 2),
               std::invalid_argument);
}

// Exhaustive single-sample identity: averaging the bin-hit indicator over all
// hash tables and the sample law gives p(x) + (1 - p(x)) / 2^ell, and the
// decoder inverts it exactly, coordinate by coordinate.
TEST(HashingEstimator, SingleSampleIdentityExhaustive) {
  for (const int ell : {1, 2}) {
    const int bins = 1 << ell;
    for (const int k : {2, 3, 5}) {
      std::vector<double> probs(static_cast<size_t>(k));
      for (int x = 0; x < k; ++x) probs[static_cast<size_t>(x)] = (x + 1.0);
      double total = 0.0;
      for (double v : probs) total += v;
      for (auto& v : probs) v /= total;
      double fix = 0.0;
      for (double v : probs) fix += v;
      probs.back() += 1.0 - fix;
      const Distribution p(probs);

      long tables = 1;
      for (int i = 0; i < k; ++i) tables *= bins;

      for (int x = 0; x < k; ++x) {
        double indicator_mean = 0.0;   // E[1{h(x) = h(X)}]
        double estimator_mean = 0.0;   // E[raw(x)] for n = 1
        for (long code = 0; code < tables; ++code) {
          HashFunction h;
          h.k = k;
          h.ell = ell;
          h.table.resize(static_cast<size_t>(k));
          long rest = code;
          for (int i = 0; i < k; ++i) {
            h.table[static_cast<size_t>(i)] = static_cast<int>(rest % bins);
            rest /= bins;
          }
          for (int sample_x = 0; sample_x < k; ++sample_x) {
            const double weight = p[sample_x] / static_cast<double>(tables);
            const std::vector<int> z{h(sample_x)};
            if (h(x) == h(sample_x)) indicator_mean += weight;
            const auto report = hashing_estimator(z, std::vector<HashFunction>{h}, ell, k);
            estimator_mean += weight * report.raw[static_cast<size_t>(x)];
          }
        }
        const double expected_indicator = p[x] + (1.0 - p[x]) / bins;
        EXPECT_NEAR(indicator_mean, expected_indicator, 1e-12);
        EXPECT_NEAR(estimator_mean, p[x], 1e-12);
      }
    }
  }
}

// Monte Carlo unbiasedness at a moderate size: the coordinatewise mean of the
// raw estimate stays within 4 standard errors of the truth.
TEST(HashingEstimator, MonteCarloUnbiasedness) {
  const int k = 32, ell = 3;
  const long n = 4000;
  const int repeats = 200;
  std::vector<double> probs(static_cast<size_t>(k));
  for (int x = 0; x < k; ++x) probs[static_cast<size_t>(x)] = 1.0 + (x % 5);
  double total = 0.0;
  for (double v : probs) total += v;
  for (auto& v : probs) v /= total;
  double fix = 0.0;
  for (double v : probs) fix += v;
  probs.back() += 1.0 - fix;
  const Distribution p(probs);

  std::vector<double> mean(static_cast<size_t>(k), 0.0);
  std::vector<double> sq(static_cast<size_t>(k), 0.0);
  for (int r = 0; r < repeats; ++r) {
    const std::uint64_t seed = derive_seed(909, "rep", static_cast<std::uint64_t>(r));
    const auto x = sample(p, n, derive_seed(seed, "samples"));
    std::vector<HashFunction> hashes(static_cast<size_t>(n));
    std::vector<int> z(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
      hashes[static_cast<size_t>(i)] =
          random_hash_function(k, ell, derive_seed(seed, "hash", static_cast<std::uint64_t>(i)));
      z[static_cast<size_t>(i)] = hashes[static_cast<size_t>(i)](x.values[static_cast<size_t>(i)]);
    }
    const auto report = hashing_estimator(z, hashes, ell, k);
    for (int c = 0; c < k; ++c) {
      mean[static_cast<size_t>(c)] += report.raw[static_cast<size_t>(c)];
      sq[static_cast<size_t>(c)] += report.raw[static_cast<size_t>(c)] * report.raw[static_cast<size_t>(c)];
    }
  }
  for (int c = 0; c < k; ++c) {
    const double m = mean[static_cast<size_t>(c)] / repeats;
    const double var = sq[static_cast<size_t>(c)] / repeats - m * m;
    const double se = std::sqrt(std::max(var, 1e-18) / repeats);
    EXPECT_NEAR(m, p[c], 4.0 * se) << "coordinate " << c;
  }
}

TEST(HashingEstimator, ReplayIdentical) {
  const int k = 16, ell = 2;
  const long n = 200;
  const auto x = sample(Distribution::uniform(k), n, 404);
  std::vector<HashFunction> hashes(static_cast<size_t>(n));
  std::vector<int> z(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    hashes[static_cast<size_t>(i)] =
        random_hash_function(k, ell, derive_seed(404, "hash", static_cast<std::uint64_t>(i)));
    z[static_cast<size_t>(i)] = hashes[static_cast<size_t>(i)](x.values[static_cast<size_t>(i)]);
  }
  const auto a = hashing_estimator(z, hashes, ell, k);
  const auto b = hashing_estimator(z, hashes, ell, k);
  EXPECT_EQ(a.raw, b.raw);
  EXPECT_EQ(a.projected.probs(), b.projected.probs());
}

}  // namespace
}  // namespace robustdist
