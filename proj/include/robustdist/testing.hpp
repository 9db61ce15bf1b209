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

#ifndef ROBUSTDIST_TESTING_HPP_
#define ROBUSTDIST_TESTING_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "robustdist/distribution.hpp"

namespace robustdist {

// How the accept threshold is fixed.
//  - kAnalytic: threshold = c2 * alpha^2 * min{n^2/k^2, sqrt(n/k), 1/alpha}.
//  - kCalibrated (default): the larger of the analytic term and the
//    (1 - beta) quantile of the null statistic's deviation from its mean,
//    estimated once from seeded uniform transcripts, plus the worst-case
//    shift min(gamma, n*gamma/k) an attacker with budget gamma can cause.
enum class ThresholdMode { kAnalytic, kCalibrated };

struct TesterConfig {
  double alpha = 0.1;  // distance the test is asked to detect
  double gamma = 0.0;  // corruption budget the threshold must absorb
  double c2 = 0.1;     // analytic threshold constant
  double beta = 0.05;  // per-test failure probability target
  long calibration_trials = 2000;
  std::uint64_t calibration_seed = 0x632d746872657368ULL;
  ThresholdMode mode = ThresholdMode::kCalibrated;
};

// Outcome of one test. yes holds exactly when statistic - mu <= threshold.
// The batched tester fills `batches` with per-batch details and encodes its
// all-yes combination as statistic = max over batches of the threshold slack,
// with mu = threshold = 0.
struct TestVerdict {
  bool yes = false;
  double statistic = 0.0;
  double mu = 0.0;
  double threshold = 0.0;
  std::vector<TestVerdict> batches;
};

// Empirical TV distance of the transcript's histogram to uniform:
// S(z) = 1/2 * sum_x | count_x / n - 1/k |.
double s_statistic(std::span<const int> z, int k);

// Exact E[S] under n uniform draws: (k/2) * E|B/n - 1/k| with B binomial,
// summed over the binomial pmf in log space.
double mean_s_uniform(int k, long n);

// The analytic accept margin at distance alpha.
double analytic_threshold(int k, long n, double alpha, double c2);

// (1 - beta)-quantile of S - mu over seeded uniform transcripts. Results are
// memoized; repeated calls with equal arguments are cheap and identical.
double null_deviation_quantile(int k, long n, long trials, double prob, std::uint64_t seed);

// A uniformity test with its centering constant and threshold frozen, so one
// calibration serves many transcripts.
struct UniformityTester {
  int k = 0;
  long n = 0;
  TesterConfig cfg;
  double mu = 0.0;
  double threshold = 0.0;

  TestVerdict apply(std::span<const int> z) const;
};

UniformityTester make_uniformity_tester(int k, long n, const TesterConfig& cfg);

// One-shot form of the above.
TestVerdict uniformity_test(std::span<const int> z, int k, const TesterConfig& cfg);

// Randomized map G from [k] to [6k] that turns identity testing against q
// into uniformity testing: q maps exactly onto uniform over [6k], while any
// p keeps at least a third of its TV distance to q. The construction mixes
// the input with uniform (half weight each), grains q' = (q + u)/2 into
// floor(6k * q'(i)) >= 3 private buckets per symbol, and routes the residual
// mass to a shared leftover range.
struct GoldreichMap {
  int k = 0;
  Distribution q;
  std::vector<double> matrix;                  // k rows by 6k columns
  std::vector<std::pair<int, int>> buckets;    // [begin, end) per symbol
  std::pair<int, int> leftover{0, 0};          // [begin, end)

  int out_size() const noexcept { return 6 * k; }
  double prob(int j, int x) const noexcept {
    return matrix[static_cast<size_t>(x) * static_cast<size_t>(out_size()) +
                  static_cast<size_t>(j)];
  }
};

GoldreichMap goldreich_map(const Distribution& q);

// Draw from row x of the map.
int goldreich_apply(const GoldreichMap& map, int x, Rng& rng);

// Identity tester: applies the map per sample (seeded), then runs the
// uniformity test on [6k] at distance alpha/3.
struct IdentityTester {
  GoldreichMap map;
  std::vector<double> row_cdf;  // per-row cumulative sums for fast draws
  UniformityTester uniformity;

  TestVerdict apply(std::span<const int> z, std::uint64_t seed) const;
};

IdentityTester make_identity_tester(const Distribution& q, long n, const TesterConfig& cfg);

TestVerdict identity_test(std::span<const int> z, const Distribution& q,
                          const TesterConfig& cfg, std::uint64_t seed);

// Distance-preservation constants of the shared-randomness domain compression
// step: a random near-balanced partition keeps TV >= c1 * alpha *
// sqrt(2^ell / k) with probability >= c2 over the partition. Measured with
// `robustdist calibrate compression`; see that subcommand to reproduce.
struct CompressionConstants {
  double c1 = 0.5;
  double c2 = 0.5;
};

inline constexpr CompressionConstants kCompressionDefaults{};

// Number of disjoint batches the compressed tester uses.
int compression_batches(double c2);

// Public-randomness half of the batched protocol: users are split into N
// near-equal contiguous batches, and each batch gets its own near-balanced
// partition of [k] into 2^ell cells (the identity when 2^ell >= k).
struct CompressedProtocol {
  int k = 0;
  int ell = 0;
  long n = 0;
  int batches = 0;
  long bins = 0;  // effective message alphabet, min(2^ell, k)
  bool compress = false;
  std::vector<long> offsets;                     // batches + 1 boundaries
  std::vector<std::vector<std::int32_t>> cells;  // per-batch symbol -> cell

  long batch_of(long user) const;
};

CompressedProtocol make_compressed_protocol(int k, int ell, long n, std::uint64_t seed,
                                            const CompressionConstants& constants = kCompressionDefaults);

// What the users send: each sample mapped through its batch's partition.
std::vector<int> compressed_messages(const CompressedProtocol& proto, std::span<const int> x);

// Server half: per batch, run the identity tester against the compressed
// reference at distance c1 * alpha * sqrt(2^ell / k), with per-batch failure
// probability beta = min{c2/2, 1 - (9/10)^(1/N)} and corruption slack
// N * gamma. Yes only if every batch says yes.
TestVerdict compressed_verdict(const CompressedProtocol& proto, std::span<const int> z,
                               const Distribution& q, const TesterConfig& cfg,
                               std::uint64_t seed,
                               const CompressionConstants& constants = kCompressionDefaults);

// Precomputes the memoized per-batch calibration quantiles so concurrent
// trials only read the cache.
void warm_compressed_thresholds(int k, int ell, long n, const TesterConfig& cfg,
                                const CompressionConstants& constants = kCompressionDefaults);

// The whole pipeline, unattacked: protocol, messages, verdict.
TestVerdict compressed_identity_test(std::span<const int> x, int k, int ell,
                                     const Distribution& q, const TesterConfig& cfg,
                                     std::uint64_t seed,
                                     const CompressionConstants& constants = kCompressionDefaults);

// The smallest distance the batched tester is calibrated to detect, derived
// from the batch-level rate formula: scale * sqrt(k / 2^ell) *
// rate_it(2^ell, n/N, N*gamma). `scale` folds in 1/c1 and the tester's own
// constants; the shipped value comes from `robustdist calibrate compressed`.
double compressed_testable_alpha(int k, int ell, long n, double gamma, double scale,
                                 const CompressionConstants& constants = kCompressionDefaults);

// Calibrated default for `scale` above.
inline constexpr double kCompressedDistanceScale = 4.0;

}  // namespace robustdist

#endif  // ROBUSTDIST_TESTING_HPP_
