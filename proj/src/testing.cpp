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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "robustdist/bounds.hpp"

namespace robustdist {

namespace {

// Memoized by value arguments; entries are deterministic so concurrent
// computation of the same key is harmless.
std::mutex g_cache_mutex;
std::map<std::tuple<int, long, long, double, std::uint64_t>, double> g_quantile_cache;
std::map<std::pair<int, long>, double> g_mu_cache;

double mean_s_uniform_exact(int k, long n) {
  const double log_p = -std::log(static_cast<double>(k));
  const double log_1mp = std::log1p(-1.0 / static_cast<double>(k));
  const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double inv_k = 1.0 / static_cast<double>(k);
  double expectation = 0.0;
  for (long b = 0; b <= n; ++b) {
    const double log_pmf = log_n_fact - std::lgamma(static_cast<double>(b) + 1.0) -
                           std::lgamma(static_cast<double>(n - b) + 1.0) +
                           static_cast<double>(b) * log_p +
                           static_cast<double>(n - b) * log_1mp;
    expectation += std::exp(log_pmf) * std::abs(static_cast<double>(b) * inv_n - inv_k);
  }
  return 0.5 * static_cast<double>(k) * expectation;
}

double compute_null_quantile(int k, long n, long trials, double prob, std::uint64_t seed) {
  const double mu = mean_s_uniform(k, n);
  std::vector<double> deviation(static_cast<size_t>(trials));
  std::vector<long> count(static_cast<size_t>(k));
  for (long t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, "null-calibration", static_cast<std::uint64_t>(t)));
    std::fill(count.begin(), count.end(), 0L);
    for (long i = 0; i < n; ++i) {
      ++count[static_cast<size_t>(rng.below(static_cast<std::uint64_t>(k)))];
    }
    double s = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_k = 1.0 / static_cast<double>(k);
    for (int x = 0; x < k; ++x) {
      s += std::abs(static_cast<double>(count[static_cast<size_t>(x)]) * inv_n - inv_k);
    }
    deviation[static_cast<size_t>(t)] = 0.5 * s - mu;
  }
  std::sort(deviation.begin(), deviation.end());
  // Conservative order statistic: rank ceil(prob * (T + 1)) rather than
  // ceil(prob * T), so estimation noise leans toward accepting the null.
  long index = static_cast<long>(std::ceil(prob * static_cast<double>(trials + 1))) - 1;
  index = std::clamp(index, 0L, trials - 1);
  return deviation[static_cast<size_t>(index)];
}

}  // namespace

double s_statistic(std::span<const int> z, int k) {
  if (k < 1) throw std::invalid_argument("s_statistic: need k >= 1");
  if (z.empty()) throw std::invalid_argument("s_statistic: empty transcript");
  std::vector<long> count(static_cast<size_t>(k), 0);
  for (int symbol : z) {
    if (symbol < 0 || symbol >= k) {
      throw std::invalid_argument("s_statistic: symbol out of range");
    }
    ++count[static_cast<size_t>(symbol)];
  }
  const double inv_n = 1.0 / static_cast<double>(z.size());
  const double inv_k = 1.0 / static_cast<double>(k);
  double sum = 0.0;
  for (int x = 0; x < k; ++x) {
    sum += std::abs(static_cast<double>(count[static_cast<size_t>(x)]) * inv_n - inv_k);
  }
  return 0.5 * sum;
}

double mean_s_uniform(int k, long n) {
  if (k < 1 || n < 1) throw std::invalid_argument("mean_s_uniform: need k, n >= 1");
  if (k == 1) return 0.0;
  const auto key = std::make_pair(k, n);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    if (const auto it = g_mu_cache.find(key); it != g_mu_cache.end()) return it->second;
  }
  const double value = mean_s_uniform_exact(k, n);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_mu_cache.emplace(key, value);
  return value;
}

double analytic_threshold(int k, long n, double alpha, double c2) {
  if (!(alpha > 0.0)) return 0.0;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double scale = std::min({nd * nd / (kd * kd), std::sqrt(nd / kd), 1.0 / alpha});
  return c2 * alpha * alpha * scale;
}

double null_deviation_quantile(int k, long n, long trials, double prob, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("null_deviation_quantile: need trials >= 1");
  const auto key = std::make_tuple(k, n, trials, prob, seed);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    if (const auto it = g_quantile_cache.find(key); it != g_quantile_cache.end()) {
      return it->second;
    }
  }
  const double value = compute_null_quantile(k, n, trials, prob, seed);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_quantile_cache.emplace(key, value);
  return value;
}

UniformityTester make_uniformity_tester(int k, long n, const TesterConfig& cfg) {
  if (k < 2) throw std::invalid_argument("make_uniformity_tester: need k >= 2");
  if (n < 1) throw std::invalid_argument("make_uniformity_tester: need n >= 1");
  UniformityTester tester;
  tester.k = k;
  tester.n = n;
  tester.cfg = cfg;
  tester.mu = mean_s_uniform(k, n);
  const double analytic = analytic_threshold(k, n, cfg.alpha, cfg.c2);
  if (cfg.mode == ThresholdMode::kAnalytic) {
    tester.threshold = analytic;
  } else {
    const double quantile = null_deviation_quantile(k, n, cfg.calibration_trials,
                                                    1.0 - cfg.beta, cfg.calibration_seed);
    const double budget_slack =
        std::min(cfg.gamma, static_cast<double>(n) * cfg.gamma / static_cast<double>(k));
    tester.threshold = std::max(analytic, quantile + budget_slack);
  }
  return tester;
}

TestVerdict UniformityTester::apply(std::span<const int> z) const {
  if (static_cast<long>(z.size()) != n) {
    throw std::invalid_argument("UniformityTester: transcript length mismatch");
  }
  TestVerdict verdict;
  verdict.statistic = s_statistic(z, k);
  verdict.mu = mu;
  verdict.threshold = threshold;
  verdict.yes = verdict.statistic - verdict.mu <= verdict.threshold;
  return verdict;
}

TestVerdict uniformity_test(std::span<const int> z, int k, const TesterConfig& cfg) {
  return make_uniformity_tester(k, static_cast<long>(z.size()), cfg).apply(z);
}

GoldreichMap goldreich_map(const Distribution& q) {
  const int k = q.k();
  const int out = 6 * k;
  GoldreichMap map{k, q, {}, {}, {0, 0}};
  map.matrix.assign(static_cast<size_t>(k) * static_cast<size_t>(out), 0.0);
  map.buckets.resize(static_cast<size_t>(k));

  // Grain q' = (q + u)/2 into private buckets; each symbol owns at least 3.
  std::vector<double> q_mixed(static_cast<size_t>(k));
  std::vector<int> bucket_count(static_cast<size_t>(k));
  int used = 0;
  for (int i = 0; i < k; ++i) {
    q_mixed[static_cast<size_t>(i)] = 0.5 * (q[i] + 1.0 / k);
    const int m = static_cast<int>(
        std::floor(static_cast<double>(out) * q_mixed[static_cast<size_t>(i)] + 1e-9));
    bucket_count[static_cast<size_t>(i)] = m;
    map.buckets[static_cast<size_t>(i)] = {used, used + m};
    used += m;
  }
  if (used > out) throw std::logic_error("goldreich_map: bucket overflow");
  map.leftover = {used, out};
  const int leftover_size = out - used;

  std::vector<double> route(static_cast<size_t>(k) * static_cast<size_t>(out), 0.0);
  for (int i = 0; i < k; ++i) {
    const int m = bucket_count[static_cast<size_t>(i)];
    const double own = static_cast<double>(m) /
                       (static_cast<double>(out) * q_mixed[static_cast<size_t>(i)]);
    auto* row = route.data() + static_cast<size_t>(i) * static_cast<size_t>(out);
    const auto [begin, end] = map.buckets[static_cast<size_t>(i)];
    for (int j = begin; j < end; ++j) row[j] = own / m;
    if (leftover_size > 0) {
      const double rest = (1.0 - own) / leftover_size;
      for (int j = map.leftover.first; j < map.leftover.second; ++j) row[j] = rest;
    }
  }
  // Mixing step: with probability 1/2 route the symbol itself, otherwise a
  // uniformly resampled one.
  std::vector<double> mean_route(static_cast<size_t>(out), 0.0);
  for (int i = 0; i < k; ++i) {
    const auto* row = route.data() + static_cast<size_t>(i) * static_cast<size_t>(out);
    for (int j = 0; j < out; ++j) mean_route[static_cast<size_t>(j)] += row[j];
  }
  for (auto& v : mean_route) v /= static_cast<double>(k);
  for (int i = 0; i < k; ++i) {
    const auto* row = route.data() + static_cast<size_t>(i) * static_cast<size_t>(out);
    auto* g_row = map.matrix.data() + static_cast<size_t>(i) * static_cast<size_t>(out);
    for (int j = 0; j < out; ++j) {
      g_row[j] = 0.5 * row[j] + 0.5 * mean_route[static_cast<size_t>(j)];
    }
  }

  // Construction invariants: rows stochastic, q maps exactly onto uniform.
  for (int i = 0; i < k; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < out; ++j) row_sum += map.prob(j, i);
    if (std::abs(row_sum - 1.0) > kProbTolerance) {
      throw std::logic_error("goldreich_map: row is not stochastic");
    }
  }
  const double target = 1.0 / out;
  for (int j = 0; j < out; ++j) {
    double mass = 0.0;
    for (int i = 0; i < k; ++i) mass += q[i] * map.prob(j, i);
    if (std::abs(mass - target) > 1e-12) {
      throw std::logic_error("goldreich_map: reference does not map to uniform");
    }
  }
  return map;
}

int goldreich_apply(const GoldreichMap& map, int x, Rng& rng) {
  if (x < 0 || x >= map.k) throw std::invalid_argument("goldreich_apply: symbol out of range");
  const double u = rng.next_double();
  double acc = 0.0;
  const int out = map.out_size();
  for (int j = 0; j + 1 < out; ++j) {
    acc += map.prob(j, x);
    if (u < acc) return j;
  }
  return out - 1;
}

IdentityTester make_identity_tester(const Distribution& q, long n, const TesterConfig& cfg) {
  IdentityTester tester{goldreich_map(q), {}, {}};
  const int k = tester.map.k;
  const int out = tester.map.out_size();
  tester.row_cdf.resize(static_cast<size_t>(k) * static_cast<size_t>(out));
  for (int i = 0; i < k; ++i) {
    double acc = 0.0;
    for (int j = 0; j < out; ++j) {
      acc += tester.map.prob(j, i);
      tester.row_cdf[static_cast<size_t>(i) * static_cast<size_t>(out) + static_cast<size_t>(j)] = acc;
    }
    tester.row_cdf[static_cast<size_t>(i) * static_cast<size_t>(out) + static_cast<size_t>(out - 1)] = 1.0;
  }
  TesterConfig inner = cfg;
  inner.alpha = cfg.alpha / 3.0;  // the map contracts TV by at most a third
  tester.uniformity = make_uniformity_tester(out, n, inner);
  return tester;
}

TestVerdict IdentityTester::apply(std::span<const int> z, std::uint64_t seed) const {
  const int out = map.out_size();
  std::vector<int> mapped(z.size());
  Rng rng(derive_seed(seed, "goldreich-apply"));
  for (size_t i = 0; i < z.size(); ++i) {
    const int x = z[i];
    if (x < 0 || x >= map.k) throw std::invalid_argument("identity_test: symbol out of range");
    const double u = rng.next_double();
    const auto* cdf = row_cdf.data() + static_cast<size_t>(x) * static_cast<size_t>(out);
    mapped[i] = static_cast<int>(std::upper_bound(cdf, cdf + out, u) - cdf);
  }
  return uniformity.apply(mapped);
}

TestVerdict identity_test(std::span<const int> z, const Distribution& q,
                          const TesterConfig& cfg, std::uint64_t seed) {
  return make_identity_tester(q, static_cast<long>(z.size()), cfg).apply(z, seed);
}

int compression_batches(double c2) {
  if (!(c2 > 0.0) || c2 >= 2.0) {
    throw std::invalid_argument("compression_batches: need c2 in (0, 2)");
  }
  return static_cast<int>(std::ceil(std::log(0.1) / std::log(1.0 - c2 / 2.0)));
}

long CompressedProtocol::batch_of(long user) const {
  const auto it = std::upper_bound(offsets.begin(), offsets.end(), user);
  return static_cast<long>(it - offsets.begin()) - 1;
}

CompressedProtocol make_compressed_protocol(int k, int ell, long n, std::uint64_t seed,
                                            const CompressionConstants& constants) {
  if (k < 2) throw std::invalid_argument("make_compressed_protocol: need k >= 2");
  if (ell < 1) throw std::invalid_argument("make_compressed_protocol: need ell >= 1");
  CompressedProtocol proto;
  proto.k = k;
  proto.ell = ell;
  proto.n = n;
  proto.batches = compression_batches(constants.c2);
  if (proto.batches > n) {
    throw std::invalid_argument("make_compressed_protocol: more batches than users");
  }
  proto.bins = std::min<long>(ell >= 31 ? k : (1L << ell), k);
  proto.compress = proto.bins < k;
  proto.offsets.resize(static_cast<size_t>(proto.batches) + 1);
  long offset = 0;
  for (int j = 0; j < proto.batches; ++j) {
    proto.offsets[static_cast<size_t>(j)] = offset;
    offset += n / proto.batches + (j < n % proto.batches ? 1 : 0);
  }
  proto.offsets.back() = offset;
  if (proto.compress) {
    proto.cells.reserve(static_cast<size_t>(proto.batches));
    for (int j = 0; j < proto.batches; ++j) {
      proto.cells.push_back(random_balanced_partition(
          k, static_cast<int>(proto.bins),
          derive_seed(seed, "batch-partition", static_cast<std::uint64_t>(j))));
    }
  }
  return proto;
}

std::vector<int> compressed_messages(const CompressedProtocol& proto, std::span<const int> x) {
  if (static_cast<long>(x.size()) != proto.n) {
    throw std::invalid_argument("compressed_messages: sample count mismatch");
  }
  std::vector<int> y(x.size());
  for (int j = 0; j < proto.batches; ++j) {
    const long begin = proto.offsets[static_cast<size_t>(j)];
    const long end = proto.offsets[static_cast<size_t>(j) + 1];
    for (long i = begin; i < end; ++i) {
      const int symbol = x[static_cast<size_t>(i)];
      if (symbol < 0 || symbol >= proto.k) {
        throw std::invalid_argument("compressed_messages: sample out of range");
      }
      y[static_cast<size_t>(i)] =
          proto.compress ? proto.cells[static_cast<size_t>(j)][static_cast<size_t>(symbol)]
                         : symbol;
    }
  }
  return y;
}

namespace {

TesterConfig batch_tester_config(const CompressedProtocol& proto, const TesterConfig& cfg,
                                 const CompressionConstants& constants) {
  const double beta_batch = std::min(
      constants.c2 / 2.0, 1.0 - std::pow(0.9, 1.0 / static_cast<double>(proto.batches)));
  TesterConfig batch_cfg = cfg;
  batch_cfg.beta = beta_batch;
  batch_cfg.gamma = std::min(1.0, static_cast<double>(proto.batches) * cfg.gamma);
  batch_cfg.alpha =
      proto.compress
          ? constants.c1 * cfg.alpha *
                std::sqrt(static_cast<double>(proto.bins) / static_cast<double>(proto.k))
          : cfg.alpha;
  return batch_cfg;
}

}  // namespace

TestVerdict compressed_verdict(const CompressedProtocol& proto, std::span<const int> z,
                               const Distribution& q, const TesterConfig& cfg,
                               std::uint64_t seed, const CompressionConstants& constants) {
  if (q.k() != proto.k) throw std::invalid_argument("compressed_verdict: reference has wrong k");
  if (static_cast<long>(z.size()) != proto.n) {
    throw std::invalid_argument("compressed_verdict: message count mismatch");
  }
  const TesterConfig batch_cfg = batch_tester_config(proto, cfg, constants);
  TestVerdict verdict;
  verdict.yes = true;
  double worst_slack = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < proto.batches; ++j) {
    const long begin = proto.offsets[static_cast<size_t>(j)];
    const long size = proto.offsets[static_cast<size_t>(j) + 1] - begin;
    const auto slice = z.subspan(static_cast<size_t>(begin), static_cast<size_t>(size));
    Distribution reference = q;
    if (proto.compress) {
      const auto& cell = proto.cells[static_cast<size_t>(j)];
      std::vector<double> pushed(static_cast<size_t>(proto.bins), 0.0);
      for (int symbol = 0; symbol < proto.k; ++symbol) {
        pushed[static_cast<size_t>(cell[static_cast<size_t>(symbol)])] += q[symbol];
      }
      reference = Distribution(std::move(pushed));
    }
    TestVerdict batch_verdict =
        identity_test(slice, reference, batch_cfg,
                      derive_seed(seed, "batch-test", static_cast<std::uint64_t>(j)));
    worst_slack = std::max(worst_slack,
                           batch_verdict.statistic - batch_verdict.mu - batch_verdict.threshold);
    verdict.yes = verdict.yes && batch_verdict.yes;
    verdict.batches.push_back(std::move(batch_verdict));
  }
  verdict.statistic = worst_slack;
  verdict.mu = 0.0;
  verdict.threshold = 0.0;
  return verdict;
}

void warm_compressed_thresholds(int k, int ell, long n, const TesterConfig& cfg,
                                const CompressionConstants& constants) {
  const CompressedProtocol proto = make_compressed_protocol(k, ell, n, 0, constants);
  const TesterConfig batch_cfg = batch_tester_config(proto, cfg, constants);
  if (batch_cfg.mode != ThresholdMode::kCalibrated) return;
  long previous = -1;
  for (int j = 0; j < proto.batches; ++j) {
    const long size = proto.offsets[static_cast<size_t>(j) + 1] - proto.offsets[static_cast<size_t>(j)];
    if (size == previous) continue;
    previous = size;
    null_deviation_quantile(6 * static_cast<int>(proto.bins), size, batch_cfg.calibration_trials,
                            1.0 - batch_cfg.beta, batch_cfg.calibration_seed);
  }
}

TestVerdict compressed_identity_test(std::span<const int> x, int k, int ell,
                                     const Distribution& q, const TesterConfig& cfg,
                                     std::uint64_t seed,
                                     const CompressionConstants& constants) {
  const CompressedProtocol proto =
      make_compressed_protocol(k, ell, static_cast<long>(x.size()),
                               derive_seed(seed, "protocol"), constants);
  const std::vector<int> y = compressed_messages(proto, x);
  return compressed_verdict(proto, y, q, cfg, derive_seed(seed, "server"), constants);
}

double compressed_testable_alpha(int k, int ell, long n, double gamma, double scale,
                                 const CompressionConstants& constants) {
  const int batches = compression_batches(constants.c2);
  const long bins = std::min<long>(1L << ell, k);
  const long batch_n = std::max<long>(1, n / batches);
  const double batch_gamma = std::min(1.0, static_cast<double>(batches) * gamma);
  const auto rate = rate_it(static_cast<int>(bins), batch_n,
                            ConstraintSpec::unconstrained(), batch_gamma);
  return scale * std::sqrt(static_cast<double>(k) / static_cast<double>(bins)) * rate.upper;
}

}  // namespace robustdist
