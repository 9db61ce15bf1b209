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

#include "robustdist/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace robustdist {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw std::invalid_argument("Distribution: empty probability vector");
  }
  double total = 0.0;
  for (size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p)) {
      throw std::invalid_argument("Distribution: non-finite entry at index " +
                                  std::to_string(i));
    }
    if (p < 0.0) {
      throw std::invalid_argument("Distribution: negative entry " + std::to_string(p) +
                                  " at index " + std::to_string(i));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    throw std::invalid_argument("Distribution: entries sum to " + std::to_string(total) +
                                ", expected 1 within 1e-9");
  }
}

Distribution Distribution::uniform(int k) {
  if (k < 1) throw std::invalid_argument("uniform: k must be positive");
  return Distribution(std::vector<double>(static_cast<size_t>(k), 1.0 / k));
}

Distribution Distribution::point_mass(int k, int x) {
  if (k < 1 || x < 0 || x >= k) throw std::invalid_argument("point_mass: bad (k, x)");
  std::vector<double> p(static_cast<size_t>(k), 0.0);
  p[static_cast<size_t>(x)] = 1.0;
  return Distribution(std::move(p));
}

double tv_distance(const Distribution& p, const Distribution& q) {
  if (p.k() != q.k()) {
    throw std::invalid_argument("tv_distance: dimension mismatch");
  }
  double sum = 0.0;
  for (int x = 0; x < p.k(); ++x) sum += std::abs(p[x] - q[x]);
  return 0.5 * sum;
}

double chi_square_divergence(const Distribution& p, const Distribution& q) {
  if (p.k() != q.k()) {
    throw std::invalid_argument("chi_square_divergence: dimension mismatch");
  }
  double sum = 0.0;
  for (int x = 0; x < p.k(); ++x) {
    const double d = p[x] - q[x];
    if (q[x] <= 0.0) {
      if (p[x] > 0.0) {
        throw std::domain_error(
            "chi_square_divergence: p has mass outside the support of q at index " +
            std::to_string(x));
      }
      continue;  // 0/0 contributes nothing
    }
    sum += d * d / q[x];
  }
  return sum;
}

Distribution paninski_dist(const PaninskiIndex& idx, int k) {
  if (k < 2 || k % 2 != 0) {
    throw std::invalid_argument("paninski_dist: k must be even and >= 2");
  }
  if (static_cast<int>(idx.z.size()) != k / 2) {
    throw std::invalid_argument("paninski_dist: sign pattern must have length k/2");
  }
  if (!(idx.alpha >= 0.0) || 2.0 * idx.alpha > 1.0) {
    throw std::invalid_argument("paninski_dist: need 0 <= alpha <= 1/2");
  }
  std::vector<double> p(static_cast<size_t>(k));
  for (int i = 0; i < k / 2; ++i) {
    const int z = idx.z[static_cast<size_t>(i)];
    if (z != 1 && z != -1) {
      throw std::invalid_argument("paninski_dist: sign entries must be +1 or -1");
    }
    p[static_cast<size_t>(2 * i)] = (1.0 + z * 2.0 * idx.alpha) / k;
    p[static_cast<size_t>(2 * i + 1)] = (1.0 - z * 2.0 * idx.alpha) / k;
  }
  return Distribution(std::move(p));
}

PaninskiIndex random_paninski_index(int k, double alpha, Rng& rng) {
  if (k < 2 || k % 2 != 0) {
    throw std::invalid_argument("random_paninski_index: k must be even and >= 2");
  }
  PaninskiIndex idx;
  idx.alpha = alpha;
  idx.z.resize(static_cast<size_t>(k / 2));
  for (auto& z : idx.z) z = rng.bernoulli(0.5) ? 1 : -1;
  return idx;
}

CategoricalSampler::CategoricalSampler(const Distribution& p) : cdf_(p.probs()) {
  std::partial_sum(cdf_.begin(), cdf_.end(), cdf_.begin());
  cdf_.back() = 1.0;  // absorb rounding so every u in [0,1) lands in range
}

int CategoricalSampler::draw(Rng& rng) const {
  const double u = rng.next_double();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(it - cdf_.begin());
}

SampleBlock sample(const Distribution& p, long n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  SampleBlock block;
  block.seed = seed;
  block.values.resize(static_cast<size_t>(n));
  Rng rng(seed);
  const CategoricalSampler sampler(p);
  for (auto& v : block.values) v = sampler.draw(rng);
  return block;
}

Distribution simplex_project(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("simplex_project: empty input");
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("simplex_project: non-finite entry");
    }
  }
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  int support = 0;
  for (size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) {
      theta = candidate;
      support = static_cast<int>(j + 1);
    }
  }
  (void)support;
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  // Guard against rounding pushing the total outside the constructor tolerance.
  double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (std::abs(total - 1.0) > 0.5 * kProbTolerance && total > 0.0) {
    for (auto& x : out) x /= total;
  }
  return Distribution(std::move(out));
}

}  // namespace robustdist
