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

#ifndef ROBUSTDIST_DISTRIBUTION_HPP_
#define ROBUSTDIST_DISTRIBUTION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "robustdist/rng.hpp"

namespace robustdist {

// Absolute tolerance for "entries sum to one" checks. Violations raise; the
// library never renormalizes silently.
inline constexpr double kProbTolerance = 1e-9;

// A probability vector over the alphabet {0, ..., k-1}. Immutable after
// construction; construction validates nonnegativity and total mass.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(int k);
  static Distribution point_mass(int k, int x);

  int k() const noexcept { return static_cast<int>(probs_.size()); }
  double operator[](int x) const noexcept { return probs_[static_cast<size_t>(x)]; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> probs_;
};

// Index of one member of the matched-pair perturbation family: sign pattern
// over k/2 symbol pairs plus the perturbation size alpha in (0, 1/2].
struct PaninskiIndex {
  std::vector<int> z;  // entries in {+1, -1}, length k/2
  double alpha = 0.0;
};

// n symbols drawn i.i.d. plus the seed they were derived from.
struct SampleBlock {
  std::vector<int> values;  // each in [0, k)
  std::uint64_t seed = 0;
};

// Total variation distance (half L1). Throws on dimension mismatch.
double tv_distance(const Distribution& p, const Distribution& q);

// Chi-square divergence sum_x (p(x)-q(x))^2 / q(x). Throws if p puts mass
// where q has none.
double chi_square_divergence(const Distribution& p, const Distribution& q);

// The paired +-2*alpha/k perturbation of uniform: symbol 2i gets
// (1 + z_i * 2*alpha)/k and symbol 2i+1 gets (1 - z_i * 2*alpha)/k.
// Its TV distance to uniform equals alpha. Requires even k.
Distribution paninski_dist(const PaninskiIndex& idx, int k);

// Uniformly random sign pattern for the family above.
PaninskiIndex random_paninski_index(int k, double alpha, Rng& rng);

// n i.i.d. draws from p, deterministic given the seed.
SampleBlock sample(const Distribution& p, long n, std::uint64_t seed);

// Euclidean projection of an arbitrary finite vector onto the probability
// simplex (sorting-based). A vector already on the simplex is returned
// unchanged. For any distribution q, tv(project(v), q) is at most the L1
// distance |v - q|_1, i.e. projection costs at most a factor two relative to
// the L1 error of v.
Distribution simplex_project(std::span<const double> v);

// Cached inverse-CDF sampler for repeated draws from one distribution.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const Distribution& p);
  int draw(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

}  // namespace robustdist

#endif  // ROBUSTDIST_DISTRIBUTION_HPP_
