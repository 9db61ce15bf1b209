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

#ifndef ROBUSTDIST_CHANNEL_HPP_
#define ROBUSTDIST_CHANNEL_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "robustdist/constraint.hpp"
#include "robustdist/distribution.hpp"
#include "robustdist/rng.hpp"

namespace robustdist {

enum class ChannelKind { kIdentity, kHash, kCompression, kKrr, kCustom };

// A per-user message channel: a row-stochastic map from the input alphabet
// [k] to a finite message alphabet. Construction validates row sums,
// nonnegativity, and the declared constraint (output size 2^ell for bit
// budgets, bounded likelihood ratios for LDP). Immutable afterwards.
class Channel {
 public:
  Channel(int k, int y_size, std::vector<double> row_major, ChannelKind kind,
          ConstraintSpec constraint, std::uint64_t seed = 0);

  int k() const noexcept { return k_; }
  int y_size() const noexcept { return y_size_; }
  ChannelKind kind() const noexcept { return kind_; }
  const ConstraintSpec& constraint() const noexcept { return constraint_; }
  std::uint64_t seed() const noexcept { return seed_; }

  // W(y | x)
  double prob(int y, int x) const noexcept {
    return matrix_[static_cast<size_t>(x) * static_cast<size_t>(y_size_) +
                   static_cast<size_t>(y)];
  }
  std::span<const double> row(int x) const noexcept {
    return {matrix_.data() + static_cast<size_t>(x) * static_cast<size_t>(y_size_),
            static_cast<size_t>(y_size_)};
  }

 private:
  int k_;
  int y_size_;
  std::vector<double> matrix_;  // k rows by y_size columns
  ChannelKind kind_;
  ConstraintSpec constraint_;
  std::uint64_t seed_;
};

// A concrete hash table [k] -> [2^ell], drawn uniformly per symbol.
struct HashFunction {
  int k = 0;
  int ell = 0;
  std::vector<std::int32_t> table;
  std::uint64_t seed = 0;

  int operator()(int x) const noexcept { return table[static_cast<size_t>(x)]; }
  int bins() const noexcept { return 1 << ell; }
};

// The unconstrained channel: messages are the samples themselves.
Channel identity_channel(int k);

// Fresh uniform hash table; cheap form used in the per-user protocol loop.
HashFunction random_hash_function(int k, int ell, std::uint64_t seed);

// The hash table together with its deterministic 0/1 channel matrix.
std::pair<Channel, HashFunction> random_hash_channel(int k, int ell, std::uint64_t seed);

// Uniformly random near-balanced partition of [k] into `parts` cells (cell
// sizes differ by at most one). Returns the cell index of each symbol.
std::vector<std::int32_t> random_balanced_partition(int k, int parts, std::uint64_t seed);

// Deterministic map onto [2^ell] induced by a random near-balanced partition.
// Requires 2^ell < k; identity is the right tool otherwise.
Channel domain_compression_channel(int k, int ell, std::uint64_t seed);

// k-ary randomized response: keeps the symbol with probability
// e^eps / (e^eps + k - 1), otherwise flips to a uniformly random other
// symbol. Satisfies the epsilon-LDP ratio bound with equality.
Channel krr_channel(int k, double epsilon);

// Law of the message when the input is drawn from p: y -> sum_x p(x) W(y|x).
Distribution output_distribution(const Channel& w, const Distribution& p);

// One draw from W(. | x).
int channel_apply(const Channel& w, int x, Rng& rng);
int channel_apply(const Channel& w, int x, std::uint64_t seed);

}  // namespace robustdist

#endif  // ROBUSTDIST_CHANNEL_HPP_
