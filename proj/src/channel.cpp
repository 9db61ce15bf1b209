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

#include "robustdist/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace robustdist {

namespace {

void validate_ldp(const std::vector<double>& matrix, int k, int y_size, double epsilon) {
  const double bound = std::exp(epsilon);
  for (int y = 0; y < y_size; ++y) {
    double col_min = std::numeric_limits<double>::infinity();
    double col_max = 0.0;
    for (int x = 0; x < k; ++x) {
      const double w = matrix[static_cast<size_t>(x) * static_cast<size_t>(y_size) +
                              static_cast<size_t>(y)];
      col_min = std::min(col_min, w);
      col_max = std::max(col_max, w);
    }
    if (col_max > bound * col_min + kProbTolerance) {
      throw std::invalid_argument("Channel: LDP likelihood ratio exceeded at output " +
                                  std::to_string(y));
    }
  }
}

}  // namespace

Channel::Channel(int k, int y_size, std::vector<double> row_major, ChannelKind kind,
                 ConstraintSpec constraint, std::uint64_t seed)
    : k_(k), y_size_(y_size), matrix_(std::move(row_major)), kind_(kind),
      constraint_(constraint), seed_(seed) {
  if (k_ < 1 || y_size_ < 1) throw std::invalid_argument("Channel: bad dimensions");
  if (matrix_.size() != static_cast<size_t>(k_) * static_cast<size_t>(y_size_)) {
    throw std::invalid_argument("Channel: matrix size does not match k x y_size");
  }
  for (int x = 0; x < k_; ++x) {
    double row_sum = 0.0;
    for (int y = 0; y < y_size_; ++y) {
      const double w = prob(y, x);
      if (!(w >= 0.0)) {
        throw std::invalid_argument("Channel: negative or NaN entry in row " +
                                    std::to_string(x));
      }
      row_sum += w;
    }
    if (std::abs(row_sum - 1.0) > kProbTolerance) {
      throw std::invalid_argument("Channel: row " + std::to_string(x) + " sums to " +
                                  std::to_string(row_sum));
    }
  }
  if (constraint_.kind == ConstraintSpec::Kind::kBits) {
    if (y_size_ != (1 << constraint_.ell)) {
      throw std::invalid_argument("Channel: bit constraint requires y_size == 2^ell");
    }
  } else if (constraint_.kind == ConstraintSpec::Kind::kLdp) {
    validate_ldp(matrix_, k_, y_size_, constraint_.epsilon);
  }
}

Channel identity_channel(int k) {
  if (k < 2) throw std::invalid_argument("identity_channel: need k >= 2");
  std::vector<double> m(static_cast<size_t>(k) * static_cast<size_t>(k), 0.0);
  for (int x = 0; x < k; ++x) m[static_cast<size_t>(x) * static_cast<size_t>(k) + static_cast<size_t>(x)] = 1.0;
  return Channel(k, k, std::move(m), ChannelKind::kIdentity, ConstraintSpec::unconstrained());
}

HashFunction random_hash_function(int k, int ell, std::uint64_t seed) {
  if (k < 2 || ell < 1) throw std::invalid_argument("random_hash_function: need k >= 2, ell >= 1");
  HashFunction h;
  h.k = k;
  h.ell = ell;
  h.seed = seed;
  h.table.resize(static_cast<size_t>(k));
  Rng rng(seed);
  const auto bins = static_cast<std::uint64_t>(1) << ell;
  for (auto& cell : h.table) cell = static_cast<std::int32_t>(rng.below(bins));
  return h;
}

std::pair<Channel, HashFunction> random_hash_channel(int k, int ell, std::uint64_t seed) {
  HashFunction h = random_hash_function(k, ell, seed);
  const int bins = h.bins();
  std::vector<double> m(static_cast<size_t>(k) * static_cast<size_t>(bins), 0.0);
  for (int x = 0; x < k; ++x) {
    m[static_cast<size_t>(x) * static_cast<size_t>(bins) + static_cast<size_t>(h(x))] = 1.0;
  }
  Channel channel(k, bins, std::move(m), ChannelKind::kHash, ConstraintSpec::bits(ell), seed);
  return {std::move(channel), std::move(h)};
}

std::vector<std::int32_t> random_balanced_partition(int k, int parts, std::uint64_t seed) {
  if (parts < 1 || parts > k) {
    throw std::invalid_argument("random_balanced_partition: need 1 <= parts <= k");
  }
  std::vector<std::int32_t> order(static_cast<size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = k - 1; i > 0; --i) {  // Fisher-Yates
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }
  // Deal the shuffled symbols round-robin so cell sizes differ by at most one.
  std::vector<std::int32_t> cell(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    cell[static_cast<size_t>(order[static_cast<size_t>(i)])] =
        static_cast<std::int32_t>(i % parts);
  }
  return cell;
}

Channel domain_compression_channel(int k, int ell, std::uint64_t seed) {
  if (ell < 1) throw std::invalid_argument("domain_compression_channel: need ell >= 1");
  const long bins = 1L << ell;
  if (bins >= k) {
    throw std::invalid_argument(
        "domain_compression_channel: requires 2^ell < k; use identity_channel instead");
  }
  const auto cell = random_balanced_partition(k, static_cast<int>(bins), seed);
  std::vector<double> m(static_cast<size_t>(k) * static_cast<size_t>(bins), 0.0);
  for (int x = 0; x < k; ++x) {
    m[static_cast<size_t>(x) * static_cast<size_t>(bins) +
      static_cast<size_t>(cell[static_cast<size_t>(x)])] = 1.0;
  }
  return Channel(k, static_cast<int>(bins), std::move(m), ChannelKind::kCompression,
                 ConstraintSpec::bits(ell), seed);
}

Channel krr_channel(int k, double epsilon) {
  if (k < 2) throw std::invalid_argument("krr_channel: need k >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("krr_channel: need epsilon > 0");
  const double e_eps = std::exp(epsilon);
  const double keep = e_eps / (e_eps + k - 1);
  const double flip = 1.0 / (e_eps + k - 1);
  std::vector<double> m(static_cast<size_t>(k) * static_cast<size_t>(k), flip);
  for (int x = 0; x < k; ++x) m[static_cast<size_t>(x) * static_cast<size_t>(k) + static_cast<size_t>(x)] = keep;
  return Channel(k, k, std::move(m), ChannelKind::kKrr, ConstraintSpec::ldp(epsilon));
}

Distribution output_distribution(const Channel& w, const Distribution& p) {
  if (w.k() != p.k()) {
    throw std::invalid_argument("output_distribution: channel and distribution disagree on k");
  }
  std::vector<double> out(static_cast<size_t>(w.y_size()), 0.0);
  for (int x = 0; x < w.k(); ++x) {
    const double px = p[x];
    if (px == 0.0) continue;
    const auto row = w.row(x);
    for (int y = 0; y < w.y_size(); ++y) out[static_cast<size_t>(y)] += px * row[static_cast<size_t>(y)];
  }
  return Distribution(std::move(out));
}

int channel_apply(const Channel& w, int x, Rng& rng) {
  if (x < 0 || x >= w.k()) throw std::invalid_argument("channel_apply: symbol out of range");
  const auto row = w.row(x);
  const double u = rng.next_double();
  double acc = 0.0;
  for (int y = 0; y + 1 < w.y_size(); ++y) {
    acc += row[static_cast<size_t>(y)];
    if (u < acc) return y;
  }
  return w.y_size() - 1;
}

int channel_apply(const Channel& w, int x, std::uint64_t seed) {
  Rng rng(seed);
  return channel_apply(w, x, rng);
}

}  // namespace robustdist
