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

#include <stdexcept>

namespace robustdist {

EstimateReport empirical_estimator(std::span<const int> z, int k) {
  if (k < 1) throw std::invalid_argument("empirical_estimator: need k >= 1");
  if (z.empty()) throw std::invalid_argument("empirical_estimator: empty transcript");
  std::vector<long> count(static_cast<size_t>(k), 0);
  for (int symbol : z) {
    if (symbol < 0 || symbol >= k) {
      throw std::invalid_argument("empirical_estimator: symbol out of range");
    }
    ++count[static_cast<size_t>(symbol)];
  }
  const auto n = static_cast<double>(z.size());
  std::vector<double> raw(static_cast<size_t>(k));
  for (int x = 0; x < k; ++x) raw[static_cast<size_t>(x)] = static_cast<double>(count[static_cast<size_t>(x)]) / n;
  Distribution projected(raw);  // already a distribution
  return EstimateReport{std::move(raw), std::move(projected), std::nullopt};
}

EstimateReport hashing_estimator(std::span<const int> z, std::span<const HashFunction> hashes,
                                 int ell, int k) {
  if (ell < 1) throw std::invalid_argument("hashing_estimator: need ell >= 1");
  if (z.size() != hashes.size()) {
    throw std::invalid_argument("hashing_estimator: message and hash counts differ");
  }
  if (z.empty()) throw std::invalid_argument("hashing_estimator: empty transcript");
  const long n = static_cast<long>(z.size());
  const long bins = 1L << ell;
  std::vector<long> count(static_cast<size_t>(k), 0);
  for (long i = 0; i < n; ++i) {
    const int message = z[static_cast<size_t>(i)];
    if (message < 0 || message >= bins) {
      throw std::invalid_argument("hashing_estimator: message outside the bin alphabet");
    }
    const auto& h = hashes[static_cast<size_t>(i)];
    if (h.k != k || h.ell != ell) {
      throw std::invalid_argument("hashing_estimator: hash function shape mismatch");
    }
    for (int x = 0; x < k; ++x) {
      if (h(x) == message) ++count[static_cast<size_t>(x)];
    }
  }
  // raw(x) = (bins * c(x) - n) / (n * (bins - 1)); the numerator is an exact
  // integer, so parallel partial counts would reduce to the same value.
  std::vector<double> raw(static_cast<size_t>(k));
  const double denom = static_cast<double>(n) * static_cast<double>(bins - 1);
  for (int x = 0; x < k; ++x) {
    raw[static_cast<size_t>(x)] =
        static_cast<double>(bins * count[static_cast<size_t>(x)] - n) / denom;
  }
  Distribution projected = simplex_project(raw);
  return EstimateReport{std::move(raw), std::move(projected), std::nullopt};
}

}  // namespace robustdist
