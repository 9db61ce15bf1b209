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

#ifndef ROBUSTDIST_ESTIMATION_HPP_
#define ROBUSTDIST_ESTIMATION_HPP_

#include <optional>
#include <span>
#include <vector>

#include "robustdist/channel.hpp"
#include "robustdist/distribution.hpp"

namespace robustdist {

// A learner's output: the raw (possibly signed) estimate and its projection
// onto the simplex. tv_to_truth is filled by the experiment harness when the
// ground truth is known.
struct EstimateReport {
  std::vector<double> raw;
  Distribution projected;
  std::optional<double> tv_to_truth;
};

// Frequency estimator for unconstrained messages over [k].
EstimateReport empirical_estimator(std::span<const int> z, int k);

// Unbiased decoder for the per-user hashing protocol. With B = 2^ell bins and
// c(x) = #{i : h_i(x) == z_i},
//   raw(x) = B / (n (B - 1)) * (c(x) - n / B),
// evaluated from exact integer counts so the result is independent of
// accumulation order. The projection supplies the reported distribution.
EstimateReport hashing_estimator(std::span<const int> z, std::span<const HashFunction> hashes,
                                 int ell, int k);

}  // namespace robustdist

#endif  // ROBUSTDIST_ESTIMATION_HPP_
