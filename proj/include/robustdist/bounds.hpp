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

#ifndef ROBUSTDIST_BOUNDS_HPP_
#define ROBUSTDIST_BOUNDS_HPP_

#include <span>
#include <string>
#include <vector>

#include "robustdist/channel.hpp"
#include "robustdist/constraint.hpp"
#include "robustdist/info_matrix.hpp"

namespace robustdist {

// Reference risk rates with all Theta constants taken as 1 and everything
// capped at 1. These are shape references for plots and sanity checks, not
// sharp numbers.
struct RateBounds {
  double upper = 0.0;
  double lower = 0.0;
};

// One evaluated point of a reference curve.
struct RatePoint {
  int k = 0;
  long n = 0;
  double gamma = 0.0;
  ConstraintSpec constraint;
  double upper = 0.0;
  double lower = 0.0;
};

struct RateCurve {
  std::string task;  // "DL" | "IT" | "UT"
  std::vector<RatePoint> points;
};

// Distribution learning risk under a corruption fraction gamma:
//   unconstrained: sqrt(k/n) + gamma
//   ell-bit:       sqrt(k^2 / (n * (2^ell ^ k))) + gamma * sqrt(k / (2^ell ^ k))
//   eps-LDP:       sqrt(k^2 / (eps^2 n)) + gamma * sqrt(k) / eps
// where ^ denotes min. Upper and lower coincide (same shape both sides).
RateBounds rate_dl(int k, long n, const ConstraintSpec& constraint, double gamma);

// Identity/uniformity testing risk. Unconstrained and LDP shapes coincide on
// both sides; the ell-bit upper bound carries an extra fourth-root term the
// known lower bound lacks, so the two sides genuinely differ there.
RateBounds rate_it(int k, long n, const ConstraintSpec& constraint, double gamma);

// gamma * sqrt(k / max_trace_norm), capped at 1. Feeding the class-level
// trace-norm caps (2^ell, eps^2) reproduces the attack terms of the rate
// formulas above.
double lower_bound_from_trace_norm(int k, double gamma, double max_trace_norm);

// Transport budget needed to hide the paired perturbation family at distance
// alpha: n * min{n*alpha^2/k, sqrt(n)*alpha^2/sqrt(k), alpha}.
double emd_bound_paninski(long n, int k, double alpha);

// Transport bound induced by a set of channels via their information
// matrices: 2*n*alpha*sqrt(max trace norm / k).
double emd_bound_channels(std::span<const Channel> channels, long n, int k, double alpha);

// Solves emd_bound_paninski(n, k, alpha) == target for alpha by bisection.
double solve_alpha_for_emd(long n, int k, double target);

}  // namespace robustdist

#endif  // ROBUSTDIST_BOUNDS_HPP_
