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

#include "robustdist/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robustdist {

namespace {

double cap(double v) { return std::min(v, 1.0); }

// Effective message alphabet 2^ell ^ k (the formulas saturate at log k bits).
double effective_bins(int k, int ell) {
  if (ell >= 62) return static_cast<double>(k);
  return std::min(static_cast<double>(1ULL << ell), static_cast<double>(k));
}

void check_constraint(const ConstraintSpec& c) {
  if (c.kind == ConstraintSpec::Kind::kBits && c.ell < 1) {
    throw std::invalid_argument("rate: bit constraint requires ell >= 1");
  }
  if (c.kind == ConstraintSpec::Kind::kLdp && !(c.epsilon > 0.0)) {
    throw std::invalid_argument("rate: LDP constraint requires epsilon > 0");
  }
}

}  // namespace

RateBounds rate_dl(int k, long n, const ConstraintSpec& constraint, double gamma) {
  check_constraint(constraint);
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double value = 0.0;
  switch (constraint.kind) {
    case ConstraintSpec::Kind::kUnconstrained:
      value = std::sqrt(kd / nd) + gamma;
      break;
    case ConstraintSpec::Kind::kBits: {
      const double bins = effective_bins(k, constraint.ell);
      value = std::sqrt(kd * kd / (nd * bins)) + gamma * std::sqrt(kd / bins);
      break;
    }
    case ConstraintSpec::Kind::kLdp: {
      const double eps = constraint.epsilon;
      value = std::sqrt(kd * kd / (eps * eps * nd)) + gamma * std::sqrt(kd) / eps;
      break;
    }
  }
  return {cap(value), cap(value)};
}

RateBounds rate_it(int k, long n, const ConstraintSpec& constraint, double gamma) {
  check_constraint(constraint);
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  const auto unconstrained = [&](double kk, double nn, double g) {
    return std::pow(kk, 0.25) / std::sqrt(nn) + g + std::sqrt(kk * g / nn) +
           std::pow(kk * g * g / nn, 0.25);
  };
  switch (constraint.kind) {
    case ConstraintSpec::Kind::kUnconstrained: {
      const double value = cap(unconstrained(kd, nd, gamma));
      return {value, value};
    }
    case ConstraintSpec::Kind::kBits: {
      const double bins = effective_bins(k, constraint.ell);
      const double statistical = std::sqrt(kd / (std::sqrt(bins) * nd));
      const double attack_scale = std::sqrt(kd / bins);
      const double upper =
          statistical + attack_scale * (gamma + std::sqrt(bins * gamma / nd) +
                                        std::pow(bins * gamma * gamma / nd, 0.25));
      const double lower =
          statistical + attack_scale * (gamma + std::sqrt(bins * gamma / nd));
      return {cap(upper), cap(lower)};
    }
    case ConstraintSpec::Kind::kLdp: {
      const double eps = constraint.epsilon;
      const double value =
          cap(std::sqrt(kd / (eps * eps * nd)) + gamma * std::sqrt(kd) / eps);
      return {value, value};
    }
  }
  throw std::logic_error("rate_it: unreachable");
}

double lower_bound_from_trace_norm(int k, double gamma, double max_trace_norm) {
  if (!(max_trace_norm > 0.0)) {
    throw std::invalid_argument("lower_bound_from_trace_norm: trace norm must be positive");
  }
  return cap(gamma * std::sqrt(static_cast<double>(k) / max_trace_norm));
}

double emd_bound_paninski(long n, int k, double alpha) {
  if (!(alpha >= 0.0) || alpha > 0.5) {
    throw std::invalid_argument("emd_bound_paninski: need alpha in [0, 1/2]");
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double branch = std::min(
      {nd * alpha * alpha / kd, std::sqrt(nd) * alpha * alpha / std::sqrt(kd), alpha});
  return nd * branch;
}

double emd_bound_channels(std::span<const Channel> channels, long n, int k, double alpha) {
  if (k % 2 != 0) throw std::invalid_argument("emd_bound_channels: k must be even");
  if (channels.empty()) throw std::invalid_argument("emd_bound_channels: no channels");
  double max_norm = 0.0;
  for (const auto& w : channels) {
    if (w.k() != k) throw std::invalid_argument("emd_bound_channels: channel over wrong k");
    max_norm = std::max(max_norm, trace_norm(channel_info_matrix(w)));
  }
  return 2.0 * static_cast<double>(n) * alpha * std::sqrt(max_norm / static_cast<double>(k));
}

double solve_alpha_for_emd(long n, int k, double target) {
  if (!(target >= 0.0)) throw std::invalid_argument("solve_alpha_for_emd: negative target");
  double lo = 0.0, hi = 0.5;
  if (emd_bound_paninski(n, k, hi) <= target) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (emd_bound_paninski(n, k, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace robustdist
