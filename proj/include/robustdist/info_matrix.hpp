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

#ifndef ROBUSTDIST_INFO_MATRIX_HPP_
#define ROBUSTDIST_INFO_MATRIX_HPP_

#include <vector>

#include "robustdist/channel.hpp"

namespace robustdist {

// Symmetric (k/2) x (k/2) Gram-style matrix measuring how well a channel
// separates the paired perturbation family. Positive semidefinite by
// construction (each output symbol contributes a rank-one term).
class ChannelInfoMatrix {
 public:
  ChannelInfoMatrix(int k, std::vector<double> entries);  // row-major (k/2)^2

  int k() const noexcept { return k_; }
  int half_k() const noexcept { return k_ / 2; }
  double entry(int i, int j) const noexcept {
    return entries_[static_cast<size_t>(i) * static_cast<size_t>(half_k()) +
                    static_cast<size_t>(j)];
  }
  const std::vector<double>& entries() const noexcept { return entries_; }

  double trace() const noexcept;
  double min_eigenvalue() const;

 private:
  int k_;
  std::vector<double> entries_;
};

// H(W)(i1, i2) = sum_y (W(y|2*i1) - W(y|2*i1+1)) * (W(y|2*i2) - W(y|2*i2+1))
//               / sum_x W(y|x),
// with outputs never emitted by any input skipped (their contribution is the
// 0/0 limit, which is 0). Requires even k.
ChannelInfoMatrix channel_info_matrix(const Channel& w);

// Sum of absolute eigenvalues. For PSD inputs this equals the trace.
double trace_norm(const ChannelInfoMatrix& m);

}  // namespace robustdist

#endif  // ROBUSTDIST_INFO_MATRIX_HPP_
