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

#ifndef ROBUSTDIST_CONSTRAINT_HPP_
#define ROBUSTDIST_CONSTRAINT_HPP_

#include <stdexcept>
#include <string>

namespace robustdist {

// The information constraint a channel operates under: none, an l-bit output
// alphabet, or epsilon-local differential privacy.
struct ConstraintSpec {
  enum class Kind { kUnconstrained, kBits, kLdp };

  Kind kind = Kind::kUnconstrained;
  int ell = 0;
  double epsilon = 0.0;

  static ConstraintSpec unconstrained() { return {}; }

  static ConstraintSpec bits(int ell) {
    if (ell < 1) throw std::invalid_argument("ConstraintSpec: need ell >= 1");
    return {Kind::kBits, ell, 0.0};
  }

  static ConstraintSpec ldp(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("ConstraintSpec: need epsilon > 0");
    return {Kind::kLdp, 0, epsilon};
  }

  bool operator==(const ConstraintSpec&) const = default;

  std::string label() const {
    switch (kind) {
      case Kind::kBits:
        return "bits(" + std::to_string(ell) + ")";
      case Kind::kLdp:
        return "ldp(" + std::to_string(epsilon) + ")";
      default:
        return "unconstrained";
    }
  }
};

}  // namespace robustdist

#endif  // ROBUSTDIST_CONSTRAINT_HPP_
