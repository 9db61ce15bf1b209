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

#ifndef ROBUSTDIST_EMD_HPP_
#define ROBUSTDIST_EMD_HPP_

#include <span>
#include <vector>

#include "robustdist/distribution.hpp"

namespace robustdist {

inline constexpr long kDefaultAtomCap = 1'000'000;

// A distribution over a finite product space: one alphabet size per
// coordinate, mass indexed lexicographically with the last coordinate
// fastest. Intended for exact desk-scale computations only.
struct FiniteJoint {
  std::vector<int> alphabet_sizes;
  std::vector<double> mass;

  FiniteJoint(std::vector<int> sizes, std::vector<double> mass,
              long atom_cap = kDefaultAtomCap);

  long atoms() const noexcept { return static_cast<long>(mass.size()); }
  int coordinates() const noexcept { return static_cast<int>(alphabet_sizes.size()); }

  // Decodes a lexicographic atom index into per-coordinate symbols.
  std::vector<int> decode(long atom) const;
};

// Product of independent per-coordinate distributions.
FiniteJoint product_joint(std::span<const Distribution> coords,
                          long atom_cap = kDefaultAtomCap);

// Convex mixture of joints over identical supports.
FiniteJoint mix_joints(std::span<const FiniteJoint> joints,
                       std::span<const double> weights);

// Exact earth-mover distance between two joints over the same support, with
// Hamming distance (number of differing coordinates) as the ground cost.
// Solved as a min-cost transportation problem over the positive-mass atoms.
double exact_emd_hamming(const FiniteJoint& q1, const FiniteJoint& q2);

// Sum of per-coordinate TV distances. This is the transport cost of the
// coupling that moves every coordinate independently, so it upper-bounds
// exact_emd_hamming of the corresponding product joints.
double naive_coupling_emd_bound(std::span<const Distribution> per_coord_p,
                                std::span<const Distribution> per_coord_q);

}  // namespace robustdist

#endif  // ROBUSTDIST_EMD_HPP_
