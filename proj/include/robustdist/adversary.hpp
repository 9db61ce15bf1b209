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

#ifndef ROBUSTDIST_ADVERSARY_HPP_
#define ROBUSTDIST_ADVERSARY_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "robustdist/channel.hpp"
#include "robustdist/distribution.hpp"

namespace robustdist {

// Corruption budget: the adversary may rewrite at most m = floor(gamma * n)
// of the n messages.
struct AttackBudget {
  double gamma = 0.0;
  long n = 0;
  long m = 0;

  AttackBudget(double gamma, long n);
};

// Result of an attack. z agrees with the input off the corrupted set, the
// corrupted set never exceeds the budget, and budget_exhausted records
// whether any intended rewrite had to be dropped.
struct AttackOutcome {
  std::vector<int> z;
  std::vector<long> corrupted;  // sorted indices
  bool budget_exhausted = false;
  long requested_changes = 0;  // rewrites the strategy wanted before budgeting
};

// Conditional kernel realizing a maximal coupling of two message laws: rows
// are "new symbol given old symbol" distributions, the diagonal keeps as much
// mass in place as the two laws share, and the probability of changing a
// symbol drawn from the source law equals tv(source, target).
struct CouplingKernel {
  int k = 0;
  std::vector<double> rows;  // row-major k x k
  double change_probability = 0.0;

  double prob(int to, int from) const noexcept {
    return rows[static_cast<size_t>(from) * static_cast<size_t>(k) + static_cast<size_t>(to)];
  }
};

CouplingKernel build_maximal_coupling(const Distribution& source, const Distribution& target);

// One kernel per user. Kernels are shared pointers because experiments
// usually give every user the same pair of laws.
struct CouplingPlan {
  std::vector<std::shared_ptr<const CouplingKernel>> kernels;

  long n() const noexcept { return static_cast<long>(kernels.size()); }
};

CouplingPlan shared_coupling_plan(const Distribution& source, const Distribution& target, long n);

// Budget enforcement when the coupling proposes more rewrites than allowed:
// keep a random subset of m of them, or revert the whole transcript.
enum class BudgetPolicy { kPartial, kStrict };

// Baseline: no message is touched.
AttackOutcome null_attack(std::span<const int> y, const AttackBudget& budget);

// Redraws each message through its user's coupling kernel. Users are
// processed in a seed-derived uniformly random order; proposed changes are
// applied until the budget runs out (partial policy) or all-or-nothing
// against the Hamming budget (strict policy). With a full budget the output
// of a source-law transcript is distributed exactly as the target law.
AttackOutcome coupling_attack(std::span<const int> y, const CouplingPlan& plan,
                              const AttackBudget& budget, std::uint64_t seed,
                              BudgetPolicy policy = BudgetPolicy::kPartial);

// Moves messages from over-represented symbols to under-represented ones,
// each move chosen to maximally shrink the empirical distance to uniform.
AttackOutcome flatten_attack(std::span<const int> y, int k, const AttackBudget& budget);

// Rewrites messages from the most common non-target symbols to the target,
// inflating the empirical distance to uniform.
AttackOutcome spike_attack(std::span<const int> y, int target, int k,
                           const AttackBudget& budget);

// Attack on the hashing protocol. Each corrupted user reports the bin whose
// preimage under that user's hash leans most heavily into the target set,
// biasing the decoded frequencies toward those symbols. Corrupted users are
// the first m in a seed-derived random order.
AttackOutcome hash_flood_attack(std::span<const int> y, std::span<const HashFunction> hashes,
                                std::span<const int> target_set, const AttackBudget& budget,
                                std::uint64_t seed);

}  // namespace robustdist

#endif  // ROBUSTDIST_ADVERSARY_HPP_
