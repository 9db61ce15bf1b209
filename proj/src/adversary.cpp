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

#include "robustdist/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace robustdist {

namespace {

std::vector<long> random_permutation(long n, std::uint64_t seed) {
  std::vector<long> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0L);
  Rng rng(seed);
  for (long i = n - 1; i > 0; --i) {
    const auto j = static_cast<long>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }
  return order;
}

// Structural contract every attack must satisfy; violations are library bugs.
void check_outcome(std::span<const int> y, const AttackBudget& budget,
                   AttackOutcome& outcome) {
  if (outcome.z.size() != y.size()) {
    throw std::logic_error("attack produced a transcript of the wrong length");
  }
  if (static_cast<long>(outcome.corrupted.size()) > budget.m) {
    throw std::logic_error("attack exceeded its corruption budget");
  }
  std::sort(outcome.corrupted.begin(), outcome.corrupted.end());
  size_t c = 0;
  for (long i = 0; i < static_cast<long>(y.size()); ++i) {
    const bool in_set = c < outcome.corrupted.size() && outcome.corrupted[c] == i;
    if (in_set) {
      ++c;
    } else if (outcome.z[static_cast<size_t>(i)] != y[static_cast<size_t>(i)]) {
      throw std::logic_error("attack modified a message outside the corrupted set");
    }
  }
}

}  // namespace

AttackBudget::AttackBudget(double gamma_in, long n_in) : gamma(gamma_in), n(n_in) {
  if (!(gamma >= 0.0) || gamma > 1.0) {
    throw std::invalid_argument("AttackBudget: gamma must lie in [0, 1]");
  }
  if (n < 0) throw std::invalid_argument("AttackBudget: negative n");
  // floor(gamma * n), with a tiny slack so that e.g. 0.3 * 10 counts as 3.
  m = static_cast<long>(std::floor(gamma * static_cast<double>(n) + 1e-9));
  m = std::min(m, n);
}

AttackOutcome null_attack(std::span<const int> y, const AttackBudget& budget) {
  AttackOutcome outcome;
  outcome.z.assign(y.begin(), y.end());
  check_outcome(y, budget, outcome);
  return outcome;
}

CouplingKernel build_maximal_coupling(const Distribution& source, const Distribution& target) {
  if (source.k() != target.k()) {
    throw std::invalid_argument("build_maximal_coupling: alphabet mismatch");
  }
  const int k = source.k();
  CouplingKernel kernel;
  kernel.k = k;
  kernel.rows.assign(static_cast<size_t>(k) * static_cast<size_t>(k), 0.0);
  // Overlap stays put; source excess is rerouted proportionally to target excess.
  std::vector<double> excess(static_cast<size_t>(k), 0.0);
  double total_excess = 0.0;
  for (int x = 0; x < k; ++x) {
    excess[static_cast<size_t>(x)] = std::max(target[x] - source[x], 0.0);
    total_excess += excess[static_cast<size_t>(x)];
  }
  kernel.change_probability = total_excess;  // equals tv(source, target)
  for (int x = 0; x < k; ++x) {
    auto* row = kernel.rows.data() + static_cast<size_t>(x) * static_cast<size_t>(k);
    if (source[x] <= 0.0) {
      row[x] = 1.0;  // never drawn; keep the row stochastic
      continue;
    }
    const double keep = std::min(source[x], target[x]) / source[x];
    row[x] = keep;
    const double move = 1.0 - keep;
    if (move > 0.0 && total_excess > 0.0) {
      for (int to = 0; to < k; ++to) {
        if (to == x) continue;
        row[to] = move * excess[static_cast<size_t>(to)] / total_excess;
      }
      // `to == x` has zero target excess whenever move > 0, so nothing is lost.
    } else if (move > 0.0) {
      row[x] = 1.0;  // degenerate; only reachable through rounding noise
    }
  }
  return kernel;
}

CouplingPlan shared_coupling_plan(const Distribution& source, const Distribution& target, long n) {
  if (n < 0) throw std::invalid_argument("shared_coupling_plan: negative n");
  auto kernel = std::make_shared<const CouplingKernel>(build_maximal_coupling(source, target));
  CouplingPlan plan;
  plan.kernels.assign(static_cast<size_t>(n), kernel);
  return plan;
}

AttackOutcome coupling_attack(std::span<const int> y, const CouplingPlan& plan,
                              const AttackBudget& budget, std::uint64_t seed,
                              BudgetPolicy policy) {
  const long n = static_cast<long>(y.size());
  if (plan.n() != n) {
    throw std::invalid_argument("coupling_attack: plan length does not match transcript");
  }
  AttackOutcome outcome;
  outcome.z.assign(y.begin(), y.end());

  const auto order = random_permutation(n, derive_seed(seed, "coupling-order"));
  Rng rng(derive_seed(seed, "coupling-draws"));

  if (policy == BudgetPolicy::kStrict) {
    // All-or-nothing: apply the full redraw only if it fits the Hamming budget.
    std::vector<int> proposal(y.begin(), y.end());
    long changes = 0;
    for (long idx : order) {
      const auto& kernel = *plan.kernels[static_cast<size_t>(idx)];
      const int from = y[static_cast<size_t>(idx)];
      const double u = rng.next_double();
      double acc = 0.0;
      int to = kernel.k - 1;
      for (int cand = 0; cand < kernel.k; ++cand) {
        acc += kernel.prob(cand, from);
        if (u < acc) {
          to = cand;
          break;
        }
      }
      proposal[static_cast<size_t>(idx)] = to;
      if (to != from) ++changes;
    }
    outcome.requested_changes = changes;
    if (changes <= budget.m) {
      outcome.z = std::move(proposal);
      for (long i = 0; i < n; ++i) {
        if (outcome.z[static_cast<size_t>(i)] != y[static_cast<size_t>(i)]) {
          outcome.corrupted.push_back(i);
        }
      }
    } else {
      outcome.budget_exhausted = true;  // transcript reverted wholesale
    }
    check_outcome(y, budget, outcome);
    return outcome;
  }

  long applied = 0;
  for (long idx : order) {
    const auto& kernel = *plan.kernels[static_cast<size_t>(idx)];
    const int from = y[static_cast<size_t>(idx)];
    const double u = rng.next_double();
    double acc = 0.0;
    int to = kernel.k - 1;
    for (int cand = 0; cand < kernel.k; ++cand) {
      acc += kernel.prob(cand, from);
      if (u < acc) {
        to = cand;
        break;
      }
    }
    if (to == from) continue;
    ++outcome.requested_changes;
    if (applied < budget.m) {
      outcome.z[static_cast<size_t>(idx)] = to;
      outcome.corrupted.push_back(idx);
      ++applied;
    } else {
      outcome.budget_exhausted = true;
    }
  }
  check_outcome(y, budget, outcome);
  return outcome;
}

AttackOutcome flatten_attack(std::span<const int> y, int k, const AttackBudget& budget) {
  const long n = static_cast<long>(y.size());
  AttackOutcome outcome;
  outcome.z.assign(y.begin(), y.end());
  std::vector<long> count(static_cast<size_t>(k), 0);
  std::vector<std::vector<long>> positions(static_cast<size_t>(k));
  for (long i = 0; i < n; ++i) {
    const int symbol = y[static_cast<size_t>(i)];
    if (symbol < 0 || symbol >= k) {
      throw std::invalid_argument("flatten_attack: message out of range");
    }
    ++count[static_cast<size_t>(symbol)];
    positions[static_cast<size_t>(symbol)].push_back(i);
  }
  std::vector<size_t> next_pos(static_cast<size_t>(k), 0);
  const double target = static_cast<double>(n) / k;
  for (long move = 0; move < budget.m; ++move) {
    int donor = -1, recipient = -1;
    for (int x = 0; x < k; ++x) {
      const double surplus = static_cast<double>(count[static_cast<size_t>(x)]) - target;
      if (surplus > 0.0 && count[static_cast<size_t>(x)] > 0 &&
          (donor == -1 ||
           surplus > static_cast<double>(count[static_cast<size_t>(donor)]) - target)) {
        donor = x;
      }
      if (surplus < 0.0 &&
          (recipient == -1 ||
           surplus < static_cast<double>(count[static_cast<size_t>(recipient)]) - target)) {
        recipient = x;
      }
    }
    if (donor == -1 || recipient == -1) break;
    const double cd = static_cast<double>(count[static_cast<size_t>(donor)]);
    const double cr = static_cast<double>(count[static_cast<size_t>(recipient)]);
    const double delta = (std::abs(cd - 1.0 - target) + std::abs(cr + 1.0 - target)) -
                         (std::abs(cd - target) + std::abs(cr - target));
    if (!(delta < -1e-12)) break;  // no strictly improving move left
    const long pos = positions[static_cast<size_t>(donor)][next_pos[static_cast<size_t>(donor)]++];
    outcome.z[static_cast<size_t>(pos)] = recipient;
    outcome.corrupted.push_back(pos);
    --count[static_cast<size_t>(donor)];
    ++count[static_cast<size_t>(recipient)];
  }
  check_outcome(y, budget, outcome);
  return outcome;
}

AttackOutcome spike_attack(std::span<const int> y, int target, int k,
                           const AttackBudget& budget) {
  if (target < 0 || target >= k) throw std::invalid_argument("spike_attack: bad target");
  const long n = static_cast<long>(y.size());
  AttackOutcome outcome;
  outcome.z.assign(y.begin(), y.end());
  std::vector<long> count(static_cast<size_t>(k), 0);
  std::vector<std::vector<long>> positions(static_cast<size_t>(k));
  for (long i = 0; i < n; ++i) {
    const int symbol = y[static_cast<size_t>(i)];
    if (symbol < 0 || symbol >= k) {
      throw std::invalid_argument("spike_attack: message out of range");
    }
    ++count[static_cast<size_t>(symbol)];
    positions[static_cast<size_t>(symbol)].push_back(i);
  }
  std::vector<int> donors;
  for (int x = 0; x < k; ++x) {
    if (x != target && count[static_cast<size_t>(x)] > 0) donors.push_back(x);
  }
  std::sort(donors.begin(), donors.end(), [&](int a, int b) {
    if (count[static_cast<size_t>(a)] != count[static_cast<size_t>(b)]) {
      return count[static_cast<size_t>(a)] > count[static_cast<size_t>(b)];
    }
    return a < b;
  });
  long remaining = budget.m;
  for (int donor : donors) {
    if (remaining == 0) break;
    for (long pos : positions[static_cast<size_t>(donor)]) {
      if (remaining == 0) break;
      outcome.z[static_cast<size_t>(pos)] = target;
      outcome.corrupted.push_back(pos);
      --remaining;
    }
  }
  check_outcome(y, budget, outcome);
  return outcome;
}

AttackOutcome hash_flood_attack(std::span<const int> y, std::span<const HashFunction> hashes,
                                std::span<const int> target_set, const AttackBudget& budget,
                                std::uint64_t seed) {
  const long n = static_cast<long>(y.size());
  if (static_cast<long>(hashes.size()) != n) {
    throw std::invalid_argument("hash_flood_attack: one hash per user required");
  }
  AttackOutcome outcome;
  outcome.z.assign(y.begin(), y.end());
  if (n == 0 || budget.m == 0) {
    check_outcome(y, budget, outcome);
    return outcome;
  }
  const int k = hashes[0].k;
  std::vector<signed char> in_target(static_cast<size_t>(k), -1);
  for (int x : target_set) {
    if (x < 0 || x >= k) throw std::invalid_argument("hash_flood_attack: target symbol out of range");
    in_target[static_cast<size_t>(x)] = 1;
  }
  const auto order = random_permutation(n, derive_seed(seed, "flood-order"));
  const int bins = hashes[0].bins();
  std::vector<long> score(static_cast<size_t>(bins));
  for (long pick = 0; pick < budget.m; ++pick) {
    const long user = order[static_cast<size_t>(pick)];
    const auto& h = hashes[static_cast<size_t>(user)];
    std::fill(score.begin(), score.end(), 0L);
    for (int x = 0; x < k; ++x) score[static_cast<size_t>(h(x))] += in_target[static_cast<size_t>(x)];
    int best = 0;
    for (int b = 1; b < bins; ++b) {
      if (score[static_cast<size_t>(b)] > score[static_cast<size_t>(best)]) best = b;
    }
    outcome.z[static_cast<size_t>(user)] = best;
    // The corrupted set is the users the adversary controls, whether or not
    // the honest message already happened to be the chosen bin.
    outcome.corrupted.push_back(user);
    ++outcome.requested_changes;
  }
  check_outcome(y, budget, outcome);
  return outcome;
}

}  // namespace robustdist
