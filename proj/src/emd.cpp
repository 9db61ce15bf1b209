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

#include "robustdist/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace robustdist {

namespace {

long checked_atom_count(const std::vector<int>& sizes, long cap) {
  if (sizes.empty()) throw std::invalid_argument("FiniteJoint: no coordinates");
  long atoms = 1;
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("FiniteJoint: alphabet sizes must be >= 1");
    if (atoms > cap / s) {
      throw std::invalid_argument("FiniteJoint: support size exceeds the atom cap");
    }
    atoms *= s;
  }
  return atoms;
}

int hamming(const std::vector<int>& a, const std::vector<int>& b) {
  int d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
  return d;
}

// Min-cost flow by successive shortest paths with potentials. Sized for the
// desk-scale transportation instances this module handles; capacities are
// probability masses (doubles), costs are small nonnegative integers.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : head_(static_cast<size_t>(nodes), -1) {}

  void add_edge(int from, int to, double capacity, double cost) {
    edges_.push_back({to, head_[static_cast<size_t>(from)], capacity, cost});
    head_[static_cast<size_t>(from)] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[static_cast<size_t>(to)], 0.0, -cost});
    head_[static_cast<size_t>(to)] = static_cast<int>(edges_.size()) - 1;
  }

  // Pushes flow from s to t until the network is saturated. Returns total cost.
  double solve(int s, int t) {
    const int n = static_cast<int>(head_.size());
    std::vector<double> potential(static_cast<size_t>(n), 0.0);
    double total_cost = 0.0;
    constexpr double kEps = 1e-15;
    while (true) {
      // Dijkstra on reduced costs.
      std::vector<double> dist(static_cast<size_t>(n),
                               std::numeric_limits<double>::infinity());
      std::vector<int> prev_edge(static_cast<size_t>(n), -1);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[static_cast<size_t>(s)] = 0.0;
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<size_t>(u)] + kEps) continue;
        for (int e = head_[static_cast<size_t>(u)]; e != -1; e = edges_[static_cast<size_t>(e)].next) {
          const Edge& edge = edges_[static_cast<size_t>(e)];
          if (edge.capacity <= kEps) continue;
          const double nd = d + edge.cost + potential[static_cast<size_t>(u)] -
                            potential[static_cast<size_t>(edge.to)];
          if (nd + kEps < dist[static_cast<size_t>(edge.to)]) {
            dist[static_cast<size_t>(edge.to)] = nd;
            prev_edge[static_cast<size_t>(edge.to)] = e;
            heap.emplace(nd, edge.to);
          }
        }
      }
      if (prev_edge[static_cast<size_t>(t)] == -1) break;  // saturated
      for (int v = 0; v < n; ++v) {
        if (std::isfinite(dist[static_cast<size_t>(v)])) {
          potential[static_cast<size_t>(v)] += dist[static_cast<size_t>(v)];
        }
      }
      // Bottleneck along the augmenting path.
      double push = std::numeric_limits<double>::infinity();
      for (int v = t; v != s;) {
        const Edge& edge = edges_[static_cast<size_t>(prev_edge[static_cast<size_t>(v)])];
        push = std::min(push, edge.capacity);
        v = edges_[static_cast<size_t>(prev_edge[static_cast<size_t>(v)] ^ 1)].to;
      }
      if (!(push > kEps)) break;
      for (int v = t; v != s;) {
        const int e = prev_edge[static_cast<size_t>(v)];
        edges_[static_cast<size_t>(e)].capacity -= push;
        edges_[static_cast<size_t>(e ^ 1)].capacity += push;
        total_cost += push * edges_[static_cast<size_t>(e)].cost;
        v = edges_[static_cast<size_t>(e ^ 1)].to;
      }
    }
    return total_cost;
  }

 private:
  struct Edge {
    int to;
    int next;
    double capacity;
    double cost;
  };

  std::vector<int> head_;
  std::vector<Edge> edges_;
};

}  // namespace

FiniteJoint::FiniteJoint(std::vector<int> sizes, std::vector<double> mass_in, long atom_cap)
    : alphabet_sizes(std::move(sizes)), mass(std::move(mass_in)) {
  const long atoms = checked_atom_count(alphabet_sizes, atom_cap);
  if (atoms != static_cast<long>(mass.size())) {
    throw std::invalid_argument("FiniteJoint: mass length does not match support size");
  }
  double total = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0)) throw std::invalid_argument("FiniteJoint: negative or NaN mass");
    total += m;
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    throw std::invalid_argument("FiniteJoint: mass sums to " + std::to_string(total));
  }
}

std::vector<int> FiniteJoint::decode(long atom) const {
  std::vector<int> symbols(alphabet_sizes.size());
  for (int c = coordinates() - 1; c >= 0; --c) {
    const int size = alphabet_sizes[static_cast<size_t>(c)];
    symbols[static_cast<size_t>(c)] = static_cast<int>(atom % size);
    atom /= size;
  }
  return symbols;
}

FiniteJoint product_joint(std::span<const Distribution> coords, long atom_cap) {
  if (coords.empty()) throw std::invalid_argument("product_joint: no coordinates");
  std::vector<int> sizes;
  sizes.reserve(coords.size());
  for (const auto& d : coords) sizes.push_back(d.k());
  const long atoms = checked_atom_count(sizes, atom_cap);
  std::vector<double> mass(static_cast<size_t>(atoms), 1.0);
  long stride = atoms;
  for (size_t c = 0; c < coords.size(); ++c) {
    stride /= sizes[c];
    for (long a = 0; a < atoms; ++a) {
      mass[static_cast<size_t>(a)] *= coords[c][static_cast<int>((a / stride) % sizes[c])];
    }
  }
  return FiniteJoint(std::move(sizes), std::move(mass), atom_cap);
}

FiniteJoint mix_joints(std::span<const FiniteJoint> joints, std::span<const double> weights) {
  if (joints.empty() || joints.size() != weights.size()) {
    throw std::invalid_argument("mix_joints: need matching joints and weights");
  }
  std::vector<double> mass(joints[0].mass.size(), 0.0);
  for (size_t j = 0; j < joints.size(); ++j) {
    if (joints[j].alphabet_sizes != joints[0].alphabet_sizes) {
      throw std::invalid_argument("mix_joints: support mismatch");
    }
    for (size_t a = 0; a < mass.size(); ++a) mass[a] += weights[j] * joints[j].mass[a];
  }
  return FiniteJoint(joints[0].alphabet_sizes, std::move(mass));
}

double exact_emd_hamming(const FiniteJoint& q1, const FiniteJoint& q2) {
  if (q1.alphabet_sizes != q2.alphabet_sizes) {
    throw std::invalid_argument("exact_emd_hamming: support descriptions differ");
  }
  struct Atom {
    long index;
    double mass;
    std::vector<int> symbols;
  };
  std::vector<Atom> sources, sinks;
  for (long a = 0; a < q1.atoms(); ++a) {
    if (q1.mass[static_cast<size_t>(a)] > 0.0) {
      sources.push_back({a, q1.mass[static_cast<size_t>(a)], q1.decode(a)});
    }
    if (q2.mass[static_cast<size_t>(a)] > 0.0) {
      sinks.push_back({a, q2.mass[static_cast<size_t>(a)], q2.decode(a)});
    }
  }
  const int ns = static_cast<int>(sources.size());
  const int nt = static_cast<int>(sinks.size());
  const int source_node = ns + nt;
  const int sink_node = ns + nt + 1;
  MinCostFlow mcf(ns + nt + 2);
  for (int i = 0; i < ns; ++i) {
    mcf.add_edge(source_node, i, sources[static_cast<size_t>(i)].mass, 0.0);
  }
  for (int j = 0; j < nt; ++j) {
    mcf.add_edge(ns + j, sink_node, sinks[static_cast<size_t>(j)].mass, 0.0);
  }
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      const int cost = hamming(sources[static_cast<size_t>(i)].symbols,
                               sinks[static_cast<size_t>(j)].symbols);
      mcf.add_edge(i, ns + j, std::numeric_limits<double>::max(), cost);
    }
  }
  return mcf.solve(source_node, sink_node);
}

double naive_coupling_emd_bound(std::span<const Distribution> per_coord_p,
                                std::span<const Distribution> per_coord_q) {
  if (per_coord_p.size() != per_coord_q.size()) {
    throw std::invalid_argument("naive_coupling_emd_bound: length mismatch");
  }
  double total = 0.0;
  for (size_t i = 0; i < per_coord_p.size(); ++i) {
    total += tv_distance(per_coord_p[i], per_coord_q[i]);
  }
  return total;
}

}  // namespace robustdist
