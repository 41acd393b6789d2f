// Copyright 2026 The nucresp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

#include "nucresp/circuits.hpp"
#include "nucresp/error.hpp"
#include "nucresp/gates.hpp"

namespace nucresp {

/// Undirected coupling graph on physical qubits.
struct CouplingMap {
  int n_qubits = 0;
  std::vector<std::pair<int, int>> edges;

  bool connected(int a, int b) const {
    return std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
      return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
  }
};

/// Five-qubit T-shaped layout: 0-1, 1-2, 1-3, 3-4.
inline CouplingMap t_coupling() { return {5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}}; }

struct RoutedCircuit {
  Circuit physical;
  std::vector<int> initial_layout;  ///< logical qubit k starts on physical initial_layout[k]
  std::vector<int> final_layout;    ///< logical qubit k ends on physical final_layout[k]
  int inserted_swaps = 0;
};

/// Maps a circuit onto a coupling graph with the fewest entangling gates.
///
/// Exhaustive shortest-path search over (gate index, placement): every
/// two-qubit gate costs its CNOT count and every inserted SWAP costs 3. The
/// initial placement is free. Gate direction is not constrained. Intended
/// for the handful of qubits used here; the state space grows as n!.
inline RoutedCircuit route(const Circuit& c, const CouplingMap& cm) {
  const int n = c.n_qubits();
  detail::require(n == cm.n_qubits, "route: coupling map size differs from the circuit");
  detail::require(n <= 8, "route: exhaustive routing limited to 8 qubits");
  detail::require(c.has_identity_layout(), "route: input must not carry a relabeled layout");
  std::vector<std::size_t> two;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].is_two_qubit()) two.push_back(i);

  using Layout = std::vector<int>;  // logical -> physical
  using State = std::pair<std::size_t, Layout>;
  std::map<State, int> dist;
  std::map<State, std::pair<State, int>> parent;  // second: -1 executes gate, else edge index
  using Item = std::tuple<int, std::size_t, Layout>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;

  Layout perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    dist[{0, perm}] = 0;
    pq.emplace(0, 0, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto gate_cost = [&](const Gate& g) { return g.kind == GateKind::SWAP ? 3 : 1; };
  std::optional<State> goal;
  while (!pq.empty()) {
    auto [d, i, lay] = pq.top();
    pq.pop();
    State st{i, lay};
    if (dist[st] < d) continue;
    if (i == two.size()) {
      goal = st;
      break;
    }
    auto relax = [&](State nx, int nd, int how) {
      auto it = dist.find(nx);
      if (it == dist.end() || nd < it->second) {
        dist[nx] = nd;
        parent[nx] = {st, how};
        pq.emplace(nd, nx.first, nx.second);
      }
    };
    const Gate& g = c[two[i]];
    if (cm.connected(lay[static_cast<std::size_t>(g.q[0])], lay[static_cast<std::size_t>(g.q[1])]))
      relax({i + 1, lay}, d + gate_cost(g), -1);
    for (std::size_t e = 0; e < cm.edges.size(); ++e) {
      Layout nl = lay;
      const auto [pa, pb] = cm.edges[e];
      for (auto& v : nl) {
        if (v == pa) v = pb;
        else if (v == pb) v = pa;
      }
      relax({i, nl}, d + 3, static_cast<int>(e));
    }
  }
  detail::ensure(goal.has_value(), "route: no routing found");

  // Recover the SWAP insertions along the optimal path.
  std::vector<std::vector<int>> swaps_before(two.size() + 1);
  State cur = *goal;
  while (parent.count(cur)) {
    const auto& [prev, how] = parent.at(cur);
    if (how >= 0) swaps_before[prev.first].push_back(how);
    cur = prev;
  }
  for (auto& v : swaps_before) std::reverse(v.begin(), v.end());

  RoutedCircuit out{Circuit(n), cur.second, {}, 0};
  Layout lay = cur.second;
  std::size_t next_two = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    Gate g = c[i];
    if (g.is_two_qubit()) {
      for (int e : swaps_before[next_two]) {
        const auto [pa, pb] = cm.edges[static_cast<std::size_t>(e)];
        out.physical.append(Gate::swap(pa, pb), Block::None);
        ++out.inserted_swaps;
        for (auto& v : lay) {
          if (v == pa) v = pb;
          else if (v == pb) v = pa;
        }
      }
      ++next_two;
    }
    g.q[0] = lay[static_cast<std::size_t>(g.q[0])];
    if (g.arity() == 2) g.q[1] = lay[static_cast<std::size_t>(g.q[1])];
    out.physical.append(g);
  }
  out.final_layout = lay;
  return out;
}

}  // namespace nucresp
