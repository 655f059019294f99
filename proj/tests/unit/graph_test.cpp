// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "settlesim/graph.hpp"
#include "test_support.hpp"

using namespace settlesim;

namespace {

using Edges = std::vector<std::pair<ElementId, ElementId>>;

std::vector<std::pair<std::size_t, std::size_t>> edge_list(const Adjacency& adj) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (std::size_t v : adj[u]) out.emplace_back(u, v);
  }
  return out;
}

}  // namespace

TEST_CASE("DependencyGraph construction") {
  const Edges edges{{1, 2}, {1, 2}, {2, 3}};
  const DependencyGraph g({3, 1, 2}, edges);
  CHECK(g.nodes() == std::vector<ElementId>{1, 2, 3});
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(2, 1));
  CHECK(g.index_of(3) == 2);
  CHECK(g.index_of(9) == std::nullopt);
  CHECK_THROWS_AS(DependencyGraph({1, 1}, {}), std::invalid_argument);
  const Edges bad{{1, 9}};
  CHECK_THROWS_AS(DependencyGraph({1}, bad), std::invalid_argument);
}

TEST_CASE("tarjan_scc fixed cases") {
  CHECK(tarjan_scc(DependencyGraph{}).empty());
  const Edges cycle{{1, 2}, {2, 3}, {3, 1}};
  const auto sccs = tarjan_scc(DependencyGraph({1, 2, 3}, cycle));
  REQUIRE(sccs.size() == 1);
  CHECK(sccs[0].members == std::vector<ElementId>{1, 2, 3});
}

TEST_CASE("condense fixed cases") {
  const DependencyGraph edgeless({5, 6, 7, 8}, {});
  const CondensedDag d0 = condense(edgeless, tarjan_scc(edgeless));
  CHECK(d0.groups.size() == 4);
  CHECK(edge_list(d0.edges).empty());

  const Edges e{{1, 2}, {2, 3}, {3, 1}, {3, 4}};
  const DependencyGraph g({1, 2, 3, 4}, e);
  const CondensedDag d = condense(g, tarjan_scc(g));
  REQUIRE(d.groups.size() == 2);
  const auto el = edge_list(d.edges);
  REQUIRE(el.size() == 1);
  CHECK(d.groups[el[0].first].members == std::vector<ElementId>{1, 2, 3});
  CHECK(d.groups[el[0].second].members == std::vector<ElementId>{4});
}

TEST_CASE("tarjan_scc equals mutual reachability on random graphs") {
  testsupport::Rng rng(31337);
  const double densities[] = {0.0, 0.02, 0.05, 0.1, 0.3};
  for (int trial = 0; trial < 200; ++trial) {
    const auto rg = testsupport::random_graph(rng, 50, densities[trial % 5]);
    const DependencyGraph g(rg.nodes, rg.edges);
    const auto sccs = tarjan_scc(g);
    const auto reach = testsupport::transitive_closure(g.nodes(), g.edges());

    std::vector<std::size_t> comp(g.node_count(), SIZE_MAX);
    for (std::size_t c = 0; c < sccs.size(); ++c) {
      CHECK(sccs[c].id == c);
      CHECK_FALSE(sccs[c].members.empty());
      CHECK(std::is_sorted(sccs[c].members.begin(), sccs[c].members.end()));
      for (ElementId m : sccs[c].members) {
        const std::size_t i = *g.index_of(m);
        CHECK(comp[i] == SIZE_MAX);
        comp[i] = c;
      }
    }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      REQUIRE(comp[i] != SIZE_MAX);
      for (std::size_t j = 0; j < g.node_count(); ++j) {
        CHECK((comp[i] == comp[j]) == (reach[i][j] && reach[j][i]));
      }
    }

    const CondensedDag d = condense(g, sccs);
    CHECK(testsupport::acyclic_by_closure(d.groups.size(), edge_list(d.edges)));
    CHECK(is_acyclic(d.edges));
    for (const auto& [from, to] : edge_list(d.edges)) CHECK(from > to);
    // Every element edge between two groups shows up in the condensation.
    for (const auto& [a, b] : g.edges()) {
      const std::size_t ga = d.group_of[*g.index_of(a)];
      const std::size_t gb = d.group_of[*g.index_of(b)];
      if (ga != gb) {
        CHECK(std::binary_search(d.edges[ga].begin(), d.edges[ga].end(), gb));
      }
    }
    CHECK(tarjan_scc(g) == sccs);
  }
}

TEST_CASE("tarjan_scc handles a long path without recursion") {
  std::vector<ElementId> nodes;
  Edges edges;
  for (ElementId i = 0; i < 200000; ++i) {
    nodes.push_back(i);
    if (i > 0) edges.emplace_back(i - 1, i);
  }
  edges.emplace_back(199999, 0);
  const DependencyGraph g(nodes, edges);
  const auto sccs = tarjan_scc(g);
  REQUIRE(sccs.size() == 1);
  CHECK(sccs[0].members.size() == 200000);
}

TEST_CASE("stable_topological_order and levels") {
  testsupport::Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = testsupport::uniform(rng, 0, 30);
    Adjacency adj(n);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < u; ++v) {
        if (testsupport::coin(rng, 0.1)) adj[u].push_back(v);
      }
    }
    const auto order = stable_topological_order(adj);
    REQUIRE(order.has_value());
    std::vector<std::size_t> at(n);
    for (std::size_t i = 0; i < n; ++i) at[(*order)[i]] = i;
    for (const auto& [u, v] : edge_list(adj)) CHECK(at[u] < at[v]);

    // Longest path to a sink, by memoized recursion over the DAG.
    std::vector<long> memo(n, -1);
    std::function<long(std::size_t)> depth = [&](std::size_t u) -> long {
      if (memo[u] >= 0) return memo[u];
      long best = 0;
      for (std::size_t v : adj[u]) best = std::max(best, depth(v) + 1);
      return memo[u] = best;
    };
    const auto levels = levels_of_reverse_topological_dag(adj);
    for (std::size_t u = 0; u < n; ++u) CHECK(static_cast<long>(levels[u]) == depth(u));

    if (n >= 2) {
      adj[0].push_back(n - 1);
      if (!adj[n - 1].empty() || n == 2) {
        adj[n - 1].push_back(0);
        CHECK_FALSE(stable_topological_order(adj).has_value());
        CHECK_FALSE(is_acyclic(adj));
      }
    }
  }
  const Adjacency tie(3);
  CHECK(*stable_topological_order(tie) == std::vector<std::size_t>{0, 1, 2});
}
