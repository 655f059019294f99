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

#include "settlesim/graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>

namespace settlesim {

DependencyGraph::DependencyGraph(std::vector<ElementId> nodes,
                                 std::span<const std::pair<ElementId, ElementId>> edges)
    : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw std::invalid_argument("duplicate node in dependency graph");
  }
  adj_.resize(nodes_.size());
  for (const auto& [from, to] : edges) {
    auto f = index_of(from);
    auto t = index_of(to);
    if (!f || !t) {
      throw std::invalid_argument("edge " + std::to_string(from) + "->" +
                                  std::to_string(to) + " has an unknown endpoint");
    }
    adj_[*f].push_back(*t);
  }
  for (auto& succ : adj_) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
}

std::size_t DependencyGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& succ : adj_) n += succ.size();
  return n;
}

std::optional<std::size_t> DependencyGraph::index_of(ElementId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool DependencyGraph::has_edge(ElementId from, ElementId to) const {
  auto f = index_of(from);
  auto t = index_of(to);
  if (!f || !t) return false;
  return std::binary_search(adj_[*f].begin(), adj_[*f].end(), *t);
}

std::vector<std::pair<ElementId, ElementId>> DependencyGraph::edges() const {
  std::vector<std::pair<ElementId, ElementId>> out;
  for (std::size_t i = 0; i < adj_.size(); ++i) {
    for (std::size_t j : adj_[i]) out.emplace_back(nodes_[i], nodes_[j]);
  }
  return out;
}

DanglingReference::DanglingReference(ElementId source, ElementId target)
    : std::invalid_argument("element " + std::to_string(source) +
                            " references unknown element " + std::to_string(target)),
      source_(source),
      target_(target) {}

std::vector<SuperGroup> tarjan_scc(const DependencyGraph& g) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  const auto& adj = g.adjacency();
  const std::size_t n = adj.size();

  std::vector<std::size_t> index(n, kUnvisited);
  std::vector<std::size_t> lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<SuperGroup> out;
  std::size_t next_index = 0;

  // Explicit DFS stack of (node, next successor position).
  std::vector<std::pair<std::size_t, std::size_t>> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        const std::size_t w = adj[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        auto& parent = call.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
      }
      if (lowlink[done] == index[done]) {
        SuperGroup sg;
        sg.id = out.size();
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          sg.members.push_back(g.nodes()[w]);
        } while (w != done);
        std::sort(sg.members.begin(), sg.members.end());
        out.push_back(std::move(sg));
      }
    }
  }
  return out;
}

CondensedDag condense(const DependencyGraph& g, std::vector<SuperGroup> sccs) {
  CondensedDag dag;
  dag.group_of.assign(g.node_count(), 0);
  for (const auto& sg : sccs) {
    for (ElementId m : sg.members) {
      auto idx = g.index_of(m);
      if (!idx) throw std::invalid_argument("supergroup member is not a graph node");
      dag.group_of[*idx] = sg.id;
    }
  }
  dag.edges.resize(sccs.size());
  const auto& adj = g.adjacency();
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (std::size_t w : adj[v]) {
      const std::size_t a = dag.group_of[v];
      const std::size_t b = dag.group_of[w];
      if (a != b) dag.edges[a].push_back(b);
    }
  }
  for (auto& succ : dag.edges) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  dag.groups = std::move(sccs);
  return dag;
}

bool is_acyclic(const Adjacency& adj) {
  return stable_topological_order(adj).has_value();
}

std::optional<std::vector<std::size_t>> stable_topological_order(const Adjacency& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& succ : adj) {
    for (std::size_t w : succ) ++indegree[w];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t w : adj[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

std::vector<std::size_t> levels_of_reverse_topological_dag(const Adjacency& adj) {
  std::vector<std::size_t> level(adj.size(), 0);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (std::size_t w : adj[v]) {
      if (w >= v) throw std::invalid_argument("edge does not point to an earlier node");
      level[v] = std::max(level[v], level[w] + 1);
    }
  }
  return level;
}

}  // namespace settlesim
