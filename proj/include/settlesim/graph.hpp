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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace settlesim {

using ElementId = std::uint32_t;
using Adjacency = std::vector<std::vector<std::size_t>>;

// Directed graph over element ids. Nodes are kept in ascending id order and
// every adjacency list is sorted and duplicate free, which fixes the
// iteration order of all graph algorithms below.
class DependencyGraph {
 public:
  DependencyGraph() = default;
  // Throws std::invalid_argument on a duplicate node or an edge endpoint
  // that is not a node.
  DependencyGraph(std::vector<ElementId> nodes,
                  std::span<const std::pair<ElementId, ElementId>> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const;
  const std::vector<ElementId>& nodes() const { return nodes_; }
  const Adjacency& adjacency() const { return adj_; }

  std::optional<std::size_t> index_of(ElementId id) const;
  bool has_edge(ElementId from, ElementId to) const;
  std::vector<std::pair<ElementId, ElementId>> edges() const;

 private:
  std::vector<ElementId> nodes_;
  Adjacency adj_;
};

class DanglingReference : public std::invalid_argument {
 public:
  DanglingReference(ElementId source, ElementId target);
  ElementId source() const { return source_; }
  ElementId target() const { return target_; }

 private:
  ElementId source_;
  ElementId target_;
};

// A strongly connected component. `id` is its emission index.
struct SuperGroup {
  std::size_t id = 0;
  std::vector<ElementId> members;  // ascending, non-empty

  friend bool operator==(const SuperGroup&, const SuperGroup&) = default;
};

// Tarjan's algorithm, iterative. Roots are tried in ascending node order and
// successors in ascending order. Components come out in reverse topological
// order of the condensation: every edge between two components points from
// the later-emitted one to the earlier-emitted one.
std::vector<SuperGroup> tarjan_scc(const DependencyGraph& g);

struct CondensedDag {
  std::vector<SuperGroup> groups;
  Adjacency edges;                     // by supergroup id, sorted, no self loops
  std::vector<std::size_t> group_of;   // node index -> supergroup id

  friend bool operator==(const CondensedDag&, const CondensedDag&) = default;
};

CondensedDag condense(const DependencyGraph& g, std::vector<SuperGroup> sccs);

// Kahn's algorithm; true when the graph has no directed cycle.
bool is_acyclic(const Adjacency& adj);

// Topological order that always picks the smallest available index. Returns
// nullopt on a cycle.
std::optional<std::vector<std::size_t>> stable_topological_order(const Adjacency& adj);

// Longest path (in edges) from each node to a node without successors.
// Requires an acyclic graph whose edges all point to smaller indices, which
// is how condense() numbers its supergroups.
std::vector<std::size_t> levels_of_reverse_topological_dag(const Adjacency& adj);

}  // namespace settlesim
