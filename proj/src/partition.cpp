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

#include "settlesim/partition.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace settlesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string id_str(std::uint32_t id) { return std::to_string(id); }

std::string join_messages(const std::vector<Violation>& vs) {
  std::string out = "invalid instance:";
  for (const auto& v : vs) out += "\n  [" + v.code + "] " + v.message;
  return out;
}

// Checks `pairs` over `members` (given by position) for unknown endpoints and
// cycles. Returns the adjacency over member positions.
Adjacency pair_graph(const std::vector<OrderedPair>& pairs,
                     const std::unordered_map<std::uint32_t, std::size_t>& pos,
                     std::size_t n, const std::string& where, const char* unknown_code,
                     std::vector<Violation>& out) {
  Adjacency adj(n);
  for (const auto& [a, b] : pairs) {
    auto ia = pos.find(a);
    auto ib = pos.find(b);
    if (ia == pos.end() || ib == pos.end()) {
      out.push_back({unknown_code, where + ": precedence pair (" + id_str(a) + ", " +
                                       id_str(b) + ") names an unknown member"});
      continue;
    }
    adj[ia->second].push_back(ib->second);
  }
  return adj;
}

}  // namespace

InvalidInstance::InvalidInstance(std::vector<Violation> violations)
    : std::invalid_argument(join_messages(violations)),
      violations_(std::move(violations)) {}

InstanceTooLarge::InstanceTooLarge(std::size_t elements, std::size_t limit)
    : std::invalid_argument("instance has " + std::to_string(elements) +
                            " elements; exhaustive search is limited to " +
                            std::to_string(limit)) {}

std::vector<Violation> validate_system(const BatchInstance& inst) {
  std::vector<Violation> out;

  std::unordered_map<ElementId, const Element*> elements;
  for (const auto& e : inst.elements) {
    if (!elements.emplace(e.id, &e).second) {
      out.push_back({"duplicate_element", "element " + id_str(e.id) + " defined twice"});
    }
  }
  std::unordered_map<QueueId, const Queue*> queues;
  for (const auto& q : inst.system.queues) {
    if (!queues.emplace(q.id, &q).second) {
      out.push_back({"duplicate_queue", "queue " + id_str(q.id) + " defined twice"});
    }
  }

  for (const auto& e : inst.elements) {
    for (ElementId r : e.refs) {
      if (r == e.id) {
        out.push_back({"self_ref", "element " + id_str(e.id) + " references itself"});
      } else if (!elements.count(r)) {
        out.push_back({"dangling_ref", "element " + id_str(e.id) +
                                           " references unknown element " + id_str(r)});
      }
    }
    if (!queues.count(e.queue)) {
      out.push_back({"unknown_queue", "element " + id_str(e.id) + " names unknown queue " +
                                          id_str(e.queue)});
    }
  }

  // Membership: every element listed exactly once, in the queue it names.
  std::unordered_map<ElementId, std::size_t> listed;
  for (const auto& q : inst.system.queues) {
    const std::string where = "queue " + id_str(q.id);
    std::unordered_map<std::uint32_t, std::size_t> pos;
    for (std::size_t i = 0; i < q.members.size(); ++i) {
      const ElementId m = q.members[i];
      ++listed[m];
      pos.emplace(m, i);
      auto it = elements.find(m);
      if (it == elements.end()) {
        out.push_back({"unknown_member", where + " lists unknown element " + id_str(m)});
      } else if (it->second->queue != q.id) {
        out.push_back({"queue_membership", where + " lists element " + id_str(m) +
                                               " which belongs to queue " +
                                               id_str(it->second->queue)});
      }
    }
    auto adj = pair_graph(q.precedence, pos, q.members.size(), where,
                          "precedence_non_member", out);
    if (!is_acyclic(adj)) {
      out.push_back({"precedence_cycle", where + ": precedence relation has a cycle"});
    }
  }
  for (const auto& e : inst.elements) {
    auto it = listed.find(e.id);
    const std::size_t n = it == listed.end() ? 0 : it->second;
    if (n != 1 && queues.count(e.queue)) {
      out.push_back({"queue_membership", "element " + id_str(e.id) + " is listed " +
                                             std::to_string(n) + " times in queues"});
    }
  }

  {
    std::unordered_map<std::uint32_t, std::size_t> pos;
    for (std::size_t i = 0; i < inst.system.queues.size(); ++i) {
      pos.emplace(inst.system.queues[i].id, i);
    }
    auto adj = pair_graph(inst.system.queue_precedence, pos, inst.system.queues.size(),
                          "queue list", "unknown_queue", out);
    if (!is_acyclic(adj)) {
      out.push_back({"queue_precedence_cycle", "queue precedence relation has a cycle"});
    }
  }

  // Groups partition the queues.
  std::set<GroupId> group_ids;
  std::unordered_map<QueueId, std::size_t> grouped;
  for (const auto& g : inst.groups) {
    if (!group_ids.insert(g.id).second) {
      out.push_back({"duplicate_group", "group " + id_str(g.id) + " defined twice"});
    }
    for (QueueId q : g.queues) {
      if (!queues.count(q)) {
        out.push_back({"unknown_queue", "group " + id_str(g.id) + " names unknown queue " +
                                            id_str(q)});
      }
      ++grouped[q];
    }
  }
  for (const auto& q : inst.system.queues) {
    auto it = grouped.find(q.id);
    const std::size_t n = it == grouped.end() ? 0 : it->second;
    if (n != 1) {
      out.push_back({"group_partition", "queue " + id_str(q.id) + " belongs to " +
                                            std::to_string(n) + " groups"});
    }
  }

  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    const std::string where = "constraint " + std::to_string(i);
    auto check_id = [&](ElementId id) {
      if (!elements.count(id)) {
        out.push_back({"unknown_element", where + " names unknown element " + id_str(id)});
      }
    };
    std::visit(overloaded{
                   [&](const Requires& c) {
                     check_id(c.a);
                     check_id(c.b);
                     if (c.a == c.b) {
                       out.push_back({"self_constraint", where + " relates element " +
                                                             id_str(c.a) + " to itself"});
                     }
                   },
                   [&](const Excludes& c) {
                     check_id(c.a);
                     check_id(c.b);
                     if (c.a == c.b) {
                       out.push_back({"self_constraint", where + " relates element " +
                                                             id_str(c.a) + " to itself"});
                     }
                   },
                   [&](const Capacity& c) {
                     for (const auto& [id, use] : c.usage) {
                       check_id(id);
                       if (use < 0) {
                         out.push_back({"negative_usage", where + " (" + c.resource +
                                                              "): negative usage for element " +
                                                              id_str(id)});
                       }
                     }
                     if (c.bound < 0) {
                       out.push_back({"negative_bound",
                                      where + " (" + c.resource + "): negative bound"});
                     }
                   },
               },
               inst.constraints[i]);
  }
  return out;
}

DependencyGraph build_dependency_graph(std::span<const Element> elements,
                                       std::span<const Constraint> constraints) {
  std::vector<ElementId> nodes;
  nodes.reserve(elements.size());
  std::unordered_set<ElementId> known;
  for (const auto& e : elements) {
    nodes.push_back(e.id);
    known.insert(e.id);
  }
  std::vector<std::pair<ElementId, ElementId>> edges;
  for (const auto& e : elements) {
    for (ElementId r : e.refs) {
      if (!known.count(r)) throw DanglingReference(e.id, r);
      edges.emplace_back(e.id, r);
    }
  }
  for (const auto& c : constraints) {
    if (const auto* req = std::get_if<Requires>(&c)) {
      if (!known.count(req->a)) throw DanglingReference(req->b, req->a);
      if (!known.count(req->b)) throw DanglingReference(req->a, req->b);
      edges.emplace_back(req->a, req->b);
    }
  }
  return DependencyGraph(std::move(nodes), edges);
}

std::int64_t aggregate(std::span<const ElementId> accepted,
                       std::span<const Element> elements) {
  std::unordered_map<ElementId, std::int64_t> value;
  for (const auto& e : elements) value.emplace(e.id, e.value);
  std::int64_t sum = 0;
  for (ElementId id : accepted) {
    auto it = value.find(id);
    if (it == value.end()) {
      throw std::invalid_argument("aggregate: unknown element " + id_str(id));
    }
    if (__builtin_add_overflow(sum, it->second, &sum)) {
      throw std::overflow_error("aggregate: sum leaves the 64-bit range");
    }
  }
  return sum;
}

std::vector<Violation> check_constraints(const Partition& p,
                                         std::span<const Constraint> constraints) {
  const std::unordered_set<ElementId> in(p.accepted.begin(), p.accepted.end());
  std::vector<Violation> out;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const std::string where = "constraint " + std::to_string(i);
    std::visit(overloaded{
                   [&](const Requires& c) {
                     if (in.count(c.a) && !in.count(c.b)) {
                       out.push_back({"requires", where + ": " + id_str(c.a) +
                                                      " accepted without " + id_str(c.b)});
                     }
                   },
                   [&](const Excludes& c) {
                     if (in.count(c.a) && in.count(c.b)) {
                       out.push_back({"excludes", where + ": " + id_str(c.a) + " and " +
                                                      id_str(c.b) + " both accepted"});
                     }
                   },
                   [&](const Capacity& c) {
                     std::int64_t used = 0;
                     for (const auto& [id, use] : c.usage) {
                       if (in.count(id)) used += use;
                     }
                     if (used > c.bound) {
                       out.push_back({"capacity", where + " (" + c.resource + "): usage " +
                                                      std::to_string(used) + " exceeds bound " +
                                                      std::to_string(c.bound)});
                     }
                   },
               },
               constraints[i]);
  }
  return out;
}

std::vector<Violation> check_feasibility(const Partition& p, const BatchInstance& inst) {
  auto out = check_constraints(p, inst.constraints);
  const std::unordered_set<ElementId> in(p.accepted.begin(), p.accepted.end());
  for (const auto& e : inst.elements) {
    if (!in.count(e.id)) continue;
    for (ElementId r : e.refs) {
      if (!in.count(r)) {
        out.push_back({"unresolved_ref", "element " + id_str(e.id) +
                                             " accepted without referenced element " +
                                             id_str(r)});
      }
    }
  }
  std::unordered_map<QueueId, const QueueGroup*> group_of_queue;
  for (const auto& g : inst.groups) {
    for (QueueId q : g.queues) group_of_queue.emplace(q, &g);
  }
  std::map<GroupId, std::pair<std::size_t, std::size_t>> split;  // (accepted, total)
  for (const auto& e : inst.elements) {
    auto it = group_of_queue.find(e.queue);
    if (it == group_of_queue.end() || !rejects_whole_group(it->second->rule)) continue;
    auto& [acc, total] = split[it->second->id];
    ++total;
    if (in.count(e.id)) ++acc;
  }
  for (const auto& [gid, counts] : split) {
    if (counts.first != 0 && counts.first != counts.second) {
      out.push_back({"group_split", "all-or-nothing group " + id_str(gid) + " has " +
                                        std::to_string(counts.first) + " of " +
                                        std::to_string(counts.second) +
                                        " elements accepted"});
    }
  }
  return out;
}

std::map<ElementId, std::size_t> insertion_positions(const QueueSystem& system) {
  const auto& queues = system.queues;
  std::unordered_map<QueueId, std::size_t> qpos;
  for (std::size_t i = 0; i < queues.size(); ++i) qpos.emplace(queues[i].id, i);

  // Index queues by ascending id so that index ties break by id.
  std::vector<std::size_t> by_id(queues.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return queues[a].id < queues[b].id; });
  std::vector<std::size_t> rank_of(queues.size());
  for (std::size_t r = 0; r < by_id.size(); ++r) rank_of[by_id[r]] = r;

  Adjacency qadj(queues.size());
  for (const auto& [a, b] : system.queue_precedence) {
    auto ia = qpos.find(a);
    auto ib = qpos.find(b);
    if (ia != qpos.end() && ib != qpos.end()) {
      qadj[rank_of[ia->second]].push_back(rank_of[ib->second]);
    }
  }
  auto qorder = stable_topological_order(qadj);
  if (!qorder) throw std::invalid_argument("queue precedence relation has a cycle");

  std::map<ElementId, std::size_t> out;
  std::size_t next = 0;
  for (std::size_t r : *qorder) {
    const Queue& q = queues[by_id[r]];
    std::unordered_map<std::uint32_t, std::size_t> mpos;
    for (std::size_t i = 0; i < q.members.size(); ++i) mpos.emplace(q.members[i], i);
    Adjacency madj(q.members.size());
    for (const auto& [a, b] : q.precedence) {
      auto ia = mpos.find(a);
      auto ib = mpos.find(b);
      if (ia != mpos.end() && ib != mpos.end()) madj[ia->second].push_back(ib->second);
    }
    auto morder = stable_topological_order(madj);
    if (!morder) {
      throw std::invalid_argument("queue " + id_str(q.id) + " precedence has a cycle");
    }
    for (std::size_t i : *morder) out.emplace(q.members[i], next++);
  }
  return out;
}

Partition select_partition(const BatchInstance& inst) {
  if (auto v = validate_system(inst); !v.empty()) throw InvalidInstance(std::move(v));

  const DependencyGraph graph = build_dependency_graph(inst.elements, inst.constraints);
  const CondensedDag dag = condense(graph, tarjan_scc(graph));
  const std::size_t n_groups = dag.groups.size();
  const auto level = levels_of_reverse_topological_dag(dag.edges);
  const auto position = insertion_positions(inst.system);

  std::unordered_map<ElementId, const Element*> element;
  for (const auto& e : inst.elements) element.emplace(e.id, &e);
  std::unordered_map<QueueId, std::size_t> group_index_of_queue;
  for (std::size_t i = 0; i < inst.groups.size(); ++i) {
    for (QueueId q : inst.groups[i].queues) group_index_of_queue.emplace(q, i);
  }
  auto group_of_element = [&](ElementId id) {
    return group_index_of_queue.at(element.at(id)->queue);
  };

  // Per supergroup: rule inputs, owner, and every queue group it touches.
  std::vector<Candidate> candidates(n_groups);
  std::vector<std::size_t> owner(n_groups);
  std::vector<std::vector<std::size_t>> touches(n_groups);
  for (const auto& sg : dag.groups) {
    Candidate& c = candidates[sg.id];
    c.supergroup = sg.id;
    c.earliest_position = position.at(sg.members.front());
    ElementId earliest = sg.members.front();
    for (ElementId m : sg.members) {
      c.total_value += element.at(m)->value;
      const std::size_t p = position.at(m);
      if (p < c.earliest_position) {
        c.earliest_position = p;
        earliest = m;
      }
      touches[sg.id].push_back(group_of_element(m));
    }
    std::sort(touches[sg.id].begin(), touches[sg.id].end());
    touches[sg.id].erase(std::unique(touches[sg.id].begin(), touches[sg.id].end()),
                         touches[sg.id].end());
    owner[sg.id] = group_of_element(earliest);
  }

  // Visit order: level, then owning group id, then the owner's rule.
  std::vector<std::size_t> group_rank(inst.groups.size());
  {
    std::vector<std::size_t> idx(inst.groups.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return inst.groups[a].id < inst.groups[b].id;
    });
    for (std::size_t r = 0; r < idx.size(); ++r) group_rank[idx[r]] = r;
  }
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Candidate>> buckets;
  for (std::size_t s = 0; s < n_groups; ++s) {
    buckets[{level[s], group_rank[owner[s]]}].push_back(candidates[s]);
  }
  std::vector<std::size_t> visit;
  visit.reserve(n_groups);
  for (auto& [key, bucket] : buckets) {
    // The owner of every candidate in the bucket is the same group.
    dispatch_rule(inst.groups[owner[bucket.front().supergroup]].rule)(bucket);
    for (const auto& c : bucket) visit.push_back(c.supergroup);
  }

  // Constraint lookups by element.
  std::unordered_map<ElementId, std::vector<ElementId>> excluded_with;
  std::vector<const Capacity*> capacities;
  for (const auto& c : inst.constraints) {
    if (const auto* ex = std::get_if<Excludes>(&c)) {
      excluded_with[ex->a].push_back(ex->b);
      excluded_with[ex->b].push_back(ex->a);
    } else if (const auto* cap = std::get_if<Capacity>(&c)) {
      capacities.push_back(cap);
    }
  }
  std::vector<std::vector<std::int64_t>> usage(n_groups,
                                               std::vector<std::int64_t>(capacities.size(), 0));
  for (const auto& sg : dag.groups) {
    for (std::size_t k = 0; k < capacities.size(); ++k) {
      for (ElementId m : sg.members) {
        auto it = capacities[k]->usage.find(m);
        if (it != capacities[k]->usage.end()) usage[sg.id][k] += it->second;
      }
    }
  }
  std::vector<std::size_t> group_of_node_sg(graph.node_count());
  for (std::size_t v = 0; v < graph.node_count(); ++v) group_of_node_sg[v] = dag.group_of[v];
  auto sg_of = [&](ElementId id) { return group_of_node_sg[*graph.index_of(id)]; };

  std::vector<bool> forced(inst.groups.size(), false);
  std::vector<bool> accepted;
  for (;;) {
    accepted.assign(n_groups, false);
    std::vector<std::int64_t> used(capacities.size(), 0);
    std::vector<bool> failed(inst.groups.size(), false);

    for (std::size_t s : visit) {
      const bool blocked = std::any_of(touches[s].begin(), touches[s].end(),
                                       [&](std::size_t g) { return forced[g]; });
      if (blocked) {
        for (std::size_t g : touches[s]) failed[g] = true;
        continue;
      }

      bool ok = std::all_of(dag.edges[s].begin(), dag.edges[s].end(),
                            [&](std::size_t dep) { return accepted[dep]; });
      for (auto it = dag.groups[s].members.begin(); ok && it != dag.groups[s].members.end();
           ++it) {
        auto ex = excluded_with.find(*it);
        if (ex == excluded_with.end()) continue;
        for (ElementId other : ex->second) {
          const std::size_t os = sg_of(other);
          if (os == s || accepted[os]) {
            ok = false;
            break;
          }
        }
      }
      for (std::size_t k = 0; ok && k < capacities.size(); ++k) {
        if (used[k] + usage[s][k] > capacities[k]->bound) ok = false;
      }

      if (ok) {
        accepted[s] = true;
        for (std::size_t k = 0; k < capacities.size(); ++k) used[k] += usage[s][k];
      } else {
        for (std::size_t g : touches[s]) failed[g] = true;
      }
    }

    bool changed = false;
    for (std::size_t g = 0; g < inst.groups.size(); ++g) {
      if (failed[g] && !forced[g] && rejects_whole_group(inst.groups[g].rule)) {
        forced[g] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }

  Partition p;
  for (std::size_t s = 0; s < n_groups; ++s) {
    auto& side = accepted[s] ? p.accepted : p.rejected;
    side.insert(side.end(), dag.groups[s].members.begin(), dag.groups[s].members.end());
  }
  std::sort(p.accepted.begin(), p.accepted.end());
  std::sort(p.rejected.begin(), p.rejected.end());
  p.aggregate = aggregate(p.accepted, inst.elements);
  p.violations = check_feasibility(p, inst);
  if (!p.violations.empty()) {
    throw std::logic_error("select_partition produced an infeasible partition: " +
                           p.violations.front().message);
  }
  return p;
}

}  // namespace settlesim
