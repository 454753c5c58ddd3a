#include "imds/verify.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "imds/errors.hpp"

namespace imds {

namespace {

void require_complete(const Lts& lts) {
  if (!lts.complete) throw TruncatedLts();
}

AgentSet non_terminated(const Configuration& c) {
  AgentSet set = 0;
  for (AgentId a = 0; a < static_cast<AgentId>(c.pending.size()); ++a)
    if (!c.terminated(a)) set |= agent_bit(a);
  return set;
}

// Distance of every node from the initial node.
std::vector<std::int32_t> forward_dists(const Lts& lts) {
  std::vector<std::int32_t> d(lts.nodes.size(), -1);
  std::deque<NodeId> queue{lts.initial()};
  d[lts.initial()] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    auto [lo, hi] = lts.out_edges(u);
    for (std::uint64_t e = lo; e < hi; ++e) {
      NodeId v = lts.edges[e].to;
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return d;
}

struct ReverseAdjacency {
  std::vector<std::uint64_t> first;  // nodes.size()+1 offsets
  std::vector<std::uint64_t> edge;   // indexes into lts.edges, grouped by target
};

ReverseAdjacency reverse_adjacency(const Lts& lts) {
  ReverseAdjacency r;
  r.first.assign(lts.nodes.size() + 1, 0);
  for (const Lts::Edge& e : lts.edges) r.first[e.to + 1]++;
  for (std::size_t n = 1; n < r.first.size(); ++n) r.first[n] += r.first[n - 1];
  r.edge.resize(lts.edges.size());
  std::vector<std::uint64_t> cursor(r.first.begin(), r.first.end() - 1);
  for (std::uint64_t i = 0; i < lts.edges.size(); ++i)
    r.edge[cursor[lts.edges[i].to]++] = i;
  return r;
}

// Distance of every node to the target, -1 where the target is unreachable.
// An admit mask of component ids restricts the walk to one component.
std::vector<std::int32_t> dists_to(const Lts& lts, const ReverseAdjacency& radj,
                                   NodeId target,
                                   const std::vector<std::int32_t>* comp = nullptr) {
  std::vector<std::int32_t> d(lts.nodes.size(), -1);
  std::deque<NodeId> queue{target};
  d[target] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (std::uint64_t i = radj.first[u]; i < radj.first[u + 1]; ++i) {
      NodeId v = lts.edges[radj.edge[i]].from;
      if (d[v] >= 0) continue;
      if (comp && (*comp)[v] != (*comp)[target]) continue;
      d[v] = d[u] + 1;
      queue.push_back(v);
    }
  }
  return d;
}

// Witness paths are shortest, with ties broken towards the smallest ground
// action id at every step. Walking forward and always taking the least edge
// that still decreases the distance to the target realizes exactly that.
Counterexample lex_least_path(const Lts& lts, NodeId target) {
  ReverseAdjacency radj = reverse_adjacency(lts);
  std::vector<std::int32_t> d = dists_to(lts, radj, target);
  if (d[lts.initial()] < 0)
    throw UnreachableTarget("node " + std::to_string(target) +
                            " is not reachable from the initial node");
  Counterexample ce;
  ce.kind = Counterexample::Kind::FinitePath;
  ce.terminal = target;
  NodeId u = lts.initial();
  while (u != target) {
    auto [lo, hi] = lts.out_edges(u);
    std::uint64_t best = hi;
    for (std::uint64_t e = lo; e < hi; ++e) {
      NodeId v = lts.edges[e].to;
      if (d[v] != d[u] - 1) continue;
      if (best == hi || lts.edges[e].action < lts.edges[best].action) best = e;
    }
    ce.prefix.push_back({u, lts.edges[best].action});
    u = lts.edges[best].to;
  }
  return ce;
}

std::vector<char> reachable_from(const Lts& lts, NodeId start) {
  std::vector<char> seen(lts.nodes.size(), 0);
  std::vector<NodeId> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    auto [lo, hi] = lts.out_edges(u);
    for (std::uint64_t e = lo; e < hi; ++e) {
      NodeId v = lts.edges[e].to;
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Iterative Tarjan. Components are numbered in emission order, which puts
// every component after the components it can reach, so a single pass over
// component ids 0,1,2,... accumulates from successors.
struct SccResult {
  std::vector<std::int32_t> comp;
  std::int32_t count = 0;
};

SccResult tarjan(const Lts& lts) {
  const std::size_t n = lts.nodes.size();
  SccResult r;
  r.comp.assign(n, -1);
  std::vector<std::int32_t> disc(n, -1), low(n, 0);
  std::vector<NodeId> stack;
  std::vector<char> on_stack(n, 0);
  struct Frame {
    NodeId v;
    std::uint64_t edge;
  };
  std::vector<Frame> frames;
  std::int32_t time = 0;
  for (NodeId root = 0; root < static_cast<NodeId>(n); ++root) {
    if (disc[root] >= 0) continue;
    frames.push_back({root, lts.first_edge[root]});
    disc[root] = low[root] = time++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < lts.first_edge[f.v + 1]) {
        NodeId w = lts.edges[f.edge++].to;
        if (disc[w] < 0) {
          disc[w] = low[w] = time++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, lts.first_edge[w]});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        NodeId v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == disc[v]) {
          NodeId w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            r.comp[w] = r.count;
          } while (w != v);
          r.count++;
        }
      }
    }
  }
  return r;
}

AgentId acting_agent(const SystemSpec& sys, ActionId id) {
  return sys.actions[id].in_msg.agent;
}

}  // namespace

std::vector<AgentId> agents_in(AgentSet set) {
  std::vector<AgentId> out;
  for (AgentId a = 0; a < 64; ++a)
    if (set & agent_bit(a)) out.push_back(a);
  return out;
}

const char* property_name(Property p) {
  switch (p) {
    case Property::TotalDeadlock: return "total-deadlock";
    case Property::PartialDeadlock: return "partial-deadlock";
    case Property::TerminationInevitable: return "termination-inevitable";
    case Property::DeadlockFreeCtl: return "deadlock-free-ctl";
  }
  return "?";
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Communication: return "communication";
    case Classification::Resource: return "resource";
    case Classification::Mixed: return "mixed";
  }
  return "?";
}

std::vector<AgentSet> progress_labels(const SystemSpec& sys, const Lts& lts) {
  SccResult scc = tarjan(lts);
  std::vector<std::vector<NodeId>> members(scc.count);
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n)
    members[scc.comp[n]].push_back(n);
  std::vector<AgentSet> live(scc.count, 0);
  for (std::int32_t c = 0; c < scc.count; ++c) {
    for (NodeId u : members[c]) {
      auto [lo, hi] = lts.out_edges(u);
      for (std::uint64_t e = lo; e < hi; ++e) {
        live[c] |= agent_bit(acting_agent(sys, lts.edges[e].action));
        std::int32_t cv = scc.comp[lts.edges[e].to];
        if (cv != c) live[c] |= live[cv];
      }
    }
  }
  std::vector<AgentSet> labels(lts.nodes.size());
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n)
    labels[n] = live[scc.comp[n]];
  return labels;
}

Verdict check_total_deadlock(const SystemSpec& sys, const Lts& lts) {
  require_complete(lts);
  Verdict v{Property::TotalDeadlock};
  v.summary.nodes = lts.nodes.size();
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n) {
    if (!lts.is_sink(n)) continue;
    v.summary.sinks++;
    AgentSet stuck = non_terminated(lts.nodes[n]);
    if (stuck == 0) {
      v.summary.termination_sinks++;
      continue;
    }
    v.summary.deadlock_sinks++;
    Counterexample ce = lex_least_path(lts, n);
    ce.blocked_agents = stuck;
    ce.classification = classify_deadlock(sys, lts, ce);
    validate_counterexample(sys, lts, ce);
    v.witnesses.push_back(std::move(ce));
  }
  v.holds = v.summary.deadlock_sinks > 0;
  return v;
}

namespace {

void count_sinks(const Lts& lts, VerdictSummary& s) {
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n) {
    if (!lts.is_sink(n)) continue;
    s.sinks++;
    if (non_terminated(lts.nodes[n]))
      s.deadlock_sinks++;
    else
      s.termination_sinks++;
  }
}

}  // namespace

Verdict check_partial_deadlock(const SystemSpec& sys, const Lts& lts) {
  require_complete(lts);
  Verdict v{Property::PartialDeadlock};
  v.summary.nodes = lts.nodes.size();
  count_sinks(lts, v.summary);
  std::vector<AgentSet> labels = progress_labels(sys, lts);
  // Node ids are in breadth-first order, so the first node showing a given
  // blocked set is also a closest one.
  std::map<AgentSet, NodeId> first_seen;
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n) {
    AgentSet blocked = non_terminated(lts.nodes[n]) & ~labels[n];
    if (blocked) first_seen.try_emplace(blocked, n);
  }
  v.summary.blocked_sets = first_seen.size();
  v.holds = !first_seen.empty();
  std::vector<std::pair<NodeId, AgentSet>> order;
  for (auto& [set, node] : first_seen) order.emplace_back(node, set);
  std::sort(order.begin(), order.end());
  for (auto& [node, set] : order) {
    Counterexample ce = lex_least_path(lts, node);
    ce.blocked_agents = set;
    ce.degenerate_total = set == non_terminated(lts.nodes[node]);
    ce.classification = classify_deadlock(sys, lts, ce);
    validate_counterexample(sys, lts, ce);
    v.witnesses.push_back(std::move(ce));
  }
  return v;
}

Verdict check_termination(const SystemSpec& sys, const Lts& lts,
                          const TerminationPredicate& pred) {
  require_complete(lts);
  if (pred.subset.empty()) throw Error("termination predicate needs a non-empty agent subset");
  for (AgentId a : pred.subset)
    if (a < 0 || a >= static_cast<AgentId>(sys.agent_names.size()))
      throw Error("termination predicate names unknown agent id " + std::to_string(a));

  Verdict v{Property::TerminationInevitable};
  v.summary.nodes = lts.nodes.size();
  count_sinks(lts, v.summary);

  auto phi = [&](NodeId n) {
    for (AgentId a : pred.subset)
      if (!lts.nodes[n].terminated(a)) return false;
    return true;
  };

  // Terminated sets only grow along edges, so any path into an uncovered node
  // is uncovered throughout and whole components are uniform with respect to
  // the predicate. Reachability needs no explicit restriction.
  std::vector<std::int32_t> dist = forward_dists(lts);

  // A finite counterexample: an uncovered sink, taken over a lasso when both
  // exist.
  NodeId best_sink = -1;
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n)
    if (lts.is_sink(n) && !phi(n) && (best_sink < 0 || dist[n] < dist[best_sink]))
      best_sink = n;
  if (best_sink >= 0) {
    Counterexample ce = lex_least_path(lts, best_sink);
    validate_counterexample(sys, lts, ce);
    v.witnesses.push_back(std::move(ce));
    v.holds = false;
    return v;
  }

  // Otherwise look for a cycle among the uncovered nodes.
  SccResult scc = tarjan(lts);
  std::vector<char> cyclic(scc.count, 0);
  std::vector<std::int32_t> size(scc.count, 0);
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n) size[scc.comp[n]]++;
  for (const Lts::Edge& e : lts.edges)
    if (e.from == e.to) cyclic[scc.comp[e.from]] = 1;
  for (std::int32_t c = 0; c < scc.count; ++c)
    if (size[c] > 1) cyclic[c] = 1;

  NodeId entry = -1;
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n)
    if (!phi(n) && cyclic[scc.comp[n]] && (entry < 0 || dist[n] < dist[entry]))
      entry = n;
  if (entry < 0) {
    v.holds = true;
    return v;
  }

  // Shortest cycle through the entry node inside its component, smallest
  // action ids first on ties.
  ReverseAdjacency radj = reverse_adjacency(lts);
  std::vector<std::int32_t> back = dists_to(lts, radj, entry, &scc.comp);
  std::int32_t best_len = -1;
  {
    auto [lo, hi] = lts.out_edges(entry);
    for (std::uint64_t e = lo; e < hi; ++e) {
      NodeId w = lts.edges[e].to;
      if (scc.comp[w] != scc.comp[entry] || back[w] < 0) continue;
      if (best_len < 0 || back[w] + 1 < best_len) best_len = back[w] + 1;
    }
  }
  if (best_len < 0) throw Error("internal error: cyclic component lost its cycle");

  Counterexample ce = lex_least_path(lts, entry);
  ce.kind = Counterexample::Kind::Lasso;
  NodeId u = entry;
  for (std::int32_t remaining = best_len; remaining > 0; --remaining) {
    auto [lo, hi] = lts.out_edges(u);
    std::uint64_t best = hi;
    for (std::uint64_t e = lo; e < hi; ++e) {
      NodeId w = lts.edges[e].to;
      if (scc.comp[w] != scc.comp[entry] || back[w] != remaining - 1) continue;
      if (best == hi || lts.edges[e].action < lts.edges[best].action) best = e;
    }
    ce.cycle.push_back({u, lts.edges[best].action});
    u = lts.edges[best].to;
  }
  validate_counterexample(sys, lts, ce);
  v.witnesses.push_back(std::move(ce));
  v.holds = false;
  return v;
}

Verdict check_deadlock_free_ctl(const SystemSpec& sys, const Lts& lts) {
  require_complete(lts);
  Verdict v{Property::DeadlockFreeCtl};
  v.summary.nodes = lts.nodes.size();
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n) {
    if (!lts.is_sink(n)) continue;
    v.summary.sinks++;
    if (non_terminated(lts.nodes[n]) == 0)
      v.summary.termination_sinks++;
    else
      v.summary.deadlock_sinks++;
    Counterexample ce = lex_least_path(lts, n);
    validate_counterexample(sys, lts, ce);
    v.witnesses.push_back(std::move(ce));
  }
  v.holds = v.summary.sinks == 0;
  return v;
}

Classification classify_deadlock(const SystemSpec& sys, const Lts& lts,
                                 const Counterexample& witness) {
  if (witness.kind != Counterexample::Kind::FinitePath)
    throw NotADeadlockWitness("deadlock witnesses are finite paths");
  if (witness.terminal < 0 || witness.terminal >= static_cast<NodeId>(lts.nodes.size()))
    throw NotADeadlockWitness("witness node is not in the graph");
  if (witness.blocked_agents == 0)
    throw NotADeadlockWitness("witness carries no blocked agents");

  // Tagging rule, one tag per blocked agent. The agent waits on a resource
  // when the server it posted to still moves somewhere past the witness node,
  // or when some action would consume its message in a state the server no
  // longer reaches. A server that can never consume the message and never
  // moves again starves the agent on communication. This is an approximation
  // of the usual resource/communication split; the distinction has no single
  // agreed definition.
  std::vector<char> region = reachable_from(lts, witness.terminal);
  const Configuration& at = lts.nodes[witness.terminal];

  auto state_changes = [&](ServerId s) {
    for (NodeId u = 0; u < static_cast<NodeId>(lts.nodes.size()); ++u) {
      if (!region[u]) continue;
      auto [lo, hi] = lts.out_edges(u);
      for (std::uint64_t e = lo; e < hi; ++e)
        if (lts.nodes[u].states[s] != lts.nodes[lts.edges[e].to].states[s]) return true;
    }
    return false;
  };

  bool any_resource = false, any_communication = false;
  for (AgentId a : agents_in(witness.blocked_agents)) {
    if (at.terminated(a))
      throw NotADeadlockWitness("agent " + sys.agent_names[a] +
                                " is terminated at the witness node");
    Message m = at.message(a);
    bool has_consumer = !sys.actions_for(m).empty();
    if (has_consumer || state_changes(m.server))
      any_resource = true;
    else
      any_communication = true;
  }
  if (any_resource && any_communication) return Classification::Mixed;
  return any_resource ? Classification::Resource : Classification::Communication;
}

Counterexample extract_trace(const Lts& lts, NodeId target) {
  if (target < 0 || target >= static_cast<NodeId>(lts.nodes.size()))
    throw UnreachableTarget("node " + std::to_string(target) + " is not in the graph");
  return lex_least_path(lts, target);
}

void validate_counterexample(const SystemSpec& sys, const Lts& lts,
                             const Counterexample& ce) {
  auto fail = [](const std::string& what) {
    throw Error("internal error: counterexample failed validation: " + what);
  };
  Configuration cfg = initial_configuration(sys);
  auto step_through = [&](const std::vector<CeStep>& steps) {
    for (const CeStep& s : steps) {
      if (s.node < 0 || s.node >= static_cast<NodeId>(lts.nodes.size()))
        fail("step node out of range");
      if (!(cfg == lts.nodes[s.node])) fail("step node does not match the replayed state");
      try {
        cfg = apply_action(sys, cfg, s.action);
      } catch (const std::logic_error&) {
        fail("step action is not enabled");
      }
    }
  };
  if (!ce.prefix.empty() && ce.prefix.front().node != lts.initial())
    fail("prefix does not start at the initial node");
  step_through(ce.prefix);
  if (!(cfg == lts.nodes[ce.terminal])) fail("prefix does not end at the witness node");
  if (ce.kind == Counterexample::Kind::Lasso) {
    if (ce.cycle.empty()) fail("lasso without a cycle");
    if (ce.cycle.front().node != ce.terminal) fail("cycle does not start at the witness node");
    step_through(ce.cycle);
    if (!(cfg == lts.nodes[ce.terminal])) fail("cycle does not close");
  } else if (!ce.cycle.empty()) {
    fail("finite path carries a cycle");
  }
}

}  // namespace imds
