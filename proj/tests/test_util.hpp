#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "doctest.h"

#include "imds/expand.hpp"
#include "imds/lts.hpp"
#include "imds/parser.hpp"
#include "imds/validate.hpp"
#include "imds/verify.hpp"

#ifndef IMDS_CORPUS_DIR
#error "IMDS_CORPUS_DIR must point at the corpus directory"
#endif

namespace testutil {

inline std::string corpus_path(const std::string& rel) {
  return std::string(IMDS_CORPUS_DIR) + "/" + rel;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Parse + expand + validate, requiring a clean spec.
inline imds::SystemSpec load_system(const std::string& text) {
  imds::lang::ParseResult parsed = imds::lang::parse_spec(text);
  REQUIRE_MESSAGE(parsed.spec.has_value(), parsed.diagnostics.to_string());
  imds::lang::ExpandResult ex = imds::lang::expand_spec(*parsed.spec);
  REQUIRE_MESSAGE(ex.system.has_value(), ex.diagnostics.to_string());
  imds::Diagnostics val = imds::validate_spec(*ex.system);
  REQUIRE_MESSAGE(val.ok(), val.to_string());
  return *ex.system;
}

inline imds::SystemSpec load_corpus_system(const std::string& rel) {
  return load_system(slurp(corpus_path(rel)));
}

/// Spec files the oracle-equivalence suites sweep over. Kept to systems whose
/// graphs stay small enough for the naive oracles.
inline std::vector<std::string> small_corpus() {
  return {"corridor_two_robots.imds", "comm_starved.imds",     "golden/rotated_hops.imds",
          "golden/triangles.imds", "golden/crossing.imds", "golden/solo_hop.imds",
          "golden/fleet_pair.imds",     "golden/cap2_pair.imds"};
}

/// Every compiled scenario in the corpus, with its topology file.
inline std::vector<std::pair<std::string, std::string>> compiled_corpus() {
  return {{"golden/rotated_hops.imds", "quadrant.topo"},
          {"golden/triangles.imds", "quadrant.topo"},
          {"golden/crossing.imds", "quadrant.topo"},
          {"golden/patrol_finisher.imds", "quadrant.topo"},
          {"golden/restricted.imds", "quadrant.topo"},
          {"golden/collide.imds", "quadrant.topo"},
          {"golden/solo_hop.imds", "quadrant.topo"},
          {"golden/fleet_pair.imds", "quadrant.topo"},
          {"golden/patrol_cycle.imds", "quadrant.topo"},
          {"golden/cap2_pair.imds", "cap2_line.topo"}};
}

/// Reachability oracle: plain worklist enumeration that scans the whole
/// action table per agent instead of going through enabled_actions.
struct NaiveGraph {
  std::unordered_map<imds::Configuration, int, imds::ConfigurationHash> ids;
  std::vector<imds::Configuration> nodes;
  std::set<std::tuple<int, imds::ActionId, int>> edges;
};

inline imds::Configuration naive_apply(const imds::Configuration& c,
                                       const imds::SystemSpec::GroundAction& a) {
  imds::Configuration next = c;
  next.states[a.in_msg.server] = a.out_state;
  if (a.out_msg)
    next.pending[a.in_msg.agent] = {a.out_msg->server, a.out_msg->service};
  else
    next.pending[a.in_msg.agent] = {-1, -1};
  return next;
}

inline NaiveGraph naive_reach(const imds::SystemSpec& sys) {
  NaiveGraph g;
  auto intern = [&](const imds::Configuration& c) {
    auto [it, fresh] = g.ids.emplace(c, static_cast<int>(g.nodes.size()));
    if (fresh) g.nodes.push_back(c);
    return it->second;
  };
  std::vector<int> work{intern(imds::initial_configuration(sys))};
  while (!work.empty()) {
    int u = work.back();
    work.pop_back();
    imds::Configuration c = g.nodes[u];
    for (imds::ActionId id = 0; id < static_cast<imds::ActionId>(sys.actions.size()); ++id) {
      const imds::SystemSpec::GroundAction& a = sys.actions[id];
      imds::AgentId ag = a.in_msg.agent;
      if (c.terminated(ag)) continue;
      if (!(c.message(ag) == a.in_msg)) continue;
      if (c.states[a.in_msg.server] != a.in_state) continue;
      std::size_t before = g.nodes.size();
      int v = intern(naive_apply(c, a));
      if (g.nodes.size() > before) work.push_back(v);
      g.edges.emplace(u, id, v);
    }
  }
  return g;
}

/// Per-node live agents by brute force: walk the forward-reachable subgraph
/// of every node and collect the acting agents of its edges.
inline std::vector<imds::AgentSet> brute_live(const imds::SystemSpec& sys,
                                              const imds::Lts& lts) {
  std::vector<imds::AgentSet> out(lts.nodes.size(), 0);
  std::vector<char> seen(lts.nodes.size());
  std::vector<imds::NodeId> stack;
  for (imds::NodeId n = 0; n < static_cast<imds::NodeId>(lts.nodes.size()); ++n) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, n);
    seen[n] = 1;
    imds::AgentSet live = 0;
    while (!stack.empty()) {
      imds::NodeId u = stack.back();
      stack.pop_back();
      auto [lo, hi] = lts.out_edges(u);
      for (std::uint64_t e = lo; e < hi; ++e) {
        live |= imds::agent_bit(sys.actions[lts.edges[e].action].in_msg.agent);
        imds::NodeId v = lts.edges[e].to;
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    out[n] = live;
  }
  return out;
}

}  // namespace testutil
