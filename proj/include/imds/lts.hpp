#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "imds/config.hpp"
#include "imds/errors.hpp"
#include "imds/system_spec.hpp"

namespace imds {

using NodeId = std::int32_t;

constexpr std::uint64_t kDefaultNodeLimit = 5'000'000;

/// Labelled transition system over reachable configurations. Nodes are in
/// breadth-first discovery order; node 0 is the initial configuration. Edges
/// are grouped by source node, in canonical action order.
struct Lts {
  struct Edge {
    NodeId from = -1;
    NodeId to = -1;
    ActionId action = -1;
  };

  std::vector<Configuration> nodes;
  std::vector<Edge> edges;
  std::vector<std::uint64_t> first_edge;  // nodes.size()+1 offsets into edges
  std::uint64_t frontier_peak = 0;
  bool complete = true;

  NodeId initial() const { return 0; }
  std::size_t out_degree(NodeId n) const { return first_edge[n + 1] - first_edge[n]; }
  bool is_sink(NodeId n) const { return out_degree(n) == 0; }

  /// Edge span of a node as [begin, end) indexes into edges.
  std::pair<std::uint64_t, std::uint64_t> out_edges(NodeId n) const {
    return {first_edge[n], first_edge[n + 1]};
  }
};

/// Breadth-first exhaustive exploration from the initial configuration with
/// hash-based deduplication. Throws StateSpaceExceeded when more than
/// node_limit configurations are discovered.
Lts build_lts(const SystemSpec& sys, std::uint64_t node_limit = kDefaultNodeLimit);

/// Plain-text dump, one "node" line per configuration followed by one "edge"
/// line per transition; byte-stable across runs.
void dump_lts(const SystemSpec& sys, const Lts& lts, std::ostream& os);

}  // namespace imds
