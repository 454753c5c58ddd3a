#include "imds/lts.hpp"

#include <deque>
#include <ostream>
#include <unordered_map>

namespace imds {

Lts build_lts(const SystemSpec& sys, std::uint64_t node_limit) {
  Lts lts;
  std::unordered_map<Configuration, NodeId, ConfigurationHash> index;
  std::deque<NodeId> queue;

  Configuration init = initial_configuration(sys);
  index.emplace(init, 0);
  lts.nodes.push_back(std::move(init));
  queue.push_back(0);

  auto lookup = [&](Configuration&& c) -> NodeId {
    auto it = index.find(c);
    if (it != index.end()) return it->second;
    if (lts.nodes.size() >= node_limit)
      throw StateSpaceExceeded(node_limit, lts.nodes.size(), queue.size());
    NodeId id = static_cast<NodeId>(lts.nodes.size());
    index.emplace(c, id);
    lts.nodes.push_back(std::move(c));
    queue.push_back(id);
    return id;
  };

  lts.first_edge.push_back(0);
  while (!queue.empty()) {
    lts.frontier_peak = std::max<std::uint64_t>(lts.frontier_peak, queue.size());
    NodeId n = queue.front();
    queue.pop_front();
    // nodes are processed in discovery order, so edges stay grouped by source
    for (ActionId a : enabled_actions(sys, lts.nodes[n])) {
      NodeId to = lookup(apply_action(sys, lts.nodes[n], a));
      lts.edges.push_back({n, to, a});
    }
    lts.first_edge.push_back(lts.edges.size());
  }
  return lts;
}

void dump_lts(const SystemSpec& sys, const Lts& lts, std::ostream& os) {
  for (NodeId n = 0; n < static_cast<NodeId>(lts.nodes.size()); ++n) {
    const Configuration& c = lts.nodes[n];
    os << "node " << n << ":";
    for (ServerId s = 0; s < static_cast<ServerId>(c.states.size()); ++s)
      os << ' ' << sys.servers[s].name << '=' << sys.state_name(s, c.states[s]);
    os << "; pending";
    bool any = false;
    for (AgentId a = 0; a < static_cast<AgentId>(c.pending.size()); ++a) {
      if (c.terminated(a)) continue;
      any = true;
      os << ' ' << sys.agent_names[a] << '=' << sys.servers[c.pending[a].server].name << '.'
         << sys.service_name(c.pending[a].server, c.pending[a].service);
    }
    if (!any) os << " none";
    os << "; terminated";
    any = false;
    for (AgentId a = 0; a < static_cast<AgentId>(c.pending.size()); ++a) {
      if (!c.terminated(a)) continue;
      any = true;
      os << ' ' << sys.agent_names[a];
    }
    if (!any) os << " none";
    os << '\n';
  }
  for (const Lts::Edge& e : lts.edges) {
    os << "edge " << e.from << ' ' << e.to << ' ' << sys.describe(sys.actions[e.action].in_msg)
       << '\n';
  }
}

}  // namespace imds
