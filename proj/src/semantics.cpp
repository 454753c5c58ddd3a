#include <stdexcept>

#include "imds/config.hpp"

namespace imds {

Configuration initial_configuration(const SystemSpec& sys) {
  Configuration c;
  c.states.reserve(sys.servers.size());
  for (const auto& inst : sys.servers) {
    if (inst.initial_state < 0)
      throw std::logic_error("server " + inst.name + " has no initial state; validate first");
    c.states.push_back(inst.initial_state);
  }
  c.pending.resize(sys.agent_names.size());
  std::vector<bool> seen(sys.agent_names.size(), false);
  for (const Message& m : sys.initial_messages) {
    if (seen[m.agent])
      throw std::logic_error("agent " + sys.agent_names[m.agent] +
                             " has several initial messages; validate first");
    seen[m.agent] = true;
    c.pending[m.agent] = Configuration::Slot{m.server, m.service};
  }
  for (std::size_t a = 0; a < seen.size(); ++a) {
    if (!seen[a])
      throw std::logic_error("agent " + sys.agent_names[a] +
                             " has no initial message; validate first");
  }
  return c;
}

std::vector<ActionId> enabled_actions(const SystemSpec& sys, const Configuration& c) {
  std::vector<ActionId> out;
  for (AgentId a = 0; a < static_cast<AgentId>(c.pending.size()); ++a) {
    if (c.terminated(a)) continue;
    for (ActionId id : sys.actions_for(c.message(a))) {
      if (sys.actions[id].in_state == c.states[sys.actions[id].server()]) out.push_back(id);
    }
  }
  return out;
}

Configuration apply_action(const SystemSpec& sys, const Configuration& c, ActionId id) {
  const SystemSpec::GroundAction& act = sys.actions[id];
  const AgentId agent = act.in_msg.agent;
  if (c.terminated(agent) || !(c.message(agent) == act.in_msg) ||
      c.states[act.server()] != act.in_state)
    throw std::logic_error("apply_action: action " + std::to_string(id) + " is not enabled");
  Configuration next = c;
  next.states[act.server()] = act.out_state;
  if (act.terminating)
    next.pending[agent] = Configuration::Slot{};  // agent leaves the system
  else
    next.pending[agent] = Configuration::Slot{act.out_msg->server, act.out_msg->service};
  return next;
}

}  // namespace imds
