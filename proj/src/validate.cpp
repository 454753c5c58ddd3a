#include "imds/validate.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace imds {

Diagnostics validate_spec(const SystemSpec& sys) {
  Diagnostics d;

  auto service_ref = [&](const Message& m) {
    return sys.service_name(m.server, m.service) + " of " + sys.servers[m.server].name;
  };

  // Undeclared references. Expansion interns unknown names at the end of the
  // name tables, so anything past the declared prefix is a dangling reference.
  for (const SystemSpec::GroundAction& a : sys.actions) {
    const auto& self = sys.servers[a.server()];
    if (static_cast<std::size_t>(a.in_msg.service) >= self.declared_services)
      d.error(0, 0, "action consumes undeclared service " + service_ref(a.in_msg));
    if (static_cast<std::size_t>(a.in_state) >= self.declared_states)
      d.error(0, 0, "action consumes undeclared state " + sys.state_name(a.server(), a.in_state) +
                        " of " + self.name);
    if (a.out_msg) {
      const auto& target = sys.servers[a.out_msg->server];
      if (static_cast<std::size_t>(a.out_msg->service) >= target.declared_services)
        d.error(0, 0, "action sends undeclared service " + service_ref(*a.out_msg));
    }
    if (static_cast<std::size_t>(a.out_state) >= self.declared_states)
      d.error(0, 0, "action produces undeclared state " +
                        sys.state_name(a.server(), a.out_state) + " of " + self.name);
  }
  for (const Message& m : sys.initial_messages) {
    if (static_cast<std::size_t>(m.service) >= sys.servers[m.server].declared_services)
      d.error(0, 0, "initial message uses undeclared service " + service_ref(m));
  }

  // Exactly one initial message per agent.
  std::vector<int> msg_count(sys.agent_names.size(), 0);
  for (const Message& m : sys.initial_messages) msg_count[m.agent] += 1;
  for (AgentId a = 0; a < static_cast<AgentId>(sys.agent_names.size()); ++a) {
    if (msg_count[a] == 0)
      d.error(0, 0, "agent " + sys.agent_names[a] + " has no initial message, expected 1");
    else if (msg_count[a] > 1)
      d.error(0, 0, "agent " + sys.agent_names[a] + " has " + std::to_string(msg_count[a]) +
                        " initial messages, expected 1");
  }

  // Exactly one initial state per server instance.
  for (const auto& inst : sys.servers) {
    if (inst.instantiation_count == 0)
      d.error(0, 0, "server " + inst.name + " has no initial state");
    else if (inst.instantiation_count > 1)
      d.error(0, 0, "server " + inst.name + " has " + std::to_string(inst.instantiation_count) +
                        " initial states, expected 1");
  }

  // Usage warnings. Indexed services often bind a single instance statically
  // (only SideCh[2] ever receives tryS[2]), so usage is pooled across the
  // instances of one definition before deciding a service or state is dead.
  struct DefUsage {
    ServerId representative = -1;
    std::vector<bool> sent, consumed, produced;
    bool any_initial = false;
  };
  std::map<std::string, DefUsage> by_def;
  for (ServerId s = 0; s < static_cast<ServerId>(sys.servers.size()); ++s) {
    const auto& inst = sys.servers[s];
    DefUsage& u = by_def[inst.def_name];
    if (u.representative < 0) {
      u.representative = s;
      u.sent.assign(inst.declared_services, false);
      u.consumed.assign(inst.declared_services, false);
      u.produced.assign(inst.declared_states, false);
    }
    if (inst.initial_state >= 0 &&
        static_cast<std::size_t>(inst.initial_state) < u.produced.size())
      u.produced[inst.initial_state] = true;
  }
  for (const SystemSpec::GroundAction& a : sys.actions) {
    if (a.out_msg) {
      DefUsage& u = by_def[sys.servers[a.out_msg->server].def_name];
      if (static_cast<std::size_t>(a.out_msg->service) < u.sent.size())
        u.sent[a.out_msg->service] = true;
    }
    DefUsage& u = by_def[sys.servers[a.server()].def_name];
    if (static_cast<std::size_t>(a.in_msg.service) < u.consumed.size())
      u.consumed[a.in_msg.service] = true;
    if (static_cast<std::size_t>(a.out_state) < u.produced.size())
      u.produced[a.out_state] = true;
  }
  for (const Message& m : sys.initial_messages) {
    DefUsage& u = by_def[sys.servers[m.server].def_name];
    if (static_cast<std::size_t>(m.service) < u.sent.size()) u.sent[m.service] = true;
  }
  for (const auto& [def_name, u] : by_def) {
    const auto& rep = sys.servers[u.representative];
    for (std::size_t v = 0; v < u.sent.size(); ++v) {
      if (!u.sent[v])
        d.warning(0, 0, "service " + rep.service_names[v] + " of " + def_name +
                            " is never sent");
      if (!u.consumed[v])
        d.warning(0, 0, "service " + rep.service_names[v] + " of " + def_name +
                            " is never consumed by any " + def_name + " action");
    }
    for (std::size_t q = 0; q < u.produced.size(); ++q) {
      if (!u.produced[q])
        d.warning(0, 0, "state " + rep.state_names[q] + " of " + def_name +
                            " is never produced and is not initial");
    }
  }

  // Termination reachability per agent: close the set of messages the agent
  // can ever carry, ignoring states, and look for a terminating action.
  for (AgentId a = 0; a < static_cast<AgentId>(sys.agent_names.size()); ++a) {
    std::set<std::pair<ServerId, ServiceId>> carried;
    std::vector<Message> frontier;
    for (const Message& m : sys.initial_messages) {
      if (m.agent == a && carried.emplace(m.server, m.service).second) frontier.push_back(m);
    }
    bool can_terminate = false;
    while (!frontier.empty() && !can_terminate) {
      Message m = frontier.back();
      frontier.pop_back();
      for (ActionId id : sys.actions_for(m)) {
        const auto& act = sys.actions[id];
        if (act.terminating) {
          can_terminate = true;
          break;
        }
        if (carried.emplace(act.out_msg->server, act.out_msg->service).second)
          frontier.push_back(*act.out_msg);
      }
    }
    if (!can_terminate && msg_count[a] > 0)
      d.warning(0, 0, "agent " + sys.agent_names[a] + " can never terminate");
  }

  return d;
}

}  // namespace imds
