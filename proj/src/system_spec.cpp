#include "imds/system_spec.hpp"

#include <algorithm>

namespace imds {

AgentId SystemSpec::agent_id(const std::string& name) const {
  auto it = agent_index_.find(name);
  return it == agent_index_.end() ? -1 : it->second;
}

ServerId SystemSpec::server_id(const std::string& name) const {
  auto it = server_index_.find(name);
  return it == server_index_.end() ? -1 : it->second;
}

ServiceId SystemSpec::service_id(ServerId s, const std::string& name) const {
  const auto& names = servers[s].service_names;
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<ServiceId>(it - names.begin());
}

StateId SystemSpec::state_id(ServerId s, const std::string& name) const {
  const auto& names = servers[s].state_names;
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<StateId>(it - names.begin());
}

const std::vector<ActionId>& SystemSpec::actions_for(const Message& m) const {
  static const std::vector<ActionId> empty;
  auto it = by_message_.find(message_key(m));
  return it == by_message_.end() ? empty : it->second;
}

void SystemSpec::finalize() {
  agent_index_.clear();
  server_index_.clear();
  by_message_.clear();
  for (std::size_t i = 0; i < agent_names.size(); ++i)
    agent_index_[agent_names[i]] = static_cast<AgentId>(i);
  for (std::size_t i = 0; i < servers.size(); ++i)
    server_index_[servers[i].name] = static_cast<ServerId>(i);
  for (std::size_t i = 0; i < actions.size(); ++i)
    by_message_[message_key(actions[i].in_msg)].push_back(static_cast<ActionId>(i));
  for (auto& [key, ids] : by_message_) std::sort(ids.begin(), ids.end());
}

}  // namespace imds
