#pragma once

#include <cstdint>
#include <vector>

#include "imds/system_spec.hpp"

namespace imds {

/// Global state of the system: one local state per server instance plus, for
/// every agent, either its single pending message or a terminated marker.
/// Pending and terminated partition the agents by construction.
struct Configuration {
  struct Slot {
    ServerId server = -1;   // -1 marks a terminated agent
    ServiceId service = -1;

    friend bool operator==(const Slot&, const Slot&) = default;
  };

  std::vector<StateId> states;  // indexed by ServerId
  std::vector<Slot> pending;    // indexed by AgentId

  bool terminated(AgentId a) const { return pending[a].server < 0; }
  bool all_terminated() const {
    for (const Slot& s : pending)
      if (s.server >= 0) return false;
    return true;
  }
  Message message(AgentId a) const {
    return Message{a, pending[a].server, pending[a].service};
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    for (StateId q : c.states) mix(static_cast<std::uint32_t>(q));
    for (const Configuration::Slot& s : c.pending) {
      mix(static_cast<std::uint32_t>(s.server));
      mix(static_cast<std::uint32_t>(s.service));
    }
    return static_cast<std::size_t>(h);
  }
};

/// Configuration described by the init block.
Configuration initial_configuration(const SystemSpec& sys);

/// Ids of the actions executable in c, in canonical order: ascending agent,
/// then ascending action id. An empty result marks a sink.
std::vector<ActionId> enabled_actions(const SystemSpec& sys, const Configuration& c);

/// Successor configuration. The action must be enabled in c; calling with a
/// disabled action is a programming error and throws std::logic_error.
Configuration apply_action(const SystemSpec& sys, const Configuration& c, ActionId id);

}  // namespace imds
