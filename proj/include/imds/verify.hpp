#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imds/lts.hpp"
#include "imds/system_spec.hpp"

namespace imds {

// Agent sets are bitmasks. Expansion caps the number of agents at 64.
using AgentSet = std::uint64_t;

inline AgentSet agent_bit(AgentId a) { return AgentSet{1} << a; }
std::vector<AgentId> agents_in(AgentSet set);

struct TerminationPredicate {
  std::vector<AgentId> subset;
};

enum class Property {
  TotalDeadlock,
  PartialDeadlock,
  TerminationInevitable,
  DeadlockFreeCtl,
};

enum class Classification { Communication, Resource, Mixed };

const char* property_name(Property p);
const char* classification_name(Classification c);

// One step of a counterexample: the action taken from that node.
struct CeStep {
  NodeId node;
  ActionId action;
};

struct Counterexample {
  enum class Kind { FinitePath, Lasso };
  Kind kind = Kind::FinitePath;
  std::vector<CeStep> prefix;  // from the initial node to terminal
  NodeId terminal = 0;
  std::vector<CeStep> cycle;  // lasso only; starts at terminal and returns to it
  AgentSet blocked_agents = 0;
  bool degenerate_total = false;
  std::optional<Classification> classification;
};

struct VerdictSummary {
  std::size_t nodes = 0;
  std::size_t sinks = 0;
  std::size_t deadlock_sinks = 0;
  std::size_t termination_sinks = 0;
  std::size_t blocked_sets = 0;
};

struct Verdict {
  Property property;
  bool holds = false;
  std::vector<Counterexample> witnesses;
  VerdictSummary summary;
};

// live_agents per node: the agents that still execute at least one action
// somewhere in the node's forward-reachable subgraph.
std::vector<AgentSet> progress_labels(const SystemSpec& sys, const Lts& lts);

Verdict check_total_deadlock(const SystemSpec& sys, const Lts& lts);
Verdict check_partial_deadlock(const SystemSpec& sys, const Lts& lts);
Verdict check_termination(const SystemSpec& sys, const Lts& lts,
                          const TerminationPredicate& pred);
Verdict check_deadlock_free_ctl(const SystemSpec& sys, const Lts& lts);

Classification classify_deadlock(const SystemSpec& sys, const Lts& lts,
                                 const Counterexample& witness);

// Shortest path from the initial node (empty when target is initial).
Counterexample extract_trace(const Lts& lts, NodeId target);

// Replays a counterexample through apply_action and checks it against the
// graph. Throws Error on any mismatch; every check runs this before returning.
void validate_counterexample(const SystemSpec& sys, const Lts& lts,
                             const Counterexample& ce);

}  // namespace imds
