#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "imds/errors.hpp"

// Chamber topologies and robot route plans. A route plan is a directed graph
// of moves between chambers; generation utilities produce plans from a
// topology and partition them into terminating sub-routes.

namespace imds::routes {

inline constexpr int kUnboundedCapacity = -1;

struct Chamber {
  std::string name;
  int capacity = 1;   // kUnboundedCapacity for no limit
  bool side = false;  // stored classification: unbounded chambers are side
};

/// Undirected chamber graph. Doors are stored as normalized (low id, high id)
/// pairs. Construct through make_graph, which validates connectivity.
struct EnvGraph {
  std::vector<Chamber> chambers;
  std::vector<std::pair<int, int>> doors;
  std::vector<std::vector<int>> adj;  // neighbor ids sorted by chamber name

  int id(const std::string& name) const;
  const Chamber& chamber(int c) const { return chambers[c]; }
  bool is_door(int a, int b) const;
};

/// Builds and validates a graph. Throws Error on duplicate chambers, door
/// endpoints that are not declared, self-loop doors, non-positive finite
/// capacities, or a disconnected graph.
EnvGraph make_graph(std::vector<Chamber> chambers,
                    const std::vector<std::pair<std::string, std::string>>& doors);

/// The four-quadrant arena: side chambers AW, AN, AE, AS (unbounded), central
/// chambers QNW, QNE, QSW, QSE (capacity 1) forming a ring, each central
/// chamber opening to its two adjacent side chambers.
EnvGraph quadrant_topology();

struct RoutePlan {
  std::string robot;
  int start = -1;
  std::vector<std::pair<int, int>> steps;  // directed moves, no duplicates
  std::vector<int> ends;         // possible stopping chambers; empty when cyclic
  std::vector<int> terminators;  // ends that emit a terminating action
  bool cyclic = false;
};

/// Builds a plan from a chamber name sequence. A cyclic plan closes the loop
/// from the last chamber back to the first; a terminating plan marks the last
/// chamber as a terminator. Throws Error on unknown chambers or missing doors.
RoutePlan linear_plan(const EnvGraph& g, std::string robot,
                      const std::vector<std::string>& chambers, bool cyclic,
                      bool terminating);

/// Checks plan invariants against the graph: steps are doors, acyclic plans
/// have no directed cycle and at least one end, ends have no outgoing step,
/// terminators are ends. Throws Error on violation.
void check_plan(const EnvGraph& g, const RoutePlan& plan);

/// Outgoing moves of a chamber within a plan, sorted by target chamber name.
std::vector<int> plan_branches(const EnvGraph& g, const RoutePlan& plan, int chamber);

/// Reconstructs the chamber sequence of a linear plan (every chamber has at
/// most one outgoing move). Cyclic plans yield the loop without repeating the
/// start. Returns nullopt for branching plans.
std::optional<std::vector<int>> linear_path(const RoutePlan& plan);

/// The same route rotated so that it starts from the given chamber. Requires
/// the quadrant topology (UnsupportedTopology otherwise); the start must be
/// reachable from the plan's start by a quarter-turn rotation (NoAutomorphism
/// otherwise).
RoutePlan generate_similar_behavior(const EnvGraph& g, const RoutePlan& plan, int start);

/// n copies of the plan for robots named by appending 1..n to the plan's
/// robot name.
std::vector<RoutePlan> generate_identical_fleet(const RoutePlan& plan, int n);

/// All simple paths from start that end at a side chamber, as terminating
/// acyclic plans, in depth-first lexicographic order of chamber names.
/// Robots are named R1, R2, ... in output order.
std::vector<RoutePlan> generate_all_behaviors(const EnvGraph& g, int start);

/// One branching plan holding the union of all simple paths from start to any
/// target that avoid the forbidden directed steps. Interior chambers of the
/// paths are restricted to capacity-bounded chambers, so side chambers appear
/// only as start or targets. The branch taken is left to run-time
/// nondeterminism. Throws NoRouteExists when no path survives.
RoutePlan generate_many_behaviors(const EnvGraph& g, const std::string& robot, int start,
                                  const std::vector<int>& targets,
                                  const std::set<std::pair<int, int>>& forbidden);

struct SubRoute {
  std::string parent;         // robot name of the plan it was cut from
  std::vector<int> chambers;  // linear, no repeats; the last chamber terminates
  bool starts_at_side = false;
  bool ends_at_side = false;
};

enum class ComposeMode { Identical, Similar };

/// Concatenates linear fragments into one plan. Consecutive fragments must
/// share an endpoint (DiscontinuousFragments otherwise). In Similar mode each
/// fragment is first rotated, the initial one onto the given start chamber
/// and every later one onto the current route end. A route that closes back
/// on its start becomes cyclic; a terminating flag marks the final chamber
/// otherwise.
RoutePlan compose_subroutes(const EnvGraph& g, const std::vector<RoutePlan>& parts,
                            ComposeMode mode, int similar_start = -1,
                            bool terminating = true);

enum class PartitionKind { SideAnchored, CycleBreak };

struct PartitionMethod {
  PartitionKind kind = PartitionKind::SideAnchored;
  int break_chamber = -1;  // CycleBreak only
};

/// Cuts a linear plan into sub-routes. SideAnchored splits at every side
/// chamber visit; a cyclic plan whose loop never touches a side chamber
/// raises UnanchorableCycle. CycleBreak splits at side visits and at the
/// designated chamber, then extends any fragment that starts or ends at a
/// capacity-bounded chamber with the shortest path to the nearest side
/// chamber, avoiding chambers the fragment already holds.
std::vector<SubRoute> partition_route(const EnvGraph& g, const RoutePlan& plan,
                                      const PartitionMethod& method);

/// A sub-route as a standalone terminating plan for per-stage verification.
RoutePlan subroute_to_plan(const EnvGraph& g, const SubRoute& sub);

}  // namespace imds::routes
