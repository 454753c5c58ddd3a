#pragma once

#include <string>
#include <vector>

#include "imds/routes.hpp"

namespace imds::routes {

/// Compiles route plans over a topology into specification source text.
///
/// Every chamber a plan touches becomes a server. A move cur -> next runs the
/// three-message handoff: the robot's try_cur pends at next until next can
/// accept, next reserves itself and answers ok_next to cur, cur releases the
/// robot and sends take to next, which the robot then occupies. Capacity-1
/// chambers cycle through free/res/occ; other chambers count present plus
/// reserved robots in states n0..nK. A robot with several alternatives at its
/// current chamber receives a consumed busy reply from a full target and
/// re-tries any branch; a robot without alternatives simply waits. Terminator
/// chambers consume the final take in a terminating action, leaving the
/// robot parked.
///
/// Throws NameCollision for duplicate robot names, CompileError for plans
/// that cannot be realized (ends that never terminate, more starting robots
/// than a chamber admits), and CapacityUnderflow if occupancy bookkeeping
/// would go negative (internal guard).
std::string compile_to_imds(const EnvGraph& g, const std::vector<RoutePlan>& plans);

}  // namespace imds::routes
