#pragma once

#include <string>
#include <vector>

#include "imds/routes.hpp"

namespace imds::routes {

/// Parses topology text. One declaration per line, `#` starts a comment:
///   chamber <name> capacity <n|inf>
///   door <a> <b>
/// Throws Error with a line number on malformed lines, duplicate chambers or
/// doors, and undeclared door endpoints; connectivity errors carry no line.
EnvGraph load_env_graph(const std::string& text);

std::string save_env_graph(const EnvGraph& g);

/// Parses route plan text against a topology. Each robot is a block:
///   robot <name> start <chamber>
///   step <from> <to>
///   end <chamber>
/// `end` lines name the chambers where the robot stops and terminates; a
/// block without any becomes a cyclic route. Plans are validated with
/// check_plan before being returned.
std::vector<RoutePlan> load_plans(const EnvGraph& g, const std::string& text);

/// Writes plans in the load_plans format. Non-terminating end chambers are
/// not representable and raise Error.
std::string save_plans(const EnvGraph& g, const std::vector<RoutePlan>& plans);

}  // namespace imds::routes
