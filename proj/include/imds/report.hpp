#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "imds/lts.hpp"
#include "imds/system_spec.hpp"
#include "imds/verify.hpp"

namespace imds {

using Json = nlohmann::ordered_json;

// A counterexample with its actions spelled out by name, detached from any
// particular graph. This is what witness files round-trip through.
struct ResolvedTrace {
  Counterexample::Kind kind = Counterexample::Kind::FinitePath;
  std::vector<ActionId> prefix;
  std::vector<ActionId> cycle;
  std::vector<std::string> blocked_agents;
};

ResolvedTrace resolve_counterexample(const Counterexample& ce, const SystemSpec& sys);

Json counterexample_to_json(const SystemSpec& sys, const Lts& lts, const Counterexample& ce);
Json verdict_to_json(const SystemSpec& sys, const Lts& lts, const Verdict& v);

void verdict_to_text(const SystemSpec& sys, const Lts& lts, const Verdict& v,
                     std::string& out);

// Rebuilds a trace from a witness object by matching each step's names
// against the system's ground actions. Throws InvalidTrace when a step does
// not resolve or does not replay.
ResolvedTrace trace_from_json(const SystemSpec& sys, const Json& witness);

}  // namespace imds
