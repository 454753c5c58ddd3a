#include "imds/report.hpp"

#include <string>

#include "imds/config.hpp"
#include "imds/errors.hpp"

namespace imds {

namespace {

Json step_to_json(const SystemSpec& sys, ActionId id) {
  const SystemSpec::GroundAction& a = sys.actions[id];
  Json j;
  j["agent"] = sys.agent_names[a.in_msg.agent];
  j["server"] = sys.servers[a.in_msg.server].name;
  j["service"] = sys.service_name(a.in_msg.server, a.in_msg.service);
  j["from_state"] = sys.state_name(a.in_msg.server, a.in_state);
  j["to_state"] = sys.state_name(a.in_msg.server, a.out_state);
  j["terminating"] = a.terminating;
  if (a.out_msg) {
    j["emit_server"] = sys.servers[a.out_msg->server].name;
    j["emit_service"] = sys.service_name(a.out_msg->server, a.out_msg->service);
  }
  return j;
}

void step_to_text(const SystemSpec& sys, ActionId id, int index, std::string& out) {
  const SystemSpec::GroundAction& a = sys.actions[id];
  out += "  " + std::to_string(index) + ". " + sys.agent_names[a.in_msg.agent] + " " +
         sys.servers[a.in_msg.server].name + "." +
         sys.service_name(a.in_msg.server, a.in_msg.service) + " " +
         sys.state_name(a.in_msg.server, a.in_state) + " -> " +
         sys.state_name(a.in_msg.server, a.out_state);
  if (a.out_msg)
    out += ", emits " + sys.servers[a.out_msg->server].name + "." +
           sys.service_name(a.out_msg->server, a.out_msg->service);
  else
    out += ", terminates";
  out += "\n";
}

std::string kind_name(Counterexample::Kind k) {
  return k == Counterexample::Kind::Lasso ? "lasso" : "finite-path";
}

}  // namespace

ResolvedTrace resolve_counterexample(const Counterexample& ce, const SystemSpec& sys) {
  ResolvedTrace t;
  t.kind = ce.kind;
  for (const CeStep& s : ce.prefix) t.prefix.push_back(s.action);
  for (const CeStep& s : ce.cycle) t.cycle.push_back(s.action);
  for (AgentId a : agents_in(ce.blocked_agents)) t.blocked_agents.push_back(sys.agent_names[a]);
  return t;
}

Json counterexample_to_json(const SystemSpec& sys, const Lts& lts, const Counterexample& ce) {
  (void)lts;
  Json j;
  j["kind"] = kind_name(ce.kind);
  j["node"] = ce.terminal;
  if (ce.blocked_agents) {
    Json blocked = Json::array();
    for (AgentId a : agents_in(ce.blocked_agents)) blocked.push_back(sys.agent_names[a]);
    j["blocked_agents"] = std::move(blocked);
    j["degenerate_total"] = ce.degenerate_total;
  }
  if (ce.classification) j["classification"] = classification_name(*ce.classification);
  Json steps = Json::array();
  for (const CeStep& s : ce.prefix) steps.push_back(step_to_json(sys, s.action));
  j["steps"] = std::move(steps);
  if (ce.kind == Counterexample::Kind::Lasso) {
    Json cycle = Json::array();
    for (const CeStep& s : ce.cycle) cycle.push_back(step_to_json(sys, s.action));
    j["cycle"] = std::move(cycle);
  }
  return j;
}

Json verdict_to_json(const SystemSpec& sys, const Lts& lts, const Verdict& v) {
  Json j;
  j["property"] = property_name(v.property);
  j["holds"] = v.holds;
  j["summary"] = {{"nodes", v.summary.nodes},
                  {"sinks", v.summary.sinks},
                  {"deadlock_sinks", v.summary.deadlock_sinks},
                  {"termination_sinks", v.summary.termination_sinks},
                  {"blocked_sets", v.summary.blocked_sets}};
  Json ws = Json::array();
  for (const Counterexample& ce : v.witnesses) ws.push_back(counterexample_to_json(sys, lts, ce));
  j["witnesses"] = std::move(ws);
  return j;
}

void verdict_to_text(const SystemSpec& sys, const Lts& lts, const Verdict& v,
                     std::string& out) {
  (void)lts;
  out += "property: ";
  out += property_name(v.property);
  out += "\nholds: ";
  out += v.holds ? "true" : "false";
  out += "\nsinks: " + std::to_string(v.summary.sinks) + " (deadlock " +
         std::to_string(v.summary.deadlock_sinks) + ", termination " +
         std::to_string(v.summary.termination_sinks) + ")\n";
  if (v.property == Property::PartialDeadlock)
    out += "blocked sets: " + std::to_string(v.summary.blocked_sets) + "\n";
  int n = 0;
  for (const Counterexample& ce : v.witnesses) {
    out += "witness " + std::to_string(++n) + ": " + kind_name(ce.kind) + " to node " +
           std::to_string(ce.terminal);
    if (ce.blocked_agents) {
      out += "; blocked";
      for (AgentId a : agents_in(ce.blocked_agents)) out += " " + sys.agent_names[a];
      if (ce.degenerate_total) out += " (all non-terminated agents)";
    }
    if (ce.classification) {
      out += "; classification ";
      out += classification_name(*ce.classification);
    }
    out += "\n";
    int index = 0;
    for (const CeStep& s : ce.prefix) step_to_text(sys, s.action, ++index, out);
    if (ce.kind == Counterexample::Kind::Lasso) {
      out += "  -- cycle --\n";
      for (const CeStep& s : ce.cycle) step_to_text(sys, s.action, ++index, out);
      out += "  -- cycle repeats --\n";
    }
  }
}

namespace {

ActionId resolve_step(const SystemSpec& sys, const Configuration& cfg, const Json& step,
                      int index) {
  auto fail = [index](const std::string& what) {
    throw InvalidTrace("step " + std::to_string(index) + ": " + what);
  };
  if (!step.is_object()) fail("not an object");
  for (const char* key : {"agent", "server", "service", "from_state", "to_state"})
    if (!step.contains(key) || !step[key].is_string()) fail(std::string(key) + " missing");

  AgentId agent = sys.agent_id(step["agent"]);
  if (agent < 0) fail("unknown agent " + step["agent"].get<std::string>());
  ServerId server = sys.server_id(step["server"]);
  if (server < 0) fail("unknown server " + step["server"].get<std::string>());
  ServiceId service = sys.service_id(server, step["service"]);
  if (service < 0) fail("unknown service " + step["service"].get<std::string>());
  StateId from = sys.state_id(server, step["from_state"]);
  if (from < 0) fail("unknown state " + step["from_state"].get<std::string>());
  StateId to = sys.state_id(server, step["to_state"]);
  if (to < 0) fail("unknown state " + step["to_state"].get<std::string>());

  for (ActionId id : sys.actions_for(Message{agent, server, service})) {
    const SystemSpec::GroundAction& a = sys.actions[id];
    if (a.in_state != from || a.out_state != to) continue;
    if (step.contains("terminating") && step["terminating"].get<bool>() != a.terminating)
      continue;
    if (step.contains("emit_server")) {
      if (!a.out_msg) continue;
      if (sys.servers[a.out_msg->server].name != step["emit_server"]) continue;
      if (step.contains("emit_service") &&
          sys.service_name(a.out_msg->server, a.out_msg->service) != step["emit_service"])
        continue;
    }
    if (cfg.states[server] != from) fail("server is not in state " + step["from_state"].get<std::string>());
    if (cfg.terminated(agent) || !(cfg.message(agent) == Message{agent, server, service}))
      fail("message is not pending for " + step["agent"].get<std::string>());
    return id;
  }
  fail("no matching ground action");
  return -1;
}

}  // namespace

ResolvedTrace trace_from_json(const SystemSpec& sys, const Json& witness) {
  if (!witness.is_object() || !witness.contains("steps") || !witness["steps"].is_array())
    throw InvalidTrace("witness is not an object with a steps array");
  ResolvedTrace t;
  std::string kind = witness.value("kind", "finite-path");
  if (kind == "lasso")
    t.kind = Counterexample::Kind::Lasso;
  else if (kind == "finite-path")
    t.kind = Counterexample::Kind::FinitePath;
  else
    throw InvalidTrace("unknown witness kind " + kind);
  if (witness.contains("blocked_agents")) {
    for (const Json& name : witness["blocked_agents"]) {
      if (!name.is_string() || sys.agent_id(name) < 0)
        throw InvalidTrace("unknown blocked agent in witness");
      t.blocked_agents.push_back(name);
    }
  }

  Configuration cfg = initial_configuration(sys);
  int index = 0;
  for (const Json& step : witness["steps"]) {
    ActionId id = resolve_step(sys, cfg, step, ++index);
    cfg = apply_action(sys, cfg, id);
    t.prefix.push_back(id);
  }
  if (t.kind == Counterexample::Kind::Lasso) {
    if (!witness.contains("cycle") || !witness["cycle"].is_array() || witness["cycle"].empty())
      throw InvalidTrace("lasso witness without a cycle");
    Configuration at_entry = cfg;
    for (const Json& step : witness["cycle"]) {
      ActionId id = resolve_step(sys, cfg, step, ++index);
      cfg = apply_action(sys, cfg, id);
      t.cycle.push_back(id);
    }
    if (!(cfg == at_entry)) throw InvalidTrace("cycle does not return to its entry state");
  }
  return t;
}

}  // namespace imds
