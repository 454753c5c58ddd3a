#include "imds/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "imds/config.hpp"
#include "imds/diagram.hpp"
#include "imds/errors.hpp"
#include "imds/expand.hpp"
#include "imds/parser.hpp"
#include "imds/report.hpp"
#include "imds/validate.hpp"
#include "imds/verify.hpp"

namespace imds {

namespace {

std::optional<std::string> read_file(const std::string& path, std::string& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err = "cannot open " + path;
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult tool_error(std::string message) {
  RunResult r;
  r.exit_code = 2;
  r.diagnostics = std::move(message);
  if (!r.diagnostics.empty() && r.diagnostics.back() != '\n') r.diagnostics += '\n';
  return r;
}

struct Checked {
  SystemSpec sys;
  Diagnostics warnings;
};

/// Front half of the pipeline; returns nullopt with a filled tool-error
/// result when the spec does not make it to a ground system.
std::optional<Checked> ground(const std::string& text, const std::string& name, RunResult& bad) {
  lang::ParseResult parsed = lang::parse_spec(text);
  if (!parsed.spec) {
    bad = tool_error(parsed.diagnostics.to_string(name));
    return std::nullopt;
  }
  lang::ExpandResult expanded = lang::expand_spec(*parsed.spec);
  if (!expanded.system) {
    bad = tool_error(expanded.diagnostics.to_string(name));
    return std::nullopt;
  }
  Diagnostics vd = validate_spec(*expanded.system);
  if (!vd.ok()) {
    bad = tool_error(vd.to_string(name));
    return std::nullopt;
  }
  return Checked{std::move(*expanded.system), std::move(vd)};
}

}  // namespace

RunResult run_check_on_text(const RunConfig& cfg, const std::string& spec_text) {
  RunResult bad;
  std::optional<Checked> checked = ground(spec_text, cfg.input, bad);
  if (!checked) return bad;
  const SystemSpec& sys = checked->sys;

  TerminationPredicate pred;
  for (const std::string& name : cfg.terminate) {
    AgentId a = sys.agent_id(name);
    if (a < 0) return tool_error(cfg.input + ": unknown agent " + name);
    pred.subset.push_back(a);
  }

  Lts lts;
  try {
    lts = build_lts(sys, cfg.node_limit);
  } catch (const StateSpaceExceeded& e) {
    return tool_error(cfg.input + ": " + e.what());
  }

  std::vector<Verdict> verdicts;
  verdicts.push_back(check_total_deadlock(sys, lts));
  verdicts.push_back(check_partial_deadlock(sys, lts));
  verdicts.push_back(check_deadlock_free_ctl(sys, lts));
  if (!pred.subset.empty()) verdicts.push_back(check_termination(sys, lts, pred));

  RunResult r;
  for (const Verdict& v : verdicts) {
    bool violated = v.property == Property::TerminationInevitable ? !v.holds
                    : v.property == Property::DeadlockFreeCtl     ? false
                                                                  : v.holds;
    if (violated) r.exit_code = 1;
  }

  if (cfg.json) {
    Json j;
    j["report"] = "imdsverify-check";
    j["version"] = 1;
    j["spec"] = cfg.input;
    j["agents"] = sys.agent_names;
    j["servers"] = sys.servers.size();
    j["ground_actions"] = sys.actions.size();
    Json warn = Json::array();
    for (const Diagnostic& d : checked->warnings.items) warn.push_back(d.message);
    j["warnings"] = std::move(warn);
    j["lts"] = {{"nodes", lts.nodes.size()},
                {"edges", lts.edges.size()},
                {"frontier_peak", lts.frontier_peak}};
    Json props = Json::array();
    for (const Verdict& v : verdicts) props.push_back(verdict_to_json(sys, lts, v));
    j["properties"] = std::move(props);
    j["exit_code"] = r.exit_code;
    r.report = j.dump(2) + "\n";
  } else {
    std::string& out = r.report;
    out += "imdsverify check report v1\n";
    out += "spec: " + cfg.input + "\n";
    out += "agents: " + std::to_string(sys.agent_names.size()) +
           "  servers: " + std::to_string(sys.servers.size()) +
           "  ground actions: " + std::to_string(sys.actions.size()) + "\n";
    for (const Diagnostic& d : checked->warnings.items) out += "warning: " + d.message + "\n";
    out += "lts: " + std::to_string(lts.nodes.size()) + " nodes, " +
           std::to_string(lts.edges.size()) + " edges\n";
    for (const Verdict& v : verdicts) {
      out += "\n";
      verdict_to_text(sys, lts, v, out);
    }
  }

  if (!checked->warnings.items.empty())
    r.diagnostics = checked->warnings.to_string(cfg.input);
  return r;
}

RunResult run_check(const RunConfig& cfg) {
  std::string err;
  std::optional<std::string> text = read_file(cfg.input, err);
  if (!text) return tool_error(err);
  RunResult r = run_check_on_text(cfg, *text);
  if (!r.report.empty() && !cfg.report_path.empty()) {
    std::ofstream out(cfg.report_path, std::ios::binary);
    if (!out) return tool_error("cannot write " + cfg.report_path);
    out << r.report;
  }
  return r;
}

std::string render_witness_file(const std::string& witness_json, const std::string& spec_text,
                                const std::string& spec_name) {
  RunResult bad;
  std::optional<Checked> checked = ground(spec_text, spec_name, bad);
  if (!checked) throw InvalidTrace(bad.diagnostics);
  const SystemSpec& sys = checked->sys;

  Json root;
  try {
    root = Json::parse(witness_json);
  } catch (const Json::parse_error& e) {
    throw InvalidTrace(std::string("witness file is not valid JSON: ") + e.what());
  }

  std::string out;
  int count = 0;
  auto render_one = [&](const Json& w, const std::string& label) {
    ResolvedTrace trace = trace_from_json(sys, w);
    out += "== " + label + " ==\n";
    if (!trace.blocked_agents.empty()) {
      out += "blocked:";
      for (const std::string& a : trace.blocked_agents) out += " " + a;
      out += "\n";
    }
    out += render_sequence_diagram(make_sequence_diagram(sys, trace));
    count++;
  };

  auto render_verdict = [&](const Json& v) {
    std::string prop = v.value("property", "witness");
    int n = 0;
    for (const Json& w : v.at("witnesses"))
      render_one(w, prop + " witness " + std::to_string(++n));
  };

  if (root.is_object() && root.contains("properties")) {
    for (const Json& v : root["properties"])
      if (v.contains("witnesses")) render_verdict(v);
  } else if (root.is_object() && root.contains("witnesses")) {
    render_verdict(root);
  } else if (root.is_object() && root.contains("steps")) {
    render_one(root, "witness");
  } else {
    throw InvalidTrace("witness file holds no report, verdict, or witness object");
  }
  if (count == 0) out += "no witnesses to render\n";
  return out;
}

}  // namespace imds
