#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "imds/compile.hpp"
#include "imds/errors.hpp"
#include "imds/expand.hpp"
#include "imds/lts.hpp"
#include "imds/parser.hpp"
#include "imds/pipeline.hpp"
#include "imds/route_io.hpp"
#include "imds/routes.hpp"
#include "imds/validate.hpp"

namespace py = pybind11;

namespace {

using imds::routes::EnvGraph;
using imds::routes::RoutePlan;

imds::routes::RoutePlan single_plan(const EnvGraph& g, const std::string& plan_text) {
  std::vector<RoutePlan> plans = imds::routes::load_plans(g, plan_text);
  if (plans.size() != 1)
    throw imds::Error("expected exactly one robot, found " + std::to_string(plans.size()));
  return plans.front();
}

py::dict run_check(const std::string& spec_text, const std::string& name, std::uint64_t limit,
                   const std::vector<std::string>& terminate, const std::string& fmt) {
  imds::RunConfig cfg;
  cfg.input = name;
  cfg.node_limit = limit;
  cfg.terminate = terminate;
  if (fmt == "json")
    cfg.json = true;
  else if (fmt != "text")
    throw imds::Error("format must be text or json, got " + fmt);
  imds::RunResult r = imds::run_check_on_text(cfg, spec_text);
  py::dict out;
  out["exit_code"] = r.exit_code;
  out["diagnostics"] = r.diagnostics;
  if (cfg.json && !r.report.empty())
    out["report"] = py::module_::import("json").attr("loads")(r.report);
  else
    out["report"] = r.report;
  return out;
}

std::string compile_routes(const std::string& topology_text,
                           const std::vector<std::string>& plan_texts) {
  EnvGraph g = imds::routes::load_env_graph(topology_text);
  std::vector<RoutePlan> plans;
  for (const std::string& text : plan_texts)
    for (RoutePlan& p : imds::routes::load_plans(g, text)) plans.push_back(std::move(p));
  return imds::routes::compile_to_imds(g, plans);
}

std::string generate_all(const std::string& topology_text, const std::string& start) {
  EnvGraph g = imds::routes::load_env_graph(topology_text);
  int c = g.id(start);
  if (c < 0) throw imds::Error("unknown chamber " + start);
  return imds::routes::save_plans(g, imds::routes::generate_all_behaviors(g, c));
}

std::string generate_similar(const std::string& topology_text, const std::string& plan_text,
                             const std::string& to) {
  EnvGraph g = imds::routes::load_env_graph(topology_text);
  int c = g.id(to);
  if (c < 0) throw imds::Error("unknown chamber " + to);
  RoutePlan p = imds::routes::generate_similar_behavior(g, single_plan(g, plan_text), c);
  return imds::routes::save_plans(g, {p});
}

std::string generate_fleet(const std::string& topology_text, const std::string& plan_text,
                           std::size_t n) {
  EnvGraph g = imds::routes::load_env_graph(topology_text);
  return imds::routes::save_plans(g, imds::routes::generate_identical_fleet(single_plan(g, plan_text), n));
}

std::string canonical_text(const std::string& spec_text) {
  imds::lang::ParseResult parsed = imds::lang::parse_spec(spec_text);
  if (!parsed.spec) throw imds::Error(parsed.diagnostics.to_string());
  return imds::lang::pretty_print(*parsed.spec);
}

py::dict lts_stats(const std::string& spec_text, std::uint64_t limit) {
  imds::lang::ParseResult parsed = imds::lang::parse_spec(spec_text);
  if (!parsed.spec) throw imds::Error(parsed.diagnostics.to_string());
  imds::lang::ExpandResult expanded = imds::lang::expand_spec(*parsed.spec);
  if (!expanded.system) throw imds::Error(expanded.diagnostics.to_string());
  imds::Diagnostics vd = imds::validate_spec(*expanded.system);
  if (!vd.ok()) throw imds::Error(vd.to_string());
  imds::Lts lts = imds::build_lts(*expanded.system, limit);
  py::dict out;
  out["agents"] = expanded.system->agent_names;
  out["servers"] = expanded.system->servers.size();
  out["ground_actions"] = expanded.system->actions.size();
  out["nodes"] = lts.nodes.size();
  out["edges"] = lts.edges.size();
  std::size_t sinks = 0;
  for (imds::NodeId n = 0; n < static_cast<imds::NodeId>(lts.nodes.size()); ++n)
    if (lts.is_sink(n)) sinks++;
  out["sinks"] = sinks;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "verifier for server/agent message-passing systems";
  py::register_exception<imds::Error>(m, "ImdsError");

  m.def("check", &run_check, py::arg("spec_text"), py::arg("name") = "<input>",
        py::arg("limit") = imds::kDefaultNodeLimit,
        py::arg("terminate") = std::vector<std::string>{}, py::arg("format") = "json",
        "Run all checks on a specification; returns exit_code, diagnostics and report.");
  m.def("compile_routes", &compile_routes, py::arg("topology_text"), py::arg("plan_texts"),
        "Compile route plans over a chamber topology into a specification.");
  m.def("generate_all", &generate_all, py::arg("topology_text"), py::arg("start"),
        "Plan text for every behavior starting at the given chamber.");
  m.def("generate_similar", &generate_similar, py::arg("topology_text"), py::arg("plan_text"),
        py::arg("to"), "Map a behavior onto another start chamber by graph symmetry.");
  m.def("generate_fleet", &generate_fleet, py::arg("topology_text"), py::arg("plan_text"),
        py::arg("n"), "Duplicate a single-robot plan for a fleet of n robots.");
  m.def("render", &imds::render_witness_file, py::arg("witness_json"), py::arg("spec_text"),
        py::arg("spec_name") = "<input>",
        "Render every witness in a JSON report as a sequence diagram.");
  m.def("canonicalize", &canonical_text, py::arg("spec_text"),
        "Parse a specification and print it back in canonical form.");
  m.def("lts_stats", &lts_stats, py::arg("spec_text"),
        py::arg("limit") = imds::kDefaultNodeLimit,
        "Sizes of the reachable transition system of a specification.");
  m.def("quadrant_topology", [] { return imds::routes::save_env_graph(imds::routes::quadrant_topology()); },
        "Topology text of the built-in four-quadrant chamber layout.");
}
