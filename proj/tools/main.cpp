#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "imds/compile.hpp"
#include "imds/errors.hpp"
#include "imds/pipeline.hpp"
#include "imds/route_io.hpp"
#include "imds/routes.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw imds::Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw imds::Error("cannot write " + path);
  out << text;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    spill(out_path, text);
}

int do_check(const imds::RunConfig& cfg) {
  imds::RunResult r = imds::run_check(cfg);
  if (!r.diagnostics.empty()) std::cerr << r.diagnostics;
  std::cout << r.report;
  return r.exit_code;
}

int do_compile(const std::string& topo_path, const std::vector<std::string>& plan_paths,
               const std::string& out_path) {
  imds::routes::EnvGraph g = imds::routes::load_env_graph(slurp(topo_path));
  std::vector<imds::routes::RoutePlan> plans;
  for (const std::string& p : plan_paths)
    for (imds::routes::RoutePlan& plan : imds::routes::load_plans(g, slurp(p)))
      plans.push_back(std::move(plan));
  spill(out_path, imds::routes::compile_to_imds(g, plans));
  return 0;
}

int do_generate(const std::string& topo_path, bool all, const std::string& start,
                const std::string& similar_path, const std::string& to,
                const std::vector<std::string>& fleet, const std::string& out_path) {
  using namespace imds::routes;
  EnvGraph g = load_env_graph(slurp(topo_path));
  auto chamber = [&](const std::string& name) {
    int id = g.id(name);
    if (id < 0) throw imds::Error("unknown chamber " + name);
    return id;
  };
  auto single_plan = [&](const std::string& path) {
    std::vector<RoutePlan> plans = load_plans(g, slurp(path));
    if (plans.size() != 1)
      throw imds::Error(path + ": expected exactly one robot, found " +
                        std::to_string(plans.size()));
    return plans.front();
  };

  std::vector<RoutePlan> out;
  if (all) {
    if (start.empty()) throw imds::Error("--all needs --start");
    out = generate_all_behaviors(g, chamber(start));
  } else if (!similar_path.empty()) {
    if (to.empty()) throw imds::Error("--similar needs --to");
    out.push_back(generate_similar_behavior(g, single_plan(similar_path), chamber(to)));
  } else if (!fleet.empty()) {
    std::size_t n = 0;
    try {
      std::size_t pos = 0;
      n = std::stoul(fleet[1], &pos);
      if (pos != fleet[1].size()) throw std::invalid_argument(fleet[1]);
    } catch (const std::exception&) {
      throw imds::Error("--fleet count must be a number, got " + fleet[1]);
    }
    out = generate_identical_fleet(single_plan(fleet[0]), n);
  } else {
    throw imds::Error("generate needs one of --all, --similar, --fleet");
  }
  emit(out_path, save_plans(g, out));
  return 0;
}

int do_render(const std::string& witness_path, const std::string& spec_path) {
  std::cout << imds::render_witness_file(slurp(witness_path), slurp(spec_path), spec_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit-state verifier for server/agent message-passing systems"};
  app.require_subcommand(1);

  imds::RunConfig cfg;
  CLI::App* check = app.add_subcommand("check", "verify deadlock and termination properties");
  check->add_option("spec", cfg.input, "system specification file")->required();
  check->add_option("--limit", cfg.node_limit, "node limit for state exploration");
  check->add_option("--terminate", cfg.terminate, "agents whose joint termination must be inevitable")
      ->delimiter(',');
  check->add_option("--report", cfg.report_path, "also write the report to this file");
  check->add_flag("--json", cfg.json, "emit the report as JSON");

  std::string topo_path, out_path;
  std::vector<std::string> plan_paths;
  CLI::App* compile = app.add_subcommand("compile", "compile robot route plans to a specification");
  compile->add_option("topology", topo_path, "chamber topology file")->required();
  compile->add_option("plans", plan_paths, "route plan files")->required();
  compile->add_option("-o,--output", out_path, "output specification file")->required();

  bool all = false;
  std::string start, similar_path, to;
  std::vector<std::string> fleet;
  CLI::App* generate = app.add_subcommand("generate", "generate route plans over a topology");
  generate->add_option("topology", topo_path, "chamber topology file")->required();
  generate->add_option("--start", start, "start chamber for --all");
  generate->add_flag("--all", all, "every behavior from the start chamber");
  generate->add_option("--similar", similar_path, "plan file to map onto another start chamber");
  generate->add_option("--to", to, "target start chamber for --similar");
  generate->add_option("--fleet", fleet, "plan file and copy count")->expected(2);
  generate->add_option("-o,--output", out_path, "output plan file (default stdout)");

  std::string witness_path, spec_path;
  CLI::App* render = app.add_subcommand("render", "render witnesses as sequence diagrams");
  render->add_option("witness", witness_path, "JSON report or witness file")->required();
  render->add_option("spec", spec_path, "system specification file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return do_check(cfg);
    if (*compile) return do_compile(topo_path, plan_paths, out_path);
    if (*generate) return do_generate(topo_path, all, start, similar_path, to, fleet, out_path);
    if (*render) return do_render(witness_path, spec_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
