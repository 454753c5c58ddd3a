#include "imds/route_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace imds::routes {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error("line " + std::to_string(line) + ": " + what);
}

/// Splits text into per-line token lists, dropping comments and blank lines.
std::vector<std::pair<int, std::vector<std::string>>> tokenize(const std::string& text) {
  std::vector<std::pair<int, std::vector<std::string>>> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tokens;
    std::string t;
    while (ls >> t) tokens.push_back(t);
    if (!tokens.empty()) out.emplace_back(line, std::move(tokens));
  }
  return out;
}

}  // namespace

EnvGraph load_env_graph(const std::string& text) {
  std::vector<Chamber> chambers;
  std::vector<std::pair<std::string, std::string>> doors;
  std::set<std::string> names;
  std::set<std::pair<std::string, std::string>> seen_doors;
  for (auto& [line, tok] : tokenize(text)) {
    if (tok[0] == "chamber") {
      if (tok.size() != 4 || tok[2] != "capacity")
        fail(line, "expected: chamber <name> capacity <n|inf>");
      if (!names.insert(tok[1]).second) fail(line, "chamber " + tok[1] + " declared twice");
      Chamber c;
      c.name = tok[1];
      if (tok[3] == "inf") {
        c.capacity = kUnboundedCapacity;
      } else {
        try {
          std::size_t used = 0;
          c.capacity = std::stoi(tok[3], &used);
          if (used != tok[3].size()) throw std::invalid_argument(tok[3]);
        } catch (const std::exception&) {
          fail(line, "capacity must be a positive integer or inf, got " + tok[3]);
        }
        if (c.capacity < 1) fail(line, "capacity must be at least 1");
      }
      chambers.push_back(std::move(c));
    } else if (tok[0] == "door") {
      if (tok.size() != 3) fail(line, "expected: door <a> <b>");
      if (!names.count(tok[1])) fail(line, "door references undeclared chamber " + tok[1]);
      if (!names.count(tok[2])) fail(line, "door references undeclared chamber " + tok[2]);
      if (tok[1] == tok[2]) fail(line, "door from " + tok[1] + " to itself");
      auto key = std::minmax(tok[1], tok[2]);
      if (!seen_doors.insert(key).second)
        fail(line, "door " + tok[1] + " " + tok[2] + " declared twice");
      doors.emplace_back(tok[1], tok[2]);
    } else {
      fail(line, "unknown directive " + tok[0]);
    }
  }
  return make_graph(std::move(chambers), doors);
}

std::string save_env_graph(const EnvGraph& g) {
  std::ostringstream out;
  for (const Chamber& c : g.chambers) {
    out << "chamber " << c.name << " capacity ";
    if (c.capacity == kUnboundedCapacity)
      out << "inf";
    else
      out << c.capacity;
    out << "\n";
  }
  for (auto [a, b] : g.doors)
    out << "door " << g.chamber(a).name << " " << g.chamber(b).name << "\n";
  return out.str();
}

std::vector<RoutePlan> load_plans(const EnvGraph& g, const std::string& text) {
  std::vector<RoutePlan> plans;
  std::set<std::string> robots;
  auto chamber = [&](int line, const std::string& name) {
    int c = g.id(name);
    if (c < 0) fail(line, "unknown chamber " + name);
    return c;
  };
  auto finish = [&](RoutePlan& plan) {
    plan.cyclic = plan.ends.empty();
    check_plan(g, plan);
    plans.push_back(std::move(plan));
  };
  RoutePlan current;
  bool open = false;
  for (auto& [line, tok] : tokenize(text)) {
    if (tok[0] == "robot") {
      if (tok.size() != 4 || tok[2] != "start")
        fail(line, "expected: robot <name> start <chamber>");
      if (open) finish(current);
      if (!robots.insert(tok[1]).second) fail(line, "robot " + tok[1] + " declared twice");
      current = RoutePlan{};
      current.robot = tok[1];
      current.start = chamber(line, tok[3]);
      open = true;
    } else if (tok[0] == "step") {
      if (tok.size() != 3) fail(line, "expected: step <from> <to>");
      if (!open) fail(line, "step before any robot declaration");
      auto move = std::make_pair(chamber(line, tok[1]), chamber(line, tok[2]));
      if (std::count(current.steps.begin(), current.steps.end(), move))
        fail(line, "duplicate step " + tok[1] + " " + tok[2]);
      current.steps.push_back(move);
    } else if (tok[0] == "end") {
      if (tok.size() != 2) fail(line, "expected: end <chamber>");
      if (!open) fail(line, "end before any robot declaration");
      int c = chamber(line, tok[1]);
      if (std::count(current.ends.begin(), current.ends.end(), c))
        fail(line, "duplicate end " + tok[1]);
      current.ends.push_back(c);
      current.terminators.push_back(c);
    } else {
      fail(line, "unknown directive " + tok[0]);
    }
  }
  if (open) finish(current);
  if (plans.empty()) throw Error("plan text declares no robots");
  return plans;
}

std::string save_plans(const EnvGraph& g, const std::vector<RoutePlan>& plans) {
  std::ostringstream out;
  for (const RoutePlan& plan : plans) {
    std::set<int> term(plan.terminators.begin(), plan.terminators.end());
    for (int e : plan.ends)
      if (!term.count(e))
        throw Error("route of " + plan.robot + " has a non-terminating end chamber " +
                    g.chamber(e).name + " which the plan format cannot express");
    out << "robot " << plan.robot << " start " << g.chamber(plan.start).name << "\n";
    for (auto [a, b] : plan.steps)
      out << "step " << g.chamber(a).name << " " << g.chamber(b).name << "\n";
    for (int e : plan.terminators) out << "end " << g.chamber(e).name << "\n";
    out << "\n";
  }
  return out.str();
}

}  // namespace imds::routes
