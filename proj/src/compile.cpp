#include "imds/compile.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "imds/ast.hpp"
#include "imds/parser.hpp"

namespace imds::routes {
namespace {

using lang::ActionTemplate;
using lang::ActualArg;
using lang::Decl;
using lang::InitInstantiation;
using lang::InitItem;
using lang::InitMessage;
using lang::MsgRef;
using lang::RawSpec;
using lang::ServerDef;
using lang::StateRef;
using lang::SymRef;

SymRef sym(std::string name) {
  SymRef s;
  s.name = std::move(name);
  return s;
}

MsgRef msg(const std::string& agent, const std::string& server, const std::string& service) {
  return MsgRef{sym(agent), sym(server), sym(service)};
}

StateRef state(const std::string& server, const std::string& st) {
  return StateRef{sym(server), sym(st)};
}

Decl decl(const std::string& name) {
  Decl d;
  d.name = name;
  return d;
}

bool valid_ident(const std::string& s) {
  if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_'))
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

/// Per-chamber compilation facts gathered from the plans.
struct ChamberUse {
  std::vector<int> robots;    // plan indexes touching the chamber, plan order
  std::vector<int> starters;  // plan indexes starting here
  std::set<int> arrivals;     // robots with a move into the chamber
  std::vector<int> from;      // in-neighbors, name order
  std::vector<int> to;        // out-neighbors, name order
  int count_limit = 0;        // highest occupancy state of a counting chamber
  bool counting = false;      // counting states instead of free/res/occ
  bool contended = false;     // a try can arrive while the chamber is full
};

}  // namespace

std::string compile_to_imds(const EnvGraph& g, const std::vector<RoutePlan>& plans) {
  if (plans.empty()) throw CompileError("no route plans to compile");
  for (const Chamber& c : g.chambers)
    if (!valid_ident(c.name))
      throw CompileError("chamber name " + c.name + " is not a valid identifier");
  std::set<std::string> robot_names;
  for (const RoutePlan& plan : plans) {
    check_plan(g, plan);
    if (!valid_ident(plan.robot))
      throw CompileError("robot name " + plan.robot + " is not a valid identifier");
    if (!robot_names.insert(plan.robot).second)
      throw NameCollision("two robots are both named " + plan.robot);
    if (g.id(plan.robot) >= 0)
      throw NameCollision("robot " + plan.robot + " shares its name with a chamber");
    std::set<int> term(plan.terminators.begin(), plan.terminators.end());
    for (int e : plan.ends)
      if (!term.count(e))
        throw CompileError("route of " + plan.robot + " may stop at " +
                           g.chamber(e).name +
                           " without terminating; compiled routes must terminate or cycle");
  }

  const int nplans = static_cast<int>(plans.size());
  std::map<int, ChamberUse> use;
  auto touch = [&](int chamber, int robot) {
    ChamberUse& u = use[chamber];
    if (std::find(u.robots.begin(), u.robots.end(), robot) == u.robots.end())
      u.robots.push_back(robot);
  };
  for (int r = 0; r < nplans; ++r) {
    const RoutePlan& plan = plans[r];
    touch(plan.start, r);
    for (auto [a, b] : plan.steps) {
      touch(a, r);
      touch(b, r);
      use[b].arrivals.insert(r);
    }
  }
  for (int r = 0; r < nplans; ++r) use[plans[r].start].starters.push_back(r);

  auto sorted_ids = [&](std::set<int>&& s) {
    std::vector<int> out(s.begin(), s.end());
    std::sort(out.begin(), out.end(),
              [&](int a, int b) { return g.chamber(a).name < g.chamber(b).name; });
    return out;
  };
  for (auto& [c, u] : use) {
    std::set<int> from, to;
    for (int r : u.robots) {
      for (auto [a, b] : plans[r].steps) {
        if (b == c) from.insert(a);
        if (a == c) to.insert(b);
      }
    }
    u.from = sorted_ids(std::move(from));
    u.to = sorted_ids(std::move(to));
    int visitors = static_cast<int>(u.robots.size());
    int cap = g.chamber(c).capacity;
    if (cap != kUnboundedCapacity &&
        static_cast<int>(u.starters.size()) > cap)
      throw CompileError("chamber " + g.chamber(c).name + " with capacity " +
                         std::to_string(cap) + " cannot hold " +
                         std::to_string(u.starters.size()) + " starting robots");
    u.counting = cap != 1;
    u.count_limit = cap == kUnboundedCapacity ? visitors : std::min(cap, visitors);
    u.contended = cap != kUnboundedCapacity && cap < visitors;
  }

  auto branching = [&](int robot, int at) {
    return plan_branches(g, plans[robot], at).size() >= 2;
  };
  // busy_<T> exists at chamber c when some robot with alternatives at c heads
  // for a target T that can refuse it.
  auto busy_targets = [&](int c) {
    const ChamberUse& u = use.at(c);
    std::set<int> out;
    for (int r : u.robots)
      for (auto [a, b] : plans[r].steps)
        if (a == c && use.at(b).contended && branching(r, c)) out.insert(b);
    return sorted_ids(std::move(out));
  };

  RawSpec raw;
  std::vector<int> chambers;
  for (int c = 0; c < static_cast<int>(g.chambers.size()); ++c)
    if (use.count(c)) chambers.push_back(c);

  for (int c : chambers) {
    const ChamberUse& u = use.at(c);
    const std::string& cn = g.chamber(c).name;
    ServerDef def;
    def.name = cn;
    for (int r : u.robots) def.formal_agents.push_back(decl(plans[r].robot));
    {
      std::set<int> nb(u.from.begin(), u.from.end());
      nb.insert(u.to.begin(), u.to.end());
      for (int n : sorted_ids(std::move(nb)))
        def.formal_servers.push_back(decl(g.chamber(n).name));
    }

    std::vector<int> busy = busy_targets(c);
    if (!u.starters.empty()) def.services.push_back(decl("go"));
    if (!u.arrivals.empty()) def.services.push_back(decl("take"));
    for (int f : u.from) def.services.push_back(decl("try_" + g.chamber(f).name));
    for (int t : u.to) def.services.push_back(decl("ok_" + g.chamber(t).name));
    for (int t : busy) def.services.push_back(decl("busy_" + g.chamber(t).name));

    // State names, and the states a robot holds the chamber in (inputs of the
    // actions the robot performs while present).
    std::vector<std::string> held;
    auto count_state = [&](int k) {
      if (k < 0)
        throw CapacityUnderflow("occupancy of " + cn + " would drop below zero");
      return "n" + std::to_string(k);
    };
    if (u.counting) {
      for (int k = 0; k <= u.count_limit; ++k) def.states.push_back(decl(count_state(k)));
      for (int k = 1; k <= u.count_limit; ++k) held.push_back(count_state(k));
    } else {
      def.states.push_back(decl("free"));
      if (!u.arrivals.empty()) def.states.push_back(decl("res"));
      def.states.push_back(decl("occ"));
      held.push_back("occ");
    }

    auto add = [&](MsgRef in, const std::string& in_state, std::optional<MsgRef> out,
                   const std::string& out_state) {
      ActionTemplate t;
      t.in_msg = std::move(in);
      t.in_state = state(cn, in_state);
      t.out_msg = std::move(out);
      t.out_state = state(cn, out_state);
      def.actions.push_back(std::move(t));
    };

    for (int r : u.starters) {
      const std::string& rn = plans[r].robot;
      for (int b : plan_branches(g, plans[r], c))
        for (const std::string& s : held)
          add(msg(rn, cn, "go"), s, msg(rn, g.chamber(b).name, "try_" + cn), s);
    }
    for (int f : u.from) {
      const std::string& fn = g.chamber(f).name;
      for (int r : u.robots) {
        const RoutePlan& plan = plans[r];
        if (!std::count(plan.steps.begin(), plan.steps.end(), std::make_pair(f, c)))
          continue;
        const std::string& rn = plan.robot;
        if (u.counting) {
          for (int k = 0; k < u.count_limit; ++k)
            add(msg(rn, cn, "try_" + fn), count_state(k), msg(rn, fn, "ok_" + cn),
                count_state(k + 1));
        } else {
          add(msg(rn, cn, "try_" + fn), "free", msg(rn, fn, "ok_" + cn), "res");
        }
        if (u.contended && branching(r, f)) {
          if (u.counting) {
            add(msg(rn, cn, "try_" + fn), count_state(u.count_limit),
                msg(rn, fn, "busy_" + cn), count_state(u.count_limit));
          } else {
            add(msg(rn, cn, "try_" + fn), "res", msg(rn, fn, "busy_" + cn), "res");
            add(msg(rn, cn, "try_" + fn), "occ", msg(rn, fn, "busy_" + cn), "occ");
          }
        }
      }
    }
    for (int r : u.robots) {
      if (!u.arrivals.count(r)) continue;
      const std::string& rn = plans[r].robot;
      std::vector<int> branches = plan_branches(g, plans[r], c);
      if (branches.empty()) {
        if (u.counting) {
          for (int k = 1; k <= u.count_limit; ++k)
            add(msg(rn, cn, "take"), count_state(k), std::nullopt, count_state(k));
        } else {
          add(msg(rn, cn, "take"), "res", std::nullopt, "occ");
        }
        continue;
      }
      for (int b : branches) {
        const std::string& bn = g.chamber(b).name;
        if (u.counting) {
          for (int k = 1; k <= u.count_limit; ++k)
            add(msg(rn, cn, "take"), count_state(k), msg(rn, bn, "try_" + cn),
                count_state(k));
        } else {
          add(msg(rn, cn, "take"), "res", msg(rn, bn, "try_" + cn), "occ");
        }
      }
    }
    for (int t : u.to) {
      const std::string& tn = g.chamber(t).name;
      for (int r : u.robots) {
        const RoutePlan& plan = plans[r];
        if (!std::count(plan.steps.begin(), plan.steps.end(), std::make_pair(c, t)))
          continue;
        const std::string& rn = plan.robot;
        if (u.counting) {
          for (int k = 1; k <= u.count_limit; ++k)
            add(msg(rn, cn, "ok_" + tn), count_state(k), msg(rn, tn, "take"),
                count_state(k - 1));
        } else {
          add(msg(rn, cn, "ok_" + tn), "occ", msg(rn, tn, "take"), "free");
        }
      }
    }
    for (int t : busy) {
      const std::string& tn = g.chamber(t).name;
      for (int r : u.robots) {
        const RoutePlan& plan = plans[r];
        if (!std::count(plan.steps.begin(), plan.steps.end(), std::make_pair(c, t)) ||
            !branching(r, c))
          continue;
        const std::string& rn = plan.robot;
        for (int b : plan_branches(g, plans[r], c)) {
          const std::string& bn = g.chamber(b).name;
          for (const std::string& s : held)
            add(msg(rn, cn, "busy_" + tn), s, msg(rn, bn, "try_" + cn), s);
        }
      }
    }

    raw.server_defs.push_back(std::move(def));
  }

  for (int c : chambers) raw.global_servers.push_back(decl(g.chamber(c).name));
  for (const RoutePlan& plan : plans) raw.global_agents.push_back(decl(plan.robot));

  for (std::size_t i = 0; i < chambers.size(); ++i) {
    const int c = chambers[i];
    const ChamberUse& u = use.at(c);
    InitInstantiation inst;
    inst.instance = sym(g.chamber(c).name);
    for (const Decl& d : raw.server_defs[i].formal_agents) {
      ActualArg a;
      a.name = d.name;
      inst.actuals.push_back(std::move(a));
    }
    for (const Decl& d : raw.server_defs[i].formal_servers) {
      ActualArg a;
      a.name = d.name;
      inst.actuals.push_back(std::move(a));
    }
    if (u.counting)
      inst.initial_state = sym("n" + std::to_string(u.starters.size()));
    else
      inst.initial_state = sym(u.starters.empty() ? "free" : "occ");
    InitItem item;
    item.item = std::move(inst);
    raw.init_items.push_back(std::move(item));
  }
  for (const RoutePlan& plan : plans) {
    InitItem item;
    item.item = InitMessage{msg(plan.robot, g.chamber(plan.start).name, "go")};
    raw.init_items.push_back(std::move(item));
  }

  return lang::pretty_print(raw);
}

}  // namespace imds::routes
