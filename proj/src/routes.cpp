#include "imds/routes.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace imds::routes {
namespace {

std::string name_of(const EnvGraph& g, int c) { return g.chambers[c].name; }

void sort_by_name(const EnvGraph& g, std::vector<int>& ids) {
  std::sort(ids.begin(), ids.end(),
            [&](int a, int b) { return name_of(g, a) < name_of(g, b); });
}

// Quarter turn of the quadrant arena, one step counterclockwise through the
// side chambers west, north, east, south.
const std::map<std::string, std::string>& rotation_map() {
  static const std::map<std::string, std::string> rot = {
      {"AW", "AN"},   {"AN", "AE"},   {"AE", "AS"},   {"AS", "AW"},
      {"QNW", "QNE"}, {"QNE", "QSE"}, {"QSE", "QSW"}, {"QSW", "QNW"},
  };
  return rot;
}

void require_quadrant(const EnvGraph& g) {
  const EnvGraph q = quadrant_topology();
  auto shape = [](const EnvGraph& e) {
    std::set<std::pair<std::string, int>> chambers;
    for (const Chamber& c : e.chambers) chambers.insert({c.name, c.capacity});
    std::set<std::pair<std::string, std::string>> doors;
    for (auto [a, b] : e.doors) {
      std::string x = e.chambers[a].name, y = e.chambers[b].name;
      if (y < x) std::swap(x, y);
      doors.insert({x, y});
    }
    return std::make_pair(chambers, doors);
  };
  if (shape(g) != shape(q))
    throw UnsupportedTopology("rotation requires the quadrant topology");
}

int rotate_chamber(const EnvGraph& g, int c, int times) {
  std::string n = name_of(g, c);
  for (int i = 0; i < times; ++i) n = rotation_map().at(n);
  return g.id(n);
}

RoutePlan rotate_plan(const EnvGraph& g, const RoutePlan& plan, int times) {
  RoutePlan out = plan;
  out.start = rotate_chamber(g, plan.start, times);
  for (auto& [a, b] : out.steps) {
    a = rotate_chamber(g, a, times);
    b = rotate_chamber(g, b, times);
  }
  for (int& e : out.ends) e = rotate_chamber(g, e, times);
  for (int& t : out.terminators) t = rotate_chamber(g, t, times);
  return out;
}

std::vector<std::string> names_of(const EnvGraph& g, const std::vector<int>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int c : ids) out.push_back(name_of(g, c));
  return out;
}

/// Shortest path from a bounded chamber to the nearest side chamber that
/// avoids the given set; ties resolve by name order of exploration. The
/// returned path starts at from and ends at the side chamber.
std::vector<int> path_to_nearest_side(const EnvGraph& g, int from,
                                      const std::set<int>& avoid) {
  std::vector<int> parent(g.chambers.size(), -1);
  std::vector<bool> seen(g.chambers.size(), false);
  std::deque<int> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    if (g.chambers[c].side) {
      std::vector<int> path{c};
      while (path.back() != from) path.push_back(parent[path.back()]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int n : g.adj[c]) {
      if (seen[n] || avoid.count(n)) continue;
      seen[n] = true;
      parent[n] = c;
      queue.push_back(n);
    }
  }
  throw Error("no side chamber reachable from " + name_of(g, from) +
              " for sub-route extension");
}

SubRoute make_subroute(const EnvGraph& g, const std::string& parent,
                       std::vector<int> chambers) {
  SubRoute s;
  s.parent = parent;
  s.starts_at_side = g.chambers[chambers.front()].side;
  s.ends_at_side = g.chambers[chambers.back()].side;
  s.chambers = std::move(chambers);
  return s;
}

/// Extends a fragment whose endpoints sit in bounded chambers out to the
/// nearest side chamber on both sides, then rebuilds the flags.
SubRoute extend_to_sides(const EnvGraph& g, SubRoute s) {
  if (!s.ends_at_side) {
    std::set<int> avoid(s.chambers.begin(), s.chambers.end() - 1);
    std::vector<int> tail = path_to_nearest_side(g, s.chambers.back(), avoid);
    s.chambers.insert(s.chambers.end(), tail.begin() + 1, tail.end());
  }
  if (!s.starts_at_side) {
    std::set<int> avoid(s.chambers.begin() + 1, s.chambers.end());
    std::vector<int> head = path_to_nearest_side(g, s.chambers.front(), avoid);
    s.chambers.insert(s.chambers.begin(), head.rbegin(), head.rend() - 1);
  }
  return make_subroute(g, s.parent, std::move(s.chambers));
}

}  // namespace

int EnvGraph::id(const std::string& name) const {
  for (std::size_t i = 0; i < chambers.size(); ++i)
    if (chambers[i].name == name) return static_cast<int>(i);
  return -1;
}

bool EnvGraph::is_door(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::find(doors.begin(), doors.end(), std::make_pair(a, b)) != doors.end();
}

EnvGraph make_graph(std::vector<Chamber> chambers,
                    const std::vector<std::pair<std::string, std::string>>& doors) {
  EnvGraph g;
  for (Chamber& c : chambers) {
    if (g.id(c.name) >= 0) throw Error("chamber " + c.name + " declared twice");
    if (c.capacity != kUnboundedCapacity && c.capacity < 1)
      throw Error("chamber " + c.name + " has non-positive capacity");
    c.side = c.capacity == kUnboundedCapacity;
    g.chambers.push_back(std::move(c));
  }
  if (g.chambers.empty()) throw Error("topology has no chambers");
  for (const auto& [na, nb] : doors) {
    int a = g.id(na), b = g.id(nb);
    if (a < 0) throw Error("door references undeclared chamber " + na);
    if (b < 0) throw Error("door references undeclared chamber " + nb);
    if (a == b) throw Error("door from " + na + " to itself");
    if (a > b) std::swap(a, b);
    auto door = std::make_pair(a, b);
    if (std::find(g.doors.begin(), g.doors.end(), door) != g.doors.end())
      throw Error("door " + na + " " + nb + " declared twice");
    g.doors.push_back(door);
  }
  g.adj.resize(g.chambers.size());
  for (auto [a, b] : g.doors) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& n : g.adj) sort_by_name(g, n);
  std::vector<bool> seen(g.chambers.size(), false);
  std::deque<int> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int n : g.adj[c])
      if (!seen[n]) {
        seen[n] = true;
        ++reached;
        queue.push_back(n);
      }
  }
  if (reached != g.chambers.size()) {
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw Error("chamber " + g.chambers[i].name + " is unreachable");
  }
  return g;
}

EnvGraph quadrant_topology() {
  std::vector<Chamber> chambers;
  for (const char* side : {"AW", "AN", "AE", "AS"})
    chambers.push_back({side, kUnboundedCapacity, true});
  for (const char* central : {"QNW", "QNE", "QSW", "QSE"})
    chambers.push_back({central, 1, false});
  return make_graph(std::move(chambers), {
                                             {"QNW", "QNE"},
                                             {"QNE", "QSE"},
                                             {"QSE", "QSW"},
                                             {"QSW", "QNW"},
                                             {"QNW", "AW"},
                                             {"QNW", "AN"},
                                             {"QNE", "AN"},
                                             {"QNE", "AE"},
                                             {"QSE", "AE"},
                                             {"QSE", "AS"},
                                             {"QSW", "AS"},
                                             {"QSW", "AW"},
                                         });
}

RoutePlan linear_plan(const EnvGraph& g, std::string robot,
                      const std::vector<std::string>& chambers, bool cyclic,
                      bool terminating) {
  if (chambers.size() < 2) throw Error("a route needs at least one move");
  RoutePlan plan;
  plan.robot = std::move(robot);
  plan.cyclic = cyclic;
  std::vector<int> ids;
  for (const std::string& name : chambers) {
    int c = g.id(name);
    if (c < 0) throw Error("unknown chamber " + name + " in route");
    if (std::find(ids.begin(), ids.end(), c) != ids.end())
      throw Error("route visits chamber " + name + " twice");
    ids.push_back(c);
  }
  plan.start = ids.front();
  for (std::size_t i = 0; i + 1 < ids.size(); ++i)
    plan.steps.emplace_back(ids[i], ids[i + 1]);
  if (cyclic) {
    plan.steps.emplace_back(ids.back(), ids.front());
  } else {
    plan.ends.push_back(ids.back());
    if (terminating) plan.terminators.push_back(ids.back());
  }
  check_plan(g, plan);
  return plan;
}

void check_plan(const EnvGraph& g, const RoutePlan& plan) {
  auto bad = [&](const std::string& what) {
    throw Error("route of " + plan.robot + ": " + what);
  };
  if (plan.robot.empty()) throw Error("route has no robot name");
  if (plan.start < 0 || plan.start >= static_cast<int>(g.chambers.size()))
    bad("start chamber is not in the topology");
  if (plan.steps.empty()) bad("no moves");
  std::set<std::pair<int, int>> unique;
  std::map<int, std::vector<int>> out;
  std::set<int> nodes{plan.start};
  for (auto [a, b] : plan.steps) {
    if (!g.is_door(a, b))
      bad("move " + name_of(g, a) + " to " + name_of(g, b) + " has no door");
    if (!unique.insert({a, b}).second)
      bad("duplicate move " + name_of(g, a) + " to " + name_of(g, b));
    out[a].push_back(b);
    nodes.insert(a);
    nodes.insert(b);
  }
  std::set<int> reach{plan.start};
  std::deque<int> queue{plan.start};
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    if (auto it = out.find(c); it != out.end())
      for (int n : it->second)
        if (reach.insert(n).second) queue.push_back(n);
  }
  for (int n : nodes)
    if (!reach.count(n)) bad("chamber " + name_of(g, n) + " is unreachable from the start");
  std::set<int> ends(plan.ends.begin(), plan.ends.end());
  for (int n : nodes) {
    bool sink = out.find(n) == out.end();
    if (sink && !ends.count(n))
      bad("route stops at " + name_of(g, n) + " which is not an end chamber");
    if (!sink && ends.count(n))
      bad("end chamber " + name_of(g, n) + " has outgoing moves");
  }
  for (int t : plan.terminators)
    if (!ends.count(t)) bad("terminator " + name_of(g, t) + " is not an end chamber");
  if (plan.cyclic) {
    if (!plan.ends.empty()) bad("cyclic route cannot have end chambers");
  } else {
    if (plan.ends.empty()) bad("route has no end chamber");
    // A branching route may hold cycles between its alternatives, but every
    // chamber must still offer a way out to an end.
    std::map<int, std::vector<int>> in;
    for (auto [a, b] : plan.steps) in[b].push_back(a);
    std::set<int> escapes(ends.begin(), ends.end());
    std::deque<int> back(ends.begin(), ends.end());
    while (!back.empty()) {
      int c = back.front();
      back.pop_front();
      if (auto it = in.find(c); it != in.end())
        for (int n : it->second)
          if (escapes.insert(n).second) back.push_back(n);
    }
    for (int n : nodes)
      if (!escapes.count(n)) bad("chamber " + name_of(g, n) + " cannot reach an end");
  }
}

std::vector<int> plan_branches(const EnvGraph& g, const RoutePlan& plan, int chamber) {
  std::vector<int> out;
  for (auto [a, b] : plan.steps)
    if (a == chamber) out.push_back(b);
  sort_by_name(g, out);
  return out;
}

std::optional<std::vector<int>> linear_path(const RoutePlan& plan) {
  std::map<int, int> next;
  for (auto [a, b] : plan.steps)
    if (!next.emplace(a, b).second) return std::nullopt;
  std::vector<int> path{plan.start};
  int at = plan.start;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    auto it = next.find(at);
    if (it == next.end()) return std::nullopt;
    at = it->second;
    if (plan.cyclic && at == plan.start) break;
    if (std::find(path.begin(), path.end(), at) != path.end()) return std::nullopt;
    path.push_back(at);
  }
  return path;
}

RoutePlan generate_similar_behavior(const EnvGraph& g, const RoutePlan& plan, int start) {
  require_quadrant(g);
  for (int times = 0; times < 4; ++times) {
    if (rotate_chamber(g, plan.start, times) == start) {
      RoutePlan out = rotate_plan(g, plan, times);
      check_plan(g, out);
      return out;
    }
  }
  throw NoAutomorphism("no rotation carries " + name_of(g, plan.start) + " to " +
                       name_of(g, start));
}

std::vector<RoutePlan> generate_identical_fleet(const RoutePlan& plan, int n) {
  std::vector<RoutePlan> out;
  for (int i = 1; i <= n; ++i) {
    RoutePlan p = plan;
    p.robot = plan.robot + std::to_string(i);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<RoutePlan> generate_all_behaviors(const EnvGraph& g, int start) {
  std::vector<RoutePlan> out;
  std::vector<int> path{start};
  std::vector<bool> used(g.chambers.size(), false);
  used[start] = true;
  auto dfs = [&](auto&& self, int at) -> void {
    for (int n : g.adj[at]) {
      if (used[n]) continue;
      path.push_back(n);
      used[n] = true;
      if (g.chambers[n].side) {
        RoutePlan p = linear_plan(g, "R" + std::to_string(out.size() + 1),
                                  names_of(g, path), false, true);
        out.push_back(std::move(p));
      }
      self(self, n);
      used[n] = false;
      path.pop_back();
    }
  };
  dfs(dfs, start);
  return out;
}

RoutePlan generate_many_behaviors(const EnvGraph& g, const std::string& robot, int start,
                                  const std::vector<int>& targets,
                                  const std::set<std::pair<int, int>>& forbidden) {
  if (targets.empty()) throw Error("no target chambers given");
  std::set<int> target_set(targets.begin(), targets.end());
  RoutePlan plan;
  plan.robot = robot;
  plan.start = start;
  std::set<std::pair<int, int>> steps;
  std::set<int> reached;
  std::vector<bool> used(g.chambers.size(), false);
  used[start] = true;
  std::vector<int> path{start};
  auto dfs = [&](auto&& self, int at) -> void {
    for (int n : g.adj[at]) {
      if (used[n] || forbidden.count({at, n})) continue;
      if (target_set.count(n)) {
        reached.insert(n);
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
          steps.insert({path[i], path[i + 1]});
        steps.insert({at, n});
        continue;
      }
      if (g.chambers[n].side) continue;  // side chambers never sit inside a path
      path.push_back(n);
      used[n] = true;
      self(self, n);
      used[n] = false;
      path.pop_back();
    }
  };
  dfs(dfs, start);
  if (reached.empty())
    throw NoRouteExists("no route from " + name_of(g, start) +
                        " reaches a target under the given restrictions");
  plan.steps.assign(steps.begin(), steps.end());
  plan.ends.assign(reached.begin(), reached.end());
  sort_by_name(g, plan.ends);
  plan.terminators = plan.ends;
  check_plan(g, plan);
  return plan;
}

RoutePlan compose_subroutes(const EnvGraph& g, const std::vector<RoutePlan>& parts,
                            ComposeMode mode, int similar_start, bool terminating) {
  if (parts.empty()) throw Error("nothing to compose");
  if (mode == ComposeMode::Similar &&
      (similar_start < 0 || similar_start >= static_cast<int>(g.chambers.size())))
    throw Error("similar composition needs a start chamber");
  std::vector<int> seq;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    RoutePlan part = parts[i];
    if (mode == ComposeMode::Similar) {
      int onto = seq.empty() ? similar_start : seq.back();
      part = generate_similar_behavior(g, part, onto);
    }
    auto path = linear_path(part);
    if (!path) throw Error("fragment " + std::to_string(i + 1) + " is not linear");
    if (seq.empty()) {
      seq = *path;
      continue;
    }
    if (path->front() != seq.back())
      throw DiscontinuousFragments(
          "fragment " + std::to_string(i + 1) + " starts at " +
          name_of(g, path->front()) + " but the route so far ends at " +
          name_of(g, seq.back()));
    seq.insert(seq.end(), path->begin() + 1, path->end());
  }
  bool closes = seq.size() > 1 && seq.front() == seq.back();
  if (closes) seq.pop_back();
  return linear_plan(g, parts.front().robot, names_of(g, seq), closes, terminating);
}

std::vector<SubRoute> partition_route(const EnvGraph& g, const RoutePlan& plan,
                                      const PartitionMethod& method) {
  check_plan(g, plan);
  auto path = linear_path(plan);
  if (!path) throw Error("partition requires a linear route");
  auto is_cut = [&](int c) {
    return g.chambers[c].side ||
           (method.kind == PartitionKind::CycleBreak && c == method.break_chamber);
  };
  if (method.kind == PartitionKind::CycleBreak) {
    if (method.break_chamber < 0 ||
        std::find(path->begin(), path->end(), method.break_chamber) == path->end())
      throw Error("break chamber is not on the route of " + plan.robot);
  }

  std::vector<int> seq = *path;
  if (plan.cyclic) {
    auto first = std::find_if(seq.begin(), seq.end(), is_cut);
    if (first == seq.end())
      throw UnanchorableCycle("the cycle of " + plan.robot +
                              " never passes a side chamber");
    std::rotate(seq.begin(), first, seq.end());
    seq.push_back(seq.front());
  }

  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (is_cut(seq[i])) cuts.push_back(i);

  std::vector<SubRoute> out;
  auto emit = [&](std::size_t lo, std::size_t hi) {
    if (hi <= lo) return;
    std::vector<int> frag(seq.begin() + lo, seq.begin() + hi + 1);
    // A loop with a single cut point would close on itself; cut the edge
    // back into the cut chamber instead of repeating it.
    if (frag.size() > 2 && frag.front() == frag.back()) frag.pop_back();
    out.push_back(make_subroute(g, plan.robot, std::move(frag)));
  };
  if (cuts.empty()) {
    emit(0, seq.size() - 1);
  } else {
    emit(0, cuts.front());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) emit(cuts[i], cuts[i + 1]);
    emit(cuts.back(), seq.size() - 1);
  }
  if (method.kind == PartitionKind::CycleBreak)
    for (SubRoute& s : out) s = extend_to_sides(g, std::move(s));
  return out;
}

RoutePlan subroute_to_plan(const EnvGraph& g, const SubRoute& sub) {
  return linear_plan(g, sub.parent, names_of(g, sub.chambers), false, true);
}

}  // namespace imds::routes
