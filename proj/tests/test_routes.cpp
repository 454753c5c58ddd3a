#include <algorithm>
#include <set>
#include <string>

#include "imds/route_io.hpp"
#include "imds/routes.hpp"
#include "test_util.hpp"

using namespace imds;
using namespace imds::routes;
using testutil::corpus_path;
using testutil::slurp;

namespace {

std::vector<std::string> names(const EnvGraph& g, const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int c : ids) out.push_back(g.chamber(c).name);
  return out;
}

std::vector<std::string> path_of(const EnvGraph& g, const RoutePlan& p) {
  auto ids = linear_path(p);
  REQUIRE(ids.has_value());
  return names(g, *ids);
}

std::set<std::pair<std::string, std::string>> step_names(const EnvGraph& g,
                                                         const RoutePlan& p) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, b] : p.steps) out.emplace(g.chamber(a).name, g.chamber(b).name);
  return out;
}

}  // namespace

TEST_CASE("quadrant arena layout") {
  EnvGraph g = quadrant_topology();
  REQUIRE(g.chambers.size() == 8);
  for (const char* side : {"AW", "AN", "AE", "AS"}) {
    const Chamber& c = g.chamber(g.id(side));
    CHECK(c.capacity == kUnboundedCapacity);
    CHECK(c.side);
  }
  for (const char* central : {"QNW", "QNE", "QSW", "QSE"}) {
    const Chamber& c = g.chamber(g.id(central));
    CHECK(c.capacity == 1);
    CHECK_FALSE(c.side);
  }
  CHECK(g.doors.size() == 12);
  // Ring plus two side spokes per central chamber.
  CHECK(g.is_door(g.id("QNW"), g.id("QNE")));
  CHECK(g.is_door(g.id("QNE"), g.id("QSE")));
  CHECK(g.is_door(g.id("QSE"), g.id("QSW")));
  CHECK(g.is_door(g.id("QSW"), g.id("QNW")));
  CHECK_FALSE(g.is_door(g.id("QNW"), g.id("QSE")));
  CHECK_FALSE(g.is_door(g.id("QNE"), g.id("QSW")));
  for (auto [q, s1, s2] : {std::tuple{"QNW", "AW", "AN"}, {"QNE", "AN", "AE"},
                           {"QSE", "AE", "AS"}, {"QSW", "AS", "AW"}}) {
    CHECK(g.is_door(g.id(q), g.id(s1)));
    CHECK(g.is_door(g.id(q), g.id(s2)));
  }
  for (const char* a : {"AW", "AN", "AE", "AS"})
    for (const char* b : {"AW", "AN", "AE", "AS"})
      CHECK_FALSE(g.is_door(g.id(a), g.id(b)));
}

TEST_CASE("graph construction rejects malformed inputs") {
  auto two = [](int cap_b) {
    return std::vector<Chamber>{{"A", kUnboundedCapacity, false}, {"B", cap_b, false}};
  };
  CHECK_THROWS_AS(make_graph({{"A", 1, false}, {"A", 1, false}}, {{"A", "A"}}), Error);
  CHECK_THROWS_AS(make_graph(two(1), {{"A", "C"}}), Error);
  CHECK_THROWS_AS(make_graph(two(1), {{"A", "A"}}), Error);
  CHECK_THROWS_AS(make_graph(two(0), {{"A", "B"}}), Error);
  CHECK_THROWS_AS(make_graph(two(1), {}), Error);  // disconnected
  EnvGraph ok = make_graph(two(1), {{"A", "B"}});
  CHECK(ok.chamber(ok.id("A")).side);  // unbounded implies side
  CHECK_FALSE(ok.chamber(ok.id("B")).side);
}

TEST_CASE("quarter-turn rotations of a route") {
  EnvGraph g = quadrant_topology();
  RoutePlan hop = linear_plan(g, "R", {"AE", "QNE", "AN"}, false, true);
  struct Row {
    const char* start;
    std::vector<std::string> path;
  };
  for (const Row& r : {Row{"AN", {"AN", "QNW", "AW"}}, Row{"AW", {"AW", "QSW", "AS"}},
                       Row{"AS", {"AS", "QSE", "AE"}}, Row{"AE", {"AE", "QNE", "AN"}}}) {
    CAPTURE(r.start);
    RoutePlan rot = generate_similar_behavior(g, hop, g.id(r.start));
    CHECK(path_of(g, rot) == r.path);
    CHECK(rot.robot == hop.robot);
    CHECK(rot.terminators.size() == 1);
    check_plan(g, rot);
  }
  CHECK_THROWS_AS(generate_similar_behavior(g, hop, g.id("QNW")), NoAutomorphism);

  EnvGraph line = load_env_graph(slurp(corpus_path("cap2_line.topo")));
  RoutePlan lp = linear_plan(line, "H", {"HA", "M", "HB"}, false, true);
  CHECK_THROWS_AS(generate_similar_behavior(line, lp, line.id("HB")), UnsupportedTopology);
}

TEST_CASE("all behaviors from a side chamber") {
  EnvGraph g = quadrant_topology();
  std::vector<RoutePlan> all = generate_all_behaviors(g, g.id("AS"));
  REQUIRE(all.size() == 48);
  CHECK(all[0].robot == "R1");
  CHECK(all[47].robot == "R48");
  CHECK(path_of(g, all[0]) == std::vector<std::string>{"AS", "QSE", "AE"});

  std::set<std::vector<std::string>> distinct;
  for (const RoutePlan& p : all) {
    check_plan(g, p);
    auto path = path_of(g, p);
    CHECK(path.front() == "AS");
    CHECK(g.chamber(g.id(path.back())).side);
    CHECK(std::set<std::string>(path.begin(), path.end()).size() == path.size());
    CHECK(p.terminators.size() == 1);
    distinct.insert(std::move(path));
  }
  CHECK(distinct.size() == 48);
}

TEST_CASE("union of admissible routes between opposite sides") {
  EnvGraph g = quadrant_topology();
  RoutePlan u = generate_many_behaviors(g, "RE", g.id("AW"), {g.id("AE")}, {});
  CHECK(u.steps.size() == 10);
  std::set<std::pair<std::string, std::string>> expected = {
      {"AW", "QNW"}, {"AW", "QSW"}, {"QNW", "QNE"}, {"QSW", "QSE"}, {"QNW", "QSW"},
      {"QSW", "QNW"}, {"QNE", "AE"}, {"QSE", "AE"}, {"QNE", "QSE"}, {"QSE", "QNE"}};
  CHECK(step_names(g, u) == expected);
  CHECK_FALSE(linear_path(u).has_value());  // branching plan
  CHECK(names(g, plan_branches(g, u, g.id("AW"))) == std::vector<std::string>{"QNW", "QSW"});

  // Forbidding the southern detours leaves the single northern corridor.
  RoutePlan straight = generate_many_behaviors(
      g, "RW", g.id("AW"), {g.id("AE")},
      {{g.id("AW"), g.id("QSW")}, {g.id("QNW"), g.id("QSW")}, {g.id("QNE"), g.id("QSE")}});
  CHECK(path_of(g, straight) == std::vector<std::string>{"AW", "QNW", "QNE", "AE"});

  // Both vertical ring crossings forbidden: north cannot reach south.
  CHECK_THROWS_AS(generate_many_behaviors(
                      g, "RN", g.id("AN"), {g.id("AS")},
                      {{g.id("QNW"), g.id("QSW")}, {g.id("QNE"), g.id("QSE")}}),
                  NoRouteExists);
}

TEST_CASE("identical fleet copies") {
  EnvGraph g = quadrant_topology();
  RoutePlan hop = linear_plan(g, "R", {"AW", "QNW", "AN"}, false, true);
  std::vector<RoutePlan> fleet = generate_identical_fleet(hop, 3);
  REQUIRE(fleet.size() == 3);
  CHECK(fleet[0].robot == "R1");
  CHECK(fleet[2].robot == "R3");
  for (const RoutePlan& p : fleet) {
    CHECK(p.steps == hop.steps);
    CHECK(p.start == hop.start);
    CHECK(p.terminators == hop.terminators);
  }
}

TEST_CASE("partition at side chambers") {
  EnvGraph g = quadrant_topology();
  RoutePlan patrol =
      linear_plan(g, "P", {"AW", "QSW", "QSE", "AE", "QNE", "AN", "QNW"}, true, false);
  CHECK(patrol.cyclic);
  CHECK(path_of(g, patrol) ==
        std::vector<std::string>{"AW", "QSW", "QSE", "AE", "QNE", "AN", "QNW"});

  std::vector<SubRoute> subs = partition_route(g, patrol, {PartitionKind::SideAnchored, -1});
  REQUIRE(subs.size() == 3);
  CHECK(names(g, subs[0].chambers) == std::vector<std::string>{"AW", "QSW", "QSE", "AE"});
  CHECK(names(g, subs[1].chambers) == std::vector<std::string>{"AE", "QNE", "AN"});
  CHECK(names(g, subs[2].chambers) == std::vector<std::string>{"AN", "QNW", "AW"});
  for (const SubRoute& s : subs) {
    CHECK(s.parent == "P");
    CHECK(s.starts_at_side);
    CHECK(s.ends_at_side);
    check_plan(g, subroute_to_plan(g, s));
  }
}

TEST_CASE("partition with a designated break chamber") {
  EnvGraph g = quadrant_topology();
  RoutePlan patrol =
      linear_plan(g, "P", {"AW", "QSW", "QSE", "AE", "QNE", "AN", "QNW"}, true, false);
  std::vector<SubRoute> subs =
      partition_route(g, patrol, {PartitionKind::CycleBreak, g.id("QSE")});
  REQUIRE(subs.size() == 4);
  // Fragments cut at QSE are extended to the nearest side chamber.
  CHECK(names(g, subs[0].chambers) == std::vector<std::string>{"AW", "QSW", "QSE", "AE"});
  CHECK(names(g, subs[1].chambers) == std::vector<std::string>{"AS", "QSE", "AE"});
  CHECK(names(g, subs[2].chambers) == std::vector<std::string>{"AE", "QNE", "AN"});
  CHECK(names(g, subs[3].chambers) == std::vector<std::string>{"AN", "QNW", "AW"});
}

TEST_CASE("cycle through central chambers only") {
  EnvGraph g = quadrant_topology();
  RoutePlan ring = linear_plan(g, "C", {"QNW", "QNE", "QSE", "QSW"}, true, false);
  CHECK_THROWS_AS(partition_route(g, ring, {PartitionKind::SideAnchored, -1}),
                  UnanchorableCycle);
  std::vector<SubRoute> subs =
      partition_route(g, ring, {PartitionKind::CycleBreak, g.id("QNW")});
  REQUIRE(subs.size() == 1);
  CHECK(names(g, subs[0].chambers) ==
        std::vector<std::string>{"AN", "QNW", "QNE", "QSE", "QSW", "AS"});
  CHECK(subs[0].starts_at_side);
  CHECK(subs[0].ends_at_side);
}

TEST_CASE("composition round-trips a partition") {
  EnvGraph g = quadrant_topology();
  RoutePlan patrol =
      linear_plan(g, "P", {"AW", "QSW", "QSE", "AE", "QNE", "AN", "QNW"}, true, false);
  std::vector<SubRoute> subs = partition_route(g, patrol, {PartitionKind::SideAnchored, -1});
  std::vector<RoutePlan> parts;
  for (const SubRoute& s : subs) parts.push_back(subroute_to_plan(g, s));

  RoutePlan back = compose_subroutes(g, parts, ComposeMode::Identical);
  CHECK(back.cyclic);
  CHECK(back.start == patrol.start);
  CHECK(step_names(g, back) == step_names(g, patrol));
}

TEST_CASE("composition of rotated copies closes the full loop") {
  EnvGraph g = quadrant_topology();
  RoutePlan hop = linear_plan(g, "R", {"AE", "QNE", "AN"}, false, true);
  std::vector<RoutePlan> parts(4, hop);
  RoutePlan loop = compose_subroutes(g, parts, ComposeMode::Similar, g.id("AW"));
  CHECK(loop.cyclic);
  CHECK(path_of(g, loop) ==
        std::vector<std::string>{"AW", "QSW", "AS", "QSE", "AE", "QNE", "AN", "QNW"});

  CHECK_THROWS_AS(compose_subroutes(g, parts, ComposeMode::Similar), Error);

  RoutePlan far = linear_plan(g, "X", {"AS", "QSW", "AW"}, false, true);
  CHECK_THROWS_AS(compose_subroutes(g, {hop, far}, ComposeMode::Identical),
                  DiscontinuousFragments);
}

TEST_CASE("plan invariant checks") {
  EnvGraph g = quadrant_topology();
  RoutePlan p = linear_plan(g, "R", {"AW", "QNW", "AN"}, false, true);

  RoutePlan no_door = p;
  no_door.steps.push_back({g.id("AW"), g.id("AE")});
  CHECK_THROWS_AS(check_plan(g, no_door), Error);

  RoutePlan end_moves = p;
  end_moves.steps.push_back({g.id("AN"), g.id("QNE")});
  CHECK_THROWS_AS(check_plan(g, end_moves), Error);

  RoutePlan stray_terminator = p;
  stray_terminator.terminators.push_back(g.id("QNW"));
  CHECK_THROWS_AS(check_plan(g, stray_terminator), Error);

  CHECK_THROWS_AS(linear_plan(g, "R", {"AW", "AE"}, false, true), Error);
  CHECK_THROWS_AS(linear_plan(g, "R", {"AW", "XX"}, false, true), Error);
}

TEST_CASE("topology and plan files round-trip") {
  std::string topo_text = slurp(corpus_path("quadrant.topo"));
  EnvGraph g = load_env_graph(topo_text);
  CHECK(save_env_graph(g) == topo_text);
  CHECK(save_env_graph(quadrant_topology()) == topo_text);

  for (const char* f : {"rotated_hops", "triangles", "crossing", "patrol_finisher",
                        "restricted", "collide", "solo_hop", "fleet_pair",
                        "patrol_cycle"}) {
    CAPTURE(f);
    std::string text = slurp(corpus_path(std::string("plans/") + f + ".plan"));
    std::vector<RoutePlan> plans = load_plans(g, text);
    REQUIRE_FALSE(plans.empty());
    std::string saved = save_plans(g, plans);
    std::vector<RoutePlan> again = load_plans(g, saved);
    REQUIRE(again.size() == plans.size());
    for (std::size_t i = 0; i < plans.size(); ++i) {
      CHECK(again[i].robot == plans[i].robot);
      CHECK(again[i].start == plans[i].start);
      CHECK(again[i].steps == plans[i].steps);
      CHECK(again[i].ends == plans[i].ends);
      CHECK(again[i].terminators == plans[i].terminators);
      CHECK(again[i].cyclic == plans[i].cyclic);
    }
    CHECK(save_plans(g, again) == saved);
  }
}

TEST_CASE("file format errors carry line numbers") {
  CHECK_THROWS_AS(load_env_graph("flandre 3\n"), Error);
  CHECK_THROWS_AS(load_env_graph("chamber A capacity inf\nchamber A capacity 1\n"), Error);
  CHECK_THROWS_AS(load_env_graph("chamber A capacity inf\ndoor A B\n"), Error);
  CHECK_THROWS_AS(load_env_graph("chamber A capacity -3\n"), Error);

  EnvGraph g = quadrant_topology();
  CHECK_THROWS_AS(load_plans(g, "step AW QNW\n"), Error);  // step before robot
  CHECK_THROWS_AS(load_plans(g, "robot R start XX\n"), Error);
  CHECK_THROWS_AS(load_plans(g, "robot R start AW\nstep AW AE\nend AE\n"), Error);
  CHECK_THROWS_AS(
      load_plans(g, "robot R start AW\nstep AW QNW\nend QNW\nrobot R start AE\nstep AE "
                    "QNE\nend QNE\n"),
      Error);
  CHECK_THROWS_AS(load_plans(g, "# nothing\n"), Error);

  // Ends that do not terminate have no file representation.
  RoutePlan p = linear_plan(g, "R", {"AW", "QNW", "AN"}, false, true);
  p.terminators.clear();
  CHECK_THROWS_AS(save_plans(g, {p}), Error);
}
