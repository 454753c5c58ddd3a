#include <algorithm>
#include <set>
#include <string>

#include "test_util.hpp"

using namespace imds;
using testutil::corpus_path;
using testutil::load_system;
using testutil::slurp;

namespace {

// A ground action rendered as one line, for set comparison against the
// hand-unrolled table below.
std::string render(const SystemSpec& sys, const SystemSpec::GroundAction& a) {
  std::string s = sys.describe(a.in_msg) + " @" + sys.state_name(a.server(), a.in_state) + " -> ";
  s += a.out_msg ? sys.describe(*a.out_msg) : std::string("terminate");
  s += " @" + sys.state_name(a.server(), a.out_state);
  return s;
}

const char* kMini = R"(server: S(agents A;servers M),
services {go},
states {idle,done},
actions{
{A.S.go, S.idle} -> {S.done},
}

servers S;
agents A;

init-> {
S(A,S).idle,
A.S.go,
}.
)";

}  // namespace

TEST_CASE("corridor listing grounds to the hand-unrolled action table") {
  std::string text = slurp(corpus_path("corridor_two_robots.imds"));
  lang::ParseResult parsed = lang::parse_spec(text);
  REQUIRE(parsed.spec.has_value());
  CHECK(parsed.diagnostics.items.empty());

  SystemSpec sys = load_system(text);
  REQUIRE(sys.agent_names == std::vector<std::string>{"ROBOT[1]", "ROBOT[2]"});
  REQUIRE(sys.servers.size() == 3);
  CHECK(sys.servers[0].name == "SideCh[1]");
  CHECK(sys.servers[1].name == "SideCh[2]");
  CHECK(sys.servers[2].name == "CentralCh");
  CHECK(sys.actions.size() == 48);

  // Per-instance action counts: 2+4+4+4+2 for each side chamber, 4*4 central.
  std::vector<int> per_server(3, 0);
  for (const auto& a : sys.actions) per_server[a.server()] += 1;
  CHECK(per_server == std::vector<int>{16, 16, 16});

  // Name tables carry exactly the declared names.
  CHECK(sys.servers[0].service_names.size() == 6);   // start, tryS[1..2], okS[1..2], takeS
  CHECK(sys.servers[0].declared_services == 6);
  CHECK(sys.servers[0].state_names.size() == 4);     // free, resS, occ, end
  CHECK(sys.servers[2].service_names.size() == 10);
  CHECK(sys.servers[2].state_names.size() == 4);     // free, resC[1..2], occ

  // Unroll the listing by hand: every quantifier instance written out via
  // loops that mirror the source, including the 3-j switch target.
  std::set<std::string> expected;
  auto add = [&](std::string s) { expected.insert(std::move(s)); };
  for (int j0 = 1; j0 <= 2; ++j0) {
    std::string side = "SideCh[" + std::to_string(j0) + "]";
    for (int i = 1; i <= 2; ++i) {
      std::string r = "ROBOT[" + std::to_string(i) + "]";
      add(r + "." + side + ".start @occ -> " + r + ".CentralCh.tryC[" + std::to_string(i) +
          "] @occ");
      add(r + "." + side + ".takeS @resS -> terminate @end");
      for (int j = 1; j <= 2; ++j) {
        std::string js = std::to_string(j);
        add(r + "." + side + ".okS[" + js + "] @occ -> " + r + ".CentralCh.takeC[" + js +
            "] @free");
        add(r + "." + side + ".tryS[" + js + "] @free -> " + r + ".CentralCh.okC[" + js +
            "] @resS");
        add(r + "." + side + ".tryS[" + js + "] @occ -> " + r + ".CentralCh.notC[" + js +
            "] @occ");
      }
    }
  }
  for (int i = 1; i <= 2; ++i) {
    std::string r = "ROBOT[" + std::to_string(i) + "]";
    for (int j = 1; j <= 2; ++j) {
      std::string js = std::to_string(j);
      std::string side = "SideCh[" + js + "]";
      add(r + ".CentralCh.tryC[" + js + "] @free -> " + r + "." + side + ".okS[" + js +
          "] @resC[" + js + "]");
      add(r + ".CentralCh.takeC[" + js + "] @resC[" + js + "] -> " + r + ".CentralCh.switch[" +
          std::to_string(3 - j) + "] @occ");
      add(r + ".CentralCh.switch[" + js + "] @occ -> " + r + "." + side + ".tryS[" + js +
          "] @occ");
      add(r + ".CentralCh.okC[" + js + "] @occ -> " + r + "." + side + ".takeS @free");
    }
  }
  REQUIRE(expected.size() == 48);

  std::set<std::string> actual;
  for (const auto& a : sys.actions) actual.insert(render(sys, a));
  CHECK(actual == expected);

  // Initial assignment from the init block.
  REQUIRE(sys.initial_messages.size() == 2);
  CHECK(sys.describe(sys.initial_messages[0]) == "ROBOT[1].SideCh[1].start");
  CHECK(sys.describe(sys.initial_messages[1]) == "ROBOT[2].SideCh[2].start");
  CHECK(sys.state_name(0, sys.servers[0].initial_state) == "occ");
  CHECK(sys.state_name(1, sys.servers[1].initial_state) == "occ");
  CHECK(sys.state_name(2, sys.servers[2].initial_state) == "free");
}

TEST_CASE("pretty printing is a parser fixed point") {
  std::vector<std::string> files = {"corridor_two_robots.imds", "comm_starved.imds"};
  for (const auto& [spec, topo] : testutil::compiled_corpus()) files.push_back(spec);
  for (const std::string& f : files) {
    CAPTURE(f);
    lang::ParseResult first = lang::parse_spec(slurp(corpus_path(f)));
    REQUIRE(first.spec.has_value());
    std::string printed = lang::pretty_print(*first.spec);
    lang::ParseResult second = lang::parse_spec(printed);
    REQUIRE(second.spec.has_value());
    CHECK(lang::pretty_print(*second.spec) == printed);
  }
}

TEST_CASE("syntax errors are reported with positions, not thrown") {
  std::string text = slurp(corpus_path("corridor_two_robots.imds"));
  std::size_t arrow = text.find("->");
  REQUIRE(arrow != std::string::npos);
  text.erase(arrow, 2);
  lang::ParseResult r = lang::parse_spec(text);
  CHECK_FALSE(r.spec.has_value());
  REQUIRE(r.diagnostics.error_count() >= 1);
  CHECK(r.diagnostics.items[0].line > 0);

  CHECK_FALSE(lang::parse_spec("server: S(").spec.has_value());
  CHECK_FALSE(lang::parse_spec("#DEFINEX N 2\n").spec.has_value());
  CHECK_FALSE(lang::parse_spec("").spec.has_value());
}

TEST_CASE("expansion caps sizes and reports arithmetic out of range") {
  std::string big = kMini;
  big.replace(big.find("agents A;"), 9, "agents A[70];");
  lang::ParseResult p = lang::parse_spec(big);
  if (p.spec.has_value()) {
    lang::ExpandResult ex = lang::expand_spec(*p.spec);
    CHECK_FALSE(ex.system.has_value());
    REQUIRE(ex.diagnostics.error_count() >= 1);
  }

  std::string cap = "#DEFINE N 100\n";
  cap += kMini;
  lang::ParseResult p2 = lang::parse_spec(cap);
  REQUIRE(p2.spec.has_value());
  lang::ExpandResult ex2 = lang::expand_spec(*p2.spec);
  CHECK_FALSE(ex2.system.has_value());
}

TEST_CASE("formal parameters bind per instance") {
  SystemSpec sys = testutil::load_corpus_system("comm_starved.imds");
  REQUIRE(sys.agent_names == std::vector<std::string>{"A", "B"});
  REQUIRE(sys.servers.size() == 2);
  AgentId a = sys.agent_id("A"), b = sys.agent_id("B");
  ServerId p1 = sys.server_id("Peer[1]"), p2 = sys.server_id("Peer[2]");
  ServiceId hello1 = sys.service_id(p1, "hello");
  ServiceId hello2 = sys.service_id(p2, "hello");

  // Peer[1] is instantiated with listener B, Peer[2] with listener A; the
  // same definition action grounds differently per instance.
  CHECK(sys.actions_for({b, p1, hello1}).size() == 1);
  CHECK(sys.actions_for({a, p1, hello1}).empty());
  CHECK(sys.actions_for({a, p2, hello2}).size() == 1);
  CHECK(sys.actions_for({b, p2, hello2}).empty());

  ActionId act = sys.actions_for({b, p1, hello1})[0];
  REQUIRE(sys.actions[act].out_msg.has_value());
  CHECK(sys.describe(*sys.actions[act].out_msg) == "B.Peer[2].hello");
}

TEST_CASE("validation separates errors from usage warnings") {
  SUBCASE("corridor emits exactly the two dead-service warnings") {
    SystemSpec sys = testutil::load_corpus_system("corridor_two_robots.imds");
    Diagnostics d = validate_spec(sys);
    CHECK(d.error_count() == 0);
    REQUIRE(d.warning_count() == 2);
    CHECK(d.items[0].message ==
          "service notC[1] of CentralCh is never consumed by any CentralCh action");
    CHECK(d.items[1].message ==
          "service notC[2] of CentralCh is never consumed by any CentralCh action");
  }

  SUBCASE("starved peers can never terminate") {
    SystemSpec sys = testutil::load_corpus_system("comm_starved.imds");
    Diagnostics d = validate_spec(sys);
    CHECK(d.error_count() == 0);
    REQUIRE(d.warning_count() == 2);
    CHECK(d.items[0].message == "agent A can never terminate");
    CHECK(d.items[1].message == "agent B can never terminate");
  }

  SUBCASE("clean minimal spec") {
    SystemSpec sys = load_system(kMini);
    CHECK(validate_spec(sys).items.empty());
  }

  SUBCASE("duplicate initial message") {
    std::string text = kMini;
    text.replace(text.rfind("A.S.go,"), 7, "A.S.go,\nA.S.go,");
    lang::ParseResult p = lang::parse_spec(text);
    REQUIRE(p.spec.has_value());
    lang::ExpandResult ex = lang::expand_spec(*p.spec);
    REQUIRE(ex.system.has_value());
    Diagnostics d = validate_spec(*ex.system);
    REQUIRE(d.error_count() == 1);
    CHECK(d.items[0].message == "agent A has 2 initial messages, expected 1");
  }

  SUBCASE("missing initial message") {
    std::string text = kMini;
    text.replace(text.rfind("A.S.go,"), 7, "");
    lang::ParseResult p = lang::parse_spec(text);
    REQUIRE(p.spec.has_value());
    lang::ExpandResult ex = lang::expand_spec(*p.spec);
    REQUIRE(ex.system.has_value());
    Diagnostics d = validate_spec(*ex.system);
    REQUIRE(d.error_count() >= 1);
    CHECK(d.items[0].message == "agent A has no initial message, expected 1");
  }

  SUBCASE("server never instantiated") {
    std::string text = kMini;
    text.replace(text.find("servers S;"), 10, "servers S[2];");
    text.replace(text.find("S(A,S).idle"), 11, "S[1](A,S[1]).idle");
    text.replace(text.rfind("A.S.go"), 6, "A.S[1].go");
    lang::ParseResult p = lang::parse_spec(text);
    REQUIRE(p.spec.has_value());
    lang::ExpandResult ex = lang::expand_spec(*p.spec);
    REQUIRE(ex.system.has_value());
    Diagnostics d = validate_spec(*ex.system);
    bool found = false;
    for (const auto& item : d.items)
      found = found || item.message == "server S[2] has no initial state";
    CHECK(found);
  }

  SUBCASE("undeclared service reference") {
    std::string text = kMini;
    text.replace(text.find("{A.S.go, S.idle}"), 16, "{A.S.gone, S.idle}");
    lang::ExpandResult ex = lang::expand_spec(*lang::parse_spec(text).spec);
    REQUIRE(ex.system.has_value());
    Diagnostics d = validate_spec(*ex.system);
    bool found = false;
    for (const auto& item : d.items)
      found = found || item.message == "action consumes undeclared service gone of S";
    CHECK(found);
  }
}
