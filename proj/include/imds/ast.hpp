#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Syntax tree of the chamber-system specification language. The tree mirrors
// the source structure; constants, quantifiers and arrays are still symbolic
// and only become concrete during expansion.

namespace imds::lang {

/// Index arithmetic: a signed sum of integer literals and quantifier
/// variables, e.g. "3-j". The grammar has no parentheses or products.
struct Expr {
  struct Term {
    int sign = 1;  // +1 or -1; the first term is always +1
    std::optional<std::string> var;
    long value = 0;  // used when var is empty
  };
  std::vector<Term> terms;

  static Expr literal(long v) { return Expr{{Term{1, std::nullopt, v}}}; }
  static Expr variable(std::string name) { return Expr{{Term{1, std::move(name), 0}}}; }
  bool is_literal() const { return terms.size() == 1 && !terms[0].var; }
};

/// Identifier with an optional index expression: "tryS[j]", "CentralCh".
struct SymRef {
  std::string name;
  std::optional<Expr> index;
  int line = 0, col = 0;
};

/// agent.server.service
struct MsgRef {
  SymRef agent, server, service;
};

/// server.state
struct StateRef {
  SymRef server, state;
};

struct Quantifier {
  std::string var;
  Expr lo, hi;
  int line = 0, col = 0;
};

struct ActionTemplate {
  std::vector<Quantifier> quantifiers;
  MsgRef in_msg;
  StateRef in_state;
  std::optional<MsgRef> out_msg;  // absent for terminating actions
  StateRef out_state;
  int line = 0, col = 0;
};

/// Declaration of a name or a name array: "takeS", "tryS[2]", "ROBOT[N]".
struct Decl {
  std::string name;
  std::optional<Expr> size;
  int line = 0, col = 0;
};

struct ServerDef {
  std::string name;
  std::vector<Decl> formal_agents;
  std::vector<Decl> formal_servers;
  std::vector<Decl> services;
  std::vector<Decl> states;
  std::vector<ActionTemplate> actions;
  int line = 0, col = 0;
};

/// Actual parameter of an instantiation: "CentralCh", "SideCh[j]",
/// "ROBOT[1..N]" or "SideCh[1,2]".
struct ActualArg {
  enum class Kind { Plain, Index, Range, List };
  std::string name;
  Kind kind = Kind::Plain;
  std::vector<Expr> indexes;  // Index: one entry; Range: lo, hi; List: all entries
  int line = 0, col = 0;
};

struct InitInstantiation {
  SymRef instance;
  std::vector<ActualArg> actuals;
  SymRef initial_state;
};

struct InitMessage {
  MsgRef msg;
};

struct InitItem {
  std::vector<Quantifier> quantifiers;
  std::variant<InitInstantiation, InitMessage> item;
  int line = 0, col = 0;
};

struct RawSpec {
  std::vector<std::pair<std::string, long>> defines;
  std::vector<ServerDef> server_defs;
  std::vector<Decl> global_servers;
  std::vector<Decl> global_agents;
  std::vector<InitItem> init_items;
};

}  // namespace imds::lang
