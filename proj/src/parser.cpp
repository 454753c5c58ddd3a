#include "imds/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace imds::lang {
namespace {

enum class Tok {
  End, Ident, Int,
  KwDefine, KwServer, KwServers, KwAgents, KwServices, KwStates, KwActions, KwInit,
  LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Lt, Gt, Comma, Semi, Colon, Dot, DotDot, Arrow, Eq, Plus, Minus,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::KwDefine: return "#DEFINE";
    case Tok::KwServer: return "server";
    case Tok::KwServers: return "servers";
    case Tok::KwAgents: return "agents";
    case Tok::KwServices: return "services";
    case Tok::KwStates: return "states";
    case Tok::KwActions: return "actions";
    case Tok::KwInit: return "init";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::Arrow: return "'->'";
    case Tok::Eq: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long value = 0;
  int line = 1, col = 1;
};

class Lexer {
public:
  Lexer(std::string_view src, Diagnostics& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.col = col_;
      if (eof()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = peek();
      if (c == '#') {
        get();
        std::string word;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
          word.push_back(get());
        if (word != "DEFINE") {
          diags_.error(t.line, t.col, "expected #DEFINE");
          t.kind = Tok::End;
          out.push_back(t);
          return out;
        }
        t.kind = Tok::KwDefine;
        out.push_back(t);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
          word.push_back(get());
        t.text = word;
        if (word == "server") t.kind = Tok::KwServer;
        else if (word == "servers") t.kind = Tok::KwServers;
        else if (word == "agents") t.kind = Tok::KwAgents;
        else if (word == "services") t.kind = Tok::KwServices;
        else if (word == "states") t.kind = Tok::KwStates;
        else if (word == "actions") t.kind = Tok::KwActions;
        else if (word == "init") t.kind = Tok::KwInit;
        else t.kind = Tok::Ident;
        out.push_back(t);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        long v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
          v = v * 10 + (get() - '0');
          if (v > 1000000) v = 1000000;  // clamp; size caps are checked later
        }
        t.kind = Tok::Int;
        t.value = v;
        out.push_back(t);
        continue;
      }
      get();
      switch (c) {
        case '{': t.kind = Tok::LBrace; break;
        case '}': t.kind = Tok::RBrace; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '[': t.kind = Tok::LBracket; break;
        case ']': t.kind = Tok::RBracket; break;
        case '<': t.kind = Tok::Lt; break;
        case '>': t.kind = Tok::Gt; break;
        case ',': t.kind = Tok::Comma; break;
        case ';': t.kind = Tok::Semi; break;
        case ':': t.kind = Tok::Colon; break;
        case '=': t.kind = Tok::Eq; break;
        case '+': t.kind = Tok::Plus; break;
        case '-':
          if (!eof() && peek() == '>') {
            get();
            t.kind = Tok::Arrow;
          } else {
            t.kind = Tok::Minus;
          }
          break;
        case '.':
          if (!eof() && peek() == '.') {
            get();
            t.kind = Tok::DotDot;
          } else {
            t.kind = Tok::Dot;
          }
          break;
        default:
          diags_.error(t.line, t.col, std::string("unexpected character '") + c + "'");
          t.kind = Tok::End;
          out.push_back(t);
          return out;
      }
      out.push_back(t);
    }
  }

private:
  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  char get() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!eof()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (!eof() && peek() != '\n') get();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
public:
  Parser(std::vector<Token> toks, Diagnostics& diags) : toks_(std::move(toks)), diags_(diags) {}

  std::optional<RawSpec> run() {
    RawSpec spec;
    if (at(Tok::End)) {
      fail("expected #DEFINE or server or servers");
      return std::nullopt;
    }
    while (at(Tok::KwDefine)) {
      next();
      Token name = expect(Tok::Ident, "constant name after #DEFINE");
      Token value = expect(Tok::Int, "integer value for #DEFINE");
      if (failed_) return std::nullopt;
      spec.defines.emplace_back(name.text, value.value);
    }
    while (at(Tok::KwServer)) {
      auto def = parse_server_def();
      if (failed_) return std::nullopt;
      spec.server_defs.push_back(std::move(def));
    }
    if (!at(Tok::KwServers)) {
      fail(spec.server_defs.empty() && spec.defines.empty()
               ? "expected #DEFINE or server or servers"
               : "expected server definition or servers declaration");
      return std::nullopt;
    }
    next();
    spec.global_servers = parse_decl_list(Tok::Semi);
    expect(Tok::Semi, "';' after servers declaration");
    expect(Tok::KwAgents, "agents declaration");
    spec.global_agents = parse_decl_list(Tok::Semi);
    expect(Tok::Semi, "';' after agents declaration");
    expect(Tok::KwInit, "init block");
    expect(Tok::Arrow, "'->' after init");
    expect(Tok::LBrace, "'{' opening init block");
    while (!failed_ && !at(Tok::RBrace)) {
      spec.init_items.push_back(parse_init_item());
    }
    expect(Tok::RBrace, "'}' closing init block");
    expect(Tok::Dot, "'.' after init block");
    // Some sources close the whole listing with an extra brace; tolerate it.
    while (at(Tok::RBrace)) next();
    if (!at(Tok::End)) fail("unexpected trailing input after init block");
    if (failed_) return std::nullopt;
    return spec;
  }

private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  void fail(const std::string& what) {
    if (failed_) return;
    failed_ = true;
    diags_.error(cur().line, cur().col,
                 "expected " + what + ", got " + tok_name(cur().kind));
  }

  void fail_msg(const std::string& msg) {
    if (failed_) return;
    failed_ = true;
    diags_.error(cur().line, cur().col, msg);
  }

  Token expect(Tok k, const std::string& what) {
    if (failed_) return cur();
    if (!at(k)) {
      fail(what);
      return cur();
    }
    return next();
  }

  Expr parse_expr() {
    Expr e;
    int sign = 1;
    while (true) {
      Expr::Term t;
      t.sign = sign;
      if (at(Tok::Int)) {
        t.value = next().value;
      } else if (at(Tok::Ident)) {
        t.var = next().text;
      } else {
        fail("integer or name in index expression");
        return e;
      }
      e.terms.push_back(std::move(t));
      if (at(Tok::Plus)) {
        next();
        sign = 1;
      } else if (at(Tok::Minus)) {
        next();
        sign = -1;
      } else {
        return e;
      }
    }
  }

  SymRef parse_sym_ref() {
    SymRef s;
    Token t = expect(Tok::Ident, "name");
    s.name = t.text;
    s.line = t.line;
    s.col = t.col;
    if (at(Tok::LBracket)) {
      next();
      s.index = parse_expr();
      expect(Tok::RBracket, "']' closing index");
    }
    return s;
  }

  MsgRef parse_msg_ref_from(SymRef first) {
    MsgRef m;
    m.agent = std::move(first);
    expect(Tok::Dot, "'.' in message reference");
    m.server = parse_sym_ref();
    expect(Tok::Dot, "'.' in message reference");
    m.service = parse_sym_ref();
    return m;
  }

  StateRef parse_state_ref() {
    StateRef s;
    s.server = parse_sym_ref();
    expect(Tok::Dot, "'.' in state reference");
    s.state = parse_sym_ref();
    return s;
  }

  std::vector<Quantifier> parse_quantifiers() {
    std::vector<Quantifier> qs;
    while (at(Tok::Lt)) {
      Quantifier q;
      q.line = cur().line;
      q.col = cur().col;
      next();
      q.var = expect(Tok::Ident, "quantifier variable").text;
      expect(Tok::Eq, "'=' in quantifier");
      q.lo = parse_expr();
      expect(Tok::DotDot, "'..' in quantifier range");
      q.hi = parse_expr();
      expect(Tok::Gt, "'>' closing quantifier");
      qs.push_back(std::move(q));
      if (failed_) break;
    }
    return qs;
  }

  Decl parse_decl() {
    Decl d;
    Token t = expect(Tok::Ident, "declared name");
    d.name = t.text;
    d.line = t.line;
    d.col = t.col;
    if (at(Tok::LBracket)) {
      next();
      d.size = parse_expr();
      expect(Tok::RBracket, "']' closing array size");
    }
    return d;
  }

  std::vector<Decl> parse_decl_list(Tok stop) {
    std::vector<Decl> ds;
    while (!failed_) {
      ds.push_back(parse_decl());
      if (at(Tok::Comma)) {
        next();
        if (at(stop)) break;  // trailing comma
        continue;
      }
      break;
    }
    return ds;
  }

  ActionTemplate parse_action() {
    ActionTemplate a;
    a.line = cur().line;
    a.col = cur().col;
    a.quantifiers = parse_quantifiers();
    expect(Tok::LBrace, "'{' opening action input");
    a.in_msg = parse_msg_ref_from(parse_sym_ref());
    expect(Tok::Comma, "',' between message and state");
    a.in_state = parse_state_ref();
    expect(Tok::RBrace, "'}' closing action input");
    expect(Tok::Arrow, "'->' in action");
    expect(Tok::LBrace, "'{' opening action output");
    // Output is either {msg, state} or just {state}; both begin with a
    // dotted reference, so count the dots.
    SymRef first = parse_sym_ref();
    expect(Tok::Dot, "'.' in action output");
    SymRef second = parse_sym_ref();
    if (at(Tok::Dot)) {
      next();
      MsgRef m;
      m.agent = std::move(first);
      m.server = std::move(second);
      m.service = parse_sym_ref();
      a.out_msg = std::move(m);
      expect(Tok::Comma, "',' between output message and state");
      a.out_state = parse_state_ref();
    } else {
      a.out_state = StateRef{std::move(first), std::move(second)};
    }
    expect(Tok::RBrace, "'}' closing action output");
    expect(Tok::Comma, "',' after action");
    return a;
  }

  ServerDef parse_server_def() {
    ServerDef def;
    def.line = cur().line;
    def.col = cur().col;
    expect(Tok::KwServer, "server definition");
    expect(Tok::Colon, "':' after server");
    def.name = expect(Tok::Ident, "server name").text;
    expect(Tok::LParen, "'(' opening formal parameters");
    expect(Tok::KwAgents, "agents formal list");
    def.formal_agents = parse_decl_list(Tok::Semi);
    expect(Tok::Semi, "';' between agents and servers formals");
    expect(Tok::KwServers, "servers formal list");
    def.formal_servers = parse_decl_list(Tok::RParen);
    expect(Tok::RParen, "')' closing formal parameters");
    expect(Tok::Comma, "',' after server header");
    expect(Tok::KwServices, "services declaration");
    expect(Tok::LBrace, "'{' opening services");
    def.services = parse_decl_list(Tok::RBrace);
    expect(Tok::RBrace, "'}' closing services");
    expect(Tok::Comma, "',' after services");
    expect(Tok::KwStates, "states declaration");
    expect(Tok::LBrace, "'{' opening states");
    def.states = parse_decl_list(Tok::RBrace);
    expect(Tok::RBrace, "'}' closing states");
    expect(Tok::Comma, "',' after states");
    expect(Tok::KwActions, "actions block");
    expect(Tok::LBrace, "'{' opening actions");
    while (!failed_ && !at(Tok::RBrace)) {
      def.actions.push_back(parse_action());
    }
    expect(Tok::RBrace, "'}' closing actions");
    return def;
  }

  ActualArg parse_actual() {
    ActualArg a;
    Token t = expect(Tok::Ident, "actual parameter name");
    a.name = t.text;
    a.line = t.line;
    a.col = t.col;
    if (!at(Tok::LBracket)) return a;
    next();
    Expr first = parse_expr();
    if (at(Tok::DotDot)) {
      next();
      a.kind = ActualArg::Kind::Range;
      a.indexes.push_back(std::move(first));
      a.indexes.push_back(parse_expr());
    } else if (at(Tok::Comma)) {
      a.kind = ActualArg::Kind::List;
      a.indexes.push_back(std::move(first));
      while (at(Tok::Comma)) {
        next();
        a.indexes.push_back(parse_expr());
      }
    } else {
      a.kind = ActualArg::Kind::Index;
      a.indexes.push_back(std::move(first));
    }
    expect(Tok::RBracket, "']' closing actual parameter");
    return a;
  }

  InitItem parse_init_item() {
    InitItem item;
    item.line = cur().line;
    item.col = cur().col;
    item.quantifiers = parse_quantifiers();
    SymRef first = parse_sym_ref();
    if (at(Tok::LParen)) {
      InitInstantiation inst;
      inst.instance = std::move(first);
      next();
      while (!failed_) {
        inst.actuals.push_back(parse_actual());
        if (at(Tok::Comma)) {
          next();
          continue;
        }
        break;
      }
      expect(Tok::RParen, "')' closing actual parameters");
      expect(Tok::Dot, "'.' before initial state");
      inst.initial_state = parse_sym_ref();
      item.item = std::move(inst);
    } else {
      item.item = InitMessage{parse_msg_ref_from(std::move(first))};
    }
    expect(Tok::Comma, "',' after init item");
    return item;
  }

  std::vector<Token> toks_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
  bool failed_ = false;
};

}  // namespace

ParseResult parse_spec(std::string_view text) {
  ParseResult result;
  Lexer lexer(text, result.diagnostics);
  std::vector<Token> toks = lexer.run();
  if (!result.diagnostics.ok()) return result;
  Parser parser(std::move(toks), result.diagnostics);
  result.spec = parser.run();
  if (!result.diagnostics.ok()) result.spec.reset();
  return result;
}

}  // namespace imds::lang
