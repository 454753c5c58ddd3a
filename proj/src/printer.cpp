#include "imds/parser.hpp"

#include <sstream>

namespace imds::lang {
namespace {

void print_expr(std::ostringstream& os, const Expr& e) {
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    const Expr::Term& t = e.terms[i];
    if (i > 0) os << (t.sign < 0 ? "-" : "+");
    if (t.var)
      os << *t.var;
    else
      os << t.value;
  }
}

void print_sym(std::ostringstream& os, const SymRef& s) {
  os << s.name;
  if (s.index) {
    os << '[';
    print_expr(os, *s.index);
    os << ']';
  }
}

void print_msg(std::ostringstream& os, const MsgRef& m) {
  print_sym(os, m.agent);
  os << '.';
  print_sym(os, m.server);
  os << '.';
  print_sym(os, m.service);
}

void print_state(std::ostringstream& os, const StateRef& s) {
  print_sym(os, s.server);
  os << '.';
  print_sym(os, s.state);
}

void print_decl(std::ostringstream& os, const Decl& d) {
  os << d.name;
  if (d.size) {
    os << '[';
    print_expr(os, *d.size);
    os << ']';
  }
}

void print_decl_list(std::ostringstream& os, const std::vector<Decl>& ds) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i > 0) os << ", ";
    print_decl(os, ds[i]);
  }
}

void print_quantifiers(std::ostringstream& os, const std::vector<Quantifier>& qs) {
  for (const Quantifier& q : qs) {
    os << '<' << q.var << '=';
    print_expr(os, q.lo);
    os << "..";
    print_expr(os, q.hi);
    os << '>';
  }
}

}  // namespace

std::string pretty_print(const Expr& expr) {
  std::ostringstream os;
  print_expr(os, expr);
  return os.str();
}

std::string pretty_print(const RawSpec& spec) {
  std::ostringstream os;
  for (const auto& [name, value] : spec.defines) {
    os << "#DEFINE " << name << ' ' << value << '\n';
  }
  if (!spec.defines.empty()) os << '\n';
  for (const ServerDef& def : spec.server_defs) {
    os << "server: " << def.name << "(agents ";
    print_decl_list(os, def.formal_agents);
    os << "; servers ";
    print_decl_list(os, def.formal_servers);
    os << "),\n";
    os << "services {";
    print_decl_list(os, def.services);
    os << "},\n";
    os << "states {";
    print_decl_list(os, def.states);
    os << "},\n";
    os << "actions {\n";
    for (const ActionTemplate& a : def.actions) {
      print_quantifiers(os, a.quantifiers);
      if (!a.quantifiers.empty()) os << ' ';
      os << '{';
      print_msg(os, a.in_msg);
      os << ", ";
      print_state(os, a.in_state);
      os << "} -> {";
      if (a.out_msg) {
        print_msg(os, *a.out_msg);
        os << ", ";
      }
      print_state(os, a.out_state);
      os << "},\n";
    }
    os << "}\n\n";
  }
  os << "servers ";
  print_decl_list(os, spec.global_servers);
  os << ";\n";
  os << "agents ";
  print_decl_list(os, spec.global_agents);
  os << ";\n\n";
  os << "init -> {\n";
  for (const InitItem& item : spec.init_items) {
    print_quantifiers(os, item.quantifiers);
    if (!item.quantifiers.empty()) os << ' ';
    if (const auto* inst = std::get_if<InitInstantiation>(&item.item)) {
      print_sym(os, inst->instance);
      os << '(';
      for (std::size_t i = 0; i < inst->actuals.size(); ++i) {
        if (i > 0) os << ", ";
        const ActualArg& a = inst->actuals[i];
        os << a.name;
        if (a.kind == ActualArg::Kind::Index) {
          os << '[';
          print_expr(os, a.indexes[0]);
          os << ']';
        } else if (a.kind == ActualArg::Kind::Range) {
          os << '[';
          print_expr(os, a.indexes[0]);
          os << "..";
          print_expr(os, a.indexes[1]);
          os << ']';
        } else if (a.kind == ActualArg::Kind::List) {
          os << '[';
          for (std::size_t k = 0; k < a.indexes.size(); ++k) {
            if (k > 0) os << ',';
            print_expr(os, a.indexes[k]);
          }
          os << ']';
        }
      }
      os << ").";
      print_sym(os, inst->initial_state);
    } else {
      print_msg(os, std::get<InitMessage>(item.item).msg);
    }
    os << ",\n";
  }
  os << "}.\n";
  return os.str();
}

}  // namespace imds::lang
