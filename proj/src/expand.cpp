#include "imds/expand.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace imds::lang {
namespace {

constexpr long kMaxSize = 64;  // cap for define values and array sizes

using Env = std::map<std::string, long>;

std::string indexed(const std::string& base, long i) {
  return base + "[" + std::to_string(i) + "]";
}

class Expander {
public:
  explicit Expander(const RawSpec& raw) : raw_(raw) {}

  ExpandResult run() {
    collect_defines();
    collect_defs();
    declare_instances();
    if (!diags_.ok()) return finish();
    process_init();
    if (!diags_.ok()) return finish();
    ground_actions();
    return finish();
  }

private:
  struct Binding {
    std::map<std::string, AgentId> agents;    // formal slot name -> agent
    std::map<std::string, ServerId> servers;  // formal slot name -> instance
  };

  ExpandResult finish() {
    ExpandResult r;
    r.diagnostics = diags_;
    if (diags_.ok()) {
      sys_.finalize();
      r.system = std::move(sys_);
    }
    return r;
  }

  // ---- constants and expressions ----

  void collect_defines() {
    for (const auto& [name, value] : raw_.defines) {
      if (defines_.count(name)) {
        diags_.error(0, 0, "constant " + name + " defined twice");
        continue;
      }
      if (value < 0 || value > kMaxSize) {
        diags_.error(0, 0, "constant " + name + " = " + std::to_string(value) +
                               " outside supported range 0.." + std::to_string(kMaxSize));
        continue;
      }
      defines_[name] = value;
    }
  }

  std::optional<long> eval(const Expr& e, const Env& env, int line, int col) {
    long total = 0;
    for (const Expr::Term& t : e.terms) {
      long v;
      if (t.var) {
        auto it = env.find(*t.var);
        if (it != env.end()) {
          v = it->second;
        } else {
          auto dit = defines_.find(*t.var);
          if (dit == defines_.end()) {
            diags_.error(line, col, "unknown name " + *t.var + " in index expression");
            return std::nullopt;
          }
          v = dit->second;
        }
      } else {
        v = t.value;
      }
      total += t.sign * v;
    }
    return total;
  }

  std::optional<long> eval_size(const std::optional<Expr>& size, int line, int col) {
    if (!size) return 1;
    auto v = eval(*size, {}, line, col);
    if (!v) return std::nullopt;
    if (*v < 1 || *v > kMaxSize) {
      diags_.error(line, col, "array size " + std::to_string(*v) +
                                  " outside supported range 1.." + std::to_string(kMaxSize));
      return std::nullopt;
    }
    return v;
  }

  /// Ground name of a possibly indexed reference under the environment.
  std::optional<std::string> ground_name(const SymRef& s, const Env& env) {
    if (!s.index) return s.name;
    auto v = eval(*s.index, env, s.line, s.col);
    if (!v) return std::nullopt;
    return indexed(s.name, *v);
  }

  // ---- declarations ----

  void collect_defs() {
    for (const ServerDef& def : raw_.server_defs) {
      if (defs_.count(def.name)) {
        diags_.error(def.line, def.col, "server " + def.name + " defined twice");
        continue;
      }
      defs_[def.name] = &def;
    }
  }

  /// Expand a declaration list to ground names: X -> X, X[n] -> X[1]..X[n].
  std::vector<std::string> expand_decls(const std::vector<Decl>& decls) {
    std::vector<std::string> out;
    for (const Decl& d : decls) {
      if (!d.size) {
        out.push_back(d.name);
        continue;
      }
      auto n = eval_size(d.size, d.line, d.col);
      if (!n) continue;
      for (long i = 1; i <= *n; ++i) out.push_back(indexed(d.name, i));
    }
    return out;
  }

  void declare_instances() {
    for (const Decl& d : raw_.global_agents) {
      for (std::string& name : expand_decls({d})) {
        if (sys_.agent_id(name) >= 0) {
          diags_.error(d.line, d.col, "agent " + name + " declared twice");
          continue;
        }
        agent_ids_[name] = static_cast<AgentId>(sys_.agent_names.size());
        sys_.agent_names.push_back(std::move(name));
      }
    }
    if (sys_.agent_names.size() > kMaxSize) {
      const Decl& d = raw_.global_agents.front();
      diags_.error(d.line, d.col,
                   "too many agents: " + std::to_string(sys_.agent_names.size()) +
                       ", limit " + std::to_string(kMaxSize));
    }
    for (const Decl& d : raw_.global_servers) {
      auto it = defs_.find(d.name);
      if (it == defs_.end()) {
        diags_.error(d.line, d.col, "server " + d.name + " has no definition");
        continue;
      }
      const ServerDef* def = it->second;
      for (std::string& name : expand_decls({d})) {
        if (server_ids_.count(name)) {
          diags_.error(d.line, d.col, "server " + name + " declared twice");
          continue;
        }
        SystemSpec::ServerInstance inst;
        inst.name = name;
        inst.def_name = def->name;
        inst.service_names = expand_decls(def->services);
        inst.declared_services = inst.service_names.size();
        inst.state_names = expand_decls(def->states);
        inst.declared_states = inst.state_names.size();
        server_ids_[name] = static_cast<ServerId>(sys_.servers.size());
        instance_defs_.push_back(def);
        bindings_.emplace_back();
        sys_.servers.push_back(std::move(inst));
      }
    }
  }

  // ---- interning of referenced-but-undeclared names (validate reports them) ----

  ServiceId intern_service(ServerId s, const std::string& name) {
    ServiceId id = sys_.service_id(s, name);
    if (id >= 0) return id;
    sys_.servers[s].service_names.push_back(name);
    return static_cast<ServiceId>(sys_.servers[s].service_names.size() - 1);
  }

  StateId intern_state(ServerId s, const std::string& name) {
    StateId id = sys_.state_id(s, name);
    if (id >= 0) return id;
    sys_.servers[s].state_names.push_back(name);
    return static_cast<StateId>(sys_.servers[s].state_names.size() - 1);
  }

  /// Bounds check for indexed references against the declaring list. The
  /// unindexed/undeclared cases fall through to validate_spec.
  bool check_bounds(const std::vector<Decl>& decls, const SymRef& ref, const Env& env) {
    if (!ref.index) return true;
    for (const Decl& d : decls) {
      if (d.name != ref.name) continue;
      auto size = d.size ? eval_size(d.size, d.line, d.col) : std::optional<long>(1);
      auto v = eval(*ref.index, env, ref.line, ref.col);
      if (!size || !v) return false;
      if (*v < 1 || *v > *size) {
        diags_.error(ref.line, ref.col,
                     "index " + std::to_string(*v) + " of " + ref.name +
                         " outside declared bounds 1.." + std::to_string(*size));
        return false;
      }
      return true;
    }
    return true;
  }

  // ---- quantifier environments ----

  bool foreach_env(const std::vector<Quantifier>& qs, const Env& outer,
                   const std::function<void(const Env&)>& body) {
    if (qs.empty()) {
      body(outer);
      return true;
    }
    std::vector<std::pair<long, long>> ranges;
    Env probe = outer;
    for (const Quantifier& q : qs) {
      auto lo = eval(q.lo, probe, q.line, q.col);
      auto hi = eval(q.hi, probe, q.line, q.col);
      if (!lo || !hi) return false;
      if (*hi < *lo) {
        diags_.error(q.line, q.col, "quantifier range " + std::to_string(*lo) + ".." +
                                        std::to_string(*hi) + " is empty or reversed");
        return false;
      }
      ranges.emplace_back(*lo, *hi);
      probe[q.var] = *lo;  // later bounds may reference earlier variables
    }
    std::vector<long> vals;
    for (auto& [lo, hi] : ranges) vals.push_back(lo);
    while (true) {
      Env env = outer;
      for (std::size_t i = 0; i < qs.size(); ++i) env[qs[i].var] = vals[i];
      body(env);
      std::size_t i = qs.size();
      while (i > 0) {
        --i;
        if (vals[i] < ranges[i].second) {
          ++vals[i];
          for (std::size_t j = i + 1; j < qs.size(); ++j) vals[j] = ranges[j].first;
          break;
        }
        if (i == 0) return true;
      }
    }
  }

  // ---- init block ----

  std::optional<std::vector<std::string>> expand_actual(const ActualArg& a, const Env& env) {
    std::vector<std::string> out;
    switch (a.kind) {
      case ActualArg::Kind::Plain:
        out.push_back(a.name);
        break;
      case ActualArg::Kind::Index: {
        auto v = eval(a.indexes[0], env, a.line, a.col);
        if (!v) return std::nullopt;
        out.push_back(indexed(a.name, *v));
        break;
      }
      case ActualArg::Kind::Range: {
        auto lo = eval(a.indexes[0], env, a.line, a.col);
        auto hi = eval(a.indexes[1], env, a.line, a.col);
        if (!lo || !hi) return std::nullopt;
        if (*hi < *lo) {
          diags_.error(a.line, a.col, "actual range is empty or reversed");
          return std::nullopt;
        }
        for (long i = *lo; i <= *hi; ++i) out.push_back(indexed(a.name, i));
        break;
      }
      case ActualArg::Kind::List:
        for (const Expr& e : a.indexes) {
          auto v = eval(e, env, a.line, a.col);
          if (!v) return std::nullopt;
          out.push_back(indexed(a.name, *v));
        }
        break;
    }
    return out;
  }

  void process_instantiation(const InitInstantiation& inst, const Env& env, int line, int col) {
    auto name = ground_name(inst.instance, env);
    if (!name) return;
    auto it = server_ids_.find(*name);
    if (it == server_ids_.end()) {
      diags_.error(inst.instance.line, inst.instance.col,
                   "server instance " + *name + " is not declared");
      return;
    }
    ServerId sid = it->second;
    const ServerDef* def = instance_defs_[sid];

    std::vector<std::string> actuals;
    for (const ActualArg& a : inst.actuals) {
      auto part = expand_actual(a, env);
      if (!part) return;
      actuals.insert(actuals.end(), part->begin(), part->end());
    }
    std::vector<std::string> agent_formals = expand_decls(def->formal_agents);
    std::vector<std::string> server_formals = expand_decls(def->formal_servers);
    if (actuals.size() != agent_formals.size() + server_formals.size()) {
      diags_.error(line, col,
                   "instantiation of " + *name + " passes " + std::to_string(actuals.size()) +
                       " actual parameters, definition " + def->name + " expects " +
                       std::to_string(agent_formals.size() + server_formals.size()));
      return;
    }
    Binding b;
    for (std::size_t i = 0; i < agent_formals.size(); ++i) {
      auto ait = agent_ids_.find(actuals[i]);
      if (ait == agent_ids_.end()) {
        diags_.error(line, col, "unknown agent " + actuals[i] + " in instantiation of " + *name);
        return;
      }
      b.agents[agent_formals[i]] = ait->second;
    }
    for (std::size_t i = 0; i < server_formals.size(); ++i) {
      const std::string& actual = actuals[agent_formals.size() + i];
      auto sit = server_ids_.find(actual);
      if (sit == server_ids_.end()) {
        diags_.error(line, col, "unknown server " + actual + " in instantiation of " + *name);
        return;
      }
      b.servers[server_formals[i]] = sit->second;
    }
    auto state = ground_name(inst.initial_state, env);
    if (!state) return;
    StateId q = sys_.state_id(sid, *state);
    if (q < 0 || static_cast<std::size_t>(q) >= sys_.servers[sid].declared_states) {
      diags_.error(inst.initial_state.line, inst.initial_state.col,
                   "unknown initial state " + *state + " of server " + *name);
      return;
    }
    SystemSpec::ServerInstance& si = sys_.servers[sid];
    si.instantiation_count += 1;
    if (si.instantiation_count == 1) {
      si.initial_state = q;
      bindings_[sid] = std::move(b);
    }
  }

  void process_message(const InitMessage& im, const Env& env) {
    const MsgRef& m = im.msg;
    auto agent = ground_name(m.agent, env);
    auto server = ground_name(m.server, env);
    auto service = ground_name(m.service, env);
    if (!agent || !server || !service) return;
    auto ait = agent_ids_.find(*agent);
    if (ait == agent_ids_.end()) {
      diags_.error(m.agent.line, m.agent.col, "unknown agent " + *agent + " in initial message");
      return;
    }
    auto sit = server_ids_.find(*server);
    if (sit == server_ids_.end()) {
      diags_.error(m.server.line, m.server.col, "unknown server " + *server + " in initial message");
      return;
    }
    ServiceId svc = intern_service(sit->second, *service);
    sys_.initial_messages.push_back(Message{ait->second, sit->second, svc});
  }

  void process_init() {
    for (const InitItem& item : raw_.init_items) {
      foreach_env(item.quantifiers, {}, [&](const Env& env) {
        if (const auto* inst = std::get_if<InitInstantiation>(&item.item))
          process_instantiation(*inst, env, item.line, item.col);
        else
          process_message(std::get<InitMessage>(item.item), env);
      });
    }
  }

  // ---- action grounding ----

  std::optional<AgentId> resolve_agent(const SymRef& ref, const Env& env, const Binding& b,
                                       const ServerDef& def) {
    if (!check_bounds(def.formal_agents, ref, env)) return std::nullopt;
    auto name = ground_name(ref, env);
    if (!name) return std::nullopt;
    auto it = b.agents.find(*name);
    if (it == b.agents.end()) {
      diags_.error(ref.line, ref.col,
                   *name + " is not an agent parameter of server " + def.name);
      return std::nullopt;
    }
    return it->second;
  }

  /// Server reference inside a definition: the definition's own name means
  /// the instance being expanded, otherwise a formal server parameter.
  std::optional<ServerId> resolve_server(const SymRef& ref, const Env& env, const Binding& b,
                                         const ServerDef& def, ServerId self) {
    if (ref.name == def.name) {
      if (ref.index) {
        diags_.error(ref.line, ref.col,
                     "reference to the defining server " + def.name + " takes no index");
        return std::nullopt;
      }
      return self;
    }
    if (!check_bounds(def.formal_servers, ref, env)) return std::nullopt;
    auto name = ground_name(ref, env);
    if (!name) return std::nullopt;
    auto it = b.servers.find(*name);
    if (it == b.servers.end()) {
      diags_.error(ref.line, ref.col,
                   *name + " is not a server parameter of server " + def.name);
      return std::nullopt;
    }
    return it->second;
  }

  void ground_template(const ActionTemplate& t, const Env& env, const ServerDef& def,
                       ServerId self, const Binding& b) {
    SystemSpec::GroundAction a;
    auto in_agent = resolve_agent(t.in_msg.agent, env, b, def);
    if (!in_agent) return;
    if (t.in_msg.server.name != def.name) {
      diags_.error(t.in_msg.server.line, t.in_msg.server.col,
                   "input message of a " + def.name + " action must name " + def.name);
      return;
    }
    if (!check_bounds(def.services, t.in_msg.service, env)) return;
    auto in_service = ground_name(t.in_msg.service, env);
    if (!in_service) return;
    a.in_msg = Message{*in_agent, self, intern_service(self, *in_service)};

    if (t.in_state.server.name != def.name) {
      diags_.error(t.in_state.server.line, t.in_state.server.col,
                   "input state of a " + def.name + " action must name " + def.name);
      return;
    }
    if (!check_bounds(def.states, t.in_state.state, env)) return;
    auto in_state = ground_name(t.in_state.state, env);
    if (!in_state) return;
    a.in_state = intern_state(self, *in_state);

    if (t.out_msg) {
      auto out_agent = resolve_agent(t.out_msg->agent, env, b, def);
      if (!out_agent) return;
      if (*out_agent != *in_agent) {
        diags_.error(t.out_msg->agent.line, t.out_msg->agent.col,
                     "output message must belong to the same agent as the input message");
        return;
      }
      auto target = resolve_server(t.out_msg->server, env, b, def, self);
      if (!target) return;
      const ServerDef* tdef = instance_defs_[*target];
      if (!check_bounds(tdef->services, t.out_msg->service, env)) return;
      auto out_service = ground_name(t.out_msg->service, env);
      if (!out_service) return;
      a.out_msg = Message{*out_agent, *target, intern_service(*target, *out_service)};
    } else {
      a.terminating = true;
    }

    if (t.out_state.server.name != def.name) {
      diags_.error(t.out_state.server.line, t.out_state.server.col,
                   "output state of a " + def.name + " action must name " + def.name);
      return;
    }
    if (!check_bounds(def.states, t.out_state.state, env)) return;
    auto out_state = ground_name(t.out_state.state, env);
    if (!out_state) return;
    a.out_state = intern_state(self, *out_state);

    sys_.actions.push_back(std::move(a));
  }

  void ground_actions() {
    for (ServerId sid = 0; sid < static_cast<ServerId>(sys_.servers.size()); ++sid) {
      if (sys_.servers[sid].instantiation_count == 0) continue;
      const ServerDef* def = instance_defs_[sid];
      const Binding& b = bindings_[sid];
      for (const ActionTemplate& t : def->actions) {
        foreach_env(t.quantifiers, {},
                    [&](const Env& env) { ground_template(t, env, *def, sid, b); });
      }
    }
  }

  const RawSpec& raw_;
  Diagnostics diags_;
  SystemSpec sys_;
  std::map<std::string, long> defines_;
  std::map<std::string, const ServerDef*> defs_;
  std::map<std::string, AgentId> agent_ids_;
  std::map<std::string, ServerId> server_ids_;
  std::vector<const ServerDef*> instance_defs_;
  std::vector<Binding> bindings_;
};

}  // namespace

ExpandResult expand_spec(const RawSpec& raw) { return Expander(raw).run(); }

}  // namespace imds::lang
