#include "imds/diagram.hpp"

#include <algorithm>
#include <stdexcept>

#include "imds/config.hpp"
#include "imds/errors.hpp"

namespace imds {

SequenceDiagram make_sequence_diagram(const SystemSpec& sys, const ResolvedTrace& trace) {
  SequenceDiagram d;
  for (const std::string& a : sys.agent_names) d.lanes.push_back(a);
  for (const SystemSpec::ServerInstance& s : sys.servers) d.lanes.push_back(s.name);

  Configuration cfg = initial_configuration(sys);
  int index = 0;
  auto replay = [&](const std::vector<ActionId>& actions, bool in_cycle) {
    for (ActionId id : actions) {
      if (id < 0 || id >= static_cast<ActionId>(sys.actions.size()))
        throw InvalidTrace("step " + std::to_string(index + 1) + ": action out of range");
      const SystemSpec::GroundAction& a = sys.actions[id];
      SequenceDiagram::Event ev;
      ev.index = ++index;
      ev.agent_lane = a.in_msg.agent;
      ev.server_lane = static_cast<int>(sys.agent_names.size()) + a.in_msg.server;
      ev.service = sys.service_name(a.in_msg.server, a.in_msg.service);
      ev.from_state = sys.state_name(a.in_msg.server, a.in_state);
      ev.to_state = sys.state_name(a.in_msg.server, a.out_state);
      ev.terminating = a.terminating;
      ev.in_cycle = in_cycle;
      try {
        cfg = apply_action(sys, cfg, id);
      } catch (const std::logic_error&) {
        throw InvalidTrace("step " + std::to_string(index) + ": action is not enabled");
      }
      d.events.push_back(std::move(ev));
    }
  };
  replay(trace.prefix, false);
  Configuration at_entry = cfg;
  replay(trace.cycle, true);
  if (trace.kind == Counterexample::Kind::Lasso) {
    if (trace.cycle.empty()) throw InvalidTrace("lasso trace without a cycle");
    if (!(cfg == at_entry)) throw InvalidTrace("cycle does not return to its entry state");
  } else if (enabled_actions(sys, cfg).empty()) {
    if (cfg.all_terminated()) {
      d.footer = "all agents terminated";
    } else {
      d.footer = "deadlock:";
      for (AgentId a = 0; a < static_cast<AgentId>(sys.agent_names.size()); ++a) {
        if (a > 0) d.footer += ";";
        if (cfg.terminated(a)) {
          d.footer += " " + sys.agent_names[a] + " terminated";
        } else {
          Message m = cfg.message(a);
          d.footer += " " + sys.agent_names[a] + " waits for " + sys.servers[m.server].name +
                      "." + sys.service_name(m.server, m.service);
        }
      }
    }
  }
  return d;
}

std::string render_sequence_diagram(const SequenceDiagram& d) {
  const int lanes = static_cast<int>(d.lanes.size());
  std::size_t longest = 0;
  for (const std::string& l : d.lanes) longest = std::max(longest, l.size());
  const int width = std::max<int>(10, static_cast<int>(longest) + 2);

  int digits = 1;
  for (std::size_t n = d.events.size(); n >= 10; n /= 10) digits++;
  const std::string margin(digits + 2, ' ');

  auto center = [&](int lane) { return lane * width + width / 2; };
  auto lane_row = [&](const std::vector<char>& alive) {
    std::string row(static_cast<std::size_t>(lanes) * width, ' ');
    for (int l = 0; l < lanes; ++l)
      if (alive[l]) row[center(l)] = '|';
    return row;
  };
  auto trim = [](std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  };

  std::string out;
  {
    std::string header(static_cast<std::size_t>(lanes) * width, ' ');
    for (int l = 0; l < lanes; ++l) {
      int at = l * width + (width - static_cast<int>(d.lanes[l].size())) / 2;
      header.replace(at, d.lanes[l].size(), d.lanes[l]);
    }
    out += margin + trim(header) + "\n";
  }
  std::vector<char> alive(lanes, 1);
  out += margin + trim(lane_row(alive)) + "\n";

  bool cycle_open = false;
  for (const SequenceDiagram::Event& ev : d.events) {
    if (ev.in_cycle && !cycle_open) {
      out += margin + "-- cycle --\n";
      cycle_open = true;
    }
    std::string row = lane_row(alive);
    int ca = center(ev.agent_lane), cs = center(ev.server_lane);
    if (ca < cs) {
      for (int p = ca + 1; p < cs; ++p) row[p] = '-';
      row[cs] = '>';
    } else {
      for (int p = cs + 1; p < ca; ++p) row[p] = '-';
      row[cs] = '<';
    }
    std::string idx = std::to_string(ev.index);
    out += std::string(digits - idx.size(), ' ') + idx + ". " + row + "  " + ev.service +
           "  " + ev.from_state + " -> " + ev.to_state;
    if (ev.terminating) out += ", terminates";
    out += "\n";
    if (ev.terminating) alive[ev.agent_lane] = 0;
  }
  if (cycle_open) out += margin + "-- cycle repeats --\n";
  if (!d.footer.empty()) out += margin + "-- " + d.footer + " --\n";
  return out;
}

}  // namespace imds
