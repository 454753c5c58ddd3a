#pragma once

#include <string>
#include <vector>

#include "imds/report.hpp"
#include "imds/system_spec.hpp"

namespace imds {

// Message sequence chart of one trace. Lanes hold agents first, then server
// instances, in declaration order.
struct SequenceDiagram {
  struct Event {
    int index = 0;  // 1-based position in the trace
    int agent_lane = -1;
    int server_lane = -1;
    std::string service;
    std::string from_state;
    std::string to_state;
    bool terminating = false;
    bool in_cycle = false;
  };

  std::vector<std::string> lanes;
  std::vector<Event> events;
  std::string footer;  // final annotation: deadlock, termination, or empty
};

// Replays the trace from the initial configuration and lays the steps out as
// events. Throws InvalidTrace when a step is not enabled where the trace
// claims it runs.
SequenceDiagram make_sequence_diagram(const SystemSpec& sys, const ResolvedTrace& trace);

// Fixed-column plain-text rendering, byte-stable for golden tests.
std::string render_sequence_diagram(const SequenceDiagram& d);

}  // namespace imds
