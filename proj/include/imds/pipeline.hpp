#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imds/lts.hpp"

namespace imds {

/// One full verification run: parse, expand, validate, explore, check.
struct RunConfig {
  std::string input;                             // spec file path (or display name)
  std::uint64_t node_limit = kDefaultNodeLimit;  // exploration cap
  std::vector<std::string> terminate;            // agent names; empty skips the check
  std::string report_path;                       // write the report here when non-empty
  bool json = false;                             // report format: text or json
};

struct RunResult {
  /// 0 all requested properties hold, 1 some violated, 2 tool error.
  int exit_code = 0;
  std::string report;       // empty on tool errors
  std::string diagnostics;  // parser/expander/validator messages, for stderr
};

/// Runs the checks on a spec file. Never throws; failures turn into exit
/// code 2 with the cause in diagnostics. The deadlock-free CTL verdict is
/// reported but does not influence the exit code; a terminated system fails
/// AG EX true without being broken.
RunResult run_check(const RunConfig& cfg);

/// Same pipeline on an in-memory spec; cfg.input is used as display name
/// and cfg.report_path is ignored.
RunResult run_check_on_text(const RunConfig& cfg, const std::string& spec_text);

/// Renders every witness found in a JSON report (or bare witness object) as
/// a sequence diagram. Throws Error subclasses on malformed input.
std::string render_witness_file(const std::string& witness_json, const std::string& spec_text,
                                const std::string& spec_name);

}  // namespace imds
