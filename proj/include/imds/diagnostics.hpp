#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace imds {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  int line = 0;  // 1-based; 0 when no source position applies
  int col = 0;
  std::string message;
};

/// Ordered list of problems found by the parser, expander or validator.
struct Diagnostics {
  std::vector<Diagnostic> items;

  bool ok() const { return error_count() == 0; }
  std::size_t error_count() const;
  std::size_t warning_count() const;

  void error(int line, int col, std::string message);
  void warning(int line, int col, std::string message);
  void append(const Diagnostics& other);

  /// One "file:line:col: severity: message" line per item.
  std::string to_string(const std::string& file = "<input>") const;
};

}  // namespace imds
