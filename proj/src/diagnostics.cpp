#include "imds/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace imds {

std::size_t Diagnostics::error_count() const {
  return std::count_if(items.begin(), items.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::size_t Diagnostics::warning_count() const { return items.size() - error_count(); }

void Diagnostics::error(int line, int col, std::string message) {
  items.push_back({Severity::Error, line, col, std::move(message)});
}

void Diagnostics::warning(int line, int col, std::string message) {
  items.push_back({Severity::Warning, line, col, std::move(message)});
}

void Diagnostics::append(const Diagnostics& other) {
  items.insert(items.end(), other.items.begin(), other.items.end());
}

std::string Diagnostics::to_string(const std::string& file) const {
  std::ostringstream os;
  for (const Diagnostic& d : items) {
    os << file << ':' << d.line << ':' << d.col << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message << '\n';
  }
  return os.str();
}

}  // namespace imds
