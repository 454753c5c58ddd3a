#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "imds/ast.hpp"
#include "imds/diagnostics.hpp"

namespace imds::lang {

struct ParseResult {
  std::optional<RawSpec> spec;  // present iff diagnostics carries no errors
  Diagnostics diagnostics;
};

/// Parse specification source text. Collects diagnostics instead of throwing;
/// on a syntax error the spec is absent.
ParseResult parse_spec(std::string_view text);

/// Canonical source rendering of a syntax tree. parse_spec(pretty_print(s))
/// yields a structurally equal tree (comments are not preserved).
std::string pretty_print(const RawSpec& spec);

std::string pretty_print(const Expr& expr);

}  // namespace imds::lang
