#pragma once

#include <optional>

#include "imds/ast.hpp"
#include "imds/diagnostics.hpp"
#include "imds/system_spec.hpp"

namespace imds::lang {

struct ExpandResult {
  std::optional<SystemSpec> system;  // present iff diagnostics carries no errors
  Diagnostics diagnostics;
};

/// Ground a syntax tree: substitute defined constants, expand arrays and
/// quantifiers (cartesian, ascending, left-to-right), evaluate index
/// arithmetic and bind formal parameters to the instances named in the init
/// block. Deterministic: equal inputs give identical action order.
ExpandResult expand_spec(const RawSpec& raw);

}  // namespace imds::lang
