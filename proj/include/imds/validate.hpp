#pragma once

#include "imds/diagnostics.hpp"
#include "imds/system_spec.hpp"

namespace imds {

/// Static checks over the ground system. Errors (spec rejected): references
/// to undeclared services or states, agents without exactly one initial
/// message, server instances without exactly one initial state. Warnings:
/// services never sent or never consumed, states never produced, agents that
/// can never terminate (syntactic message-flow closure).
Diagnostics validate_spec(const SystemSpec& sys);

}  // namespace imds
