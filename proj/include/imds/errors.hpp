#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace imds {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reachability exploration hit the node limit before exhausting the graph.
class StateSpaceExceeded : public Error {
public:
  StateSpaceExceeded(std::uint64_t limit, std::uint64_t discovered, std::uint64_t frontier)
      : Error("state space exceeds " + std::to_string(limit) + " nodes (" +
              std::to_string(discovered) + " discovered, frontier size " +
              std::to_string(frontier) + ")"),
        limit(limit), nodes_discovered(discovered), frontier_size(frontier) {}

  std::uint64_t limit;
  std::uint64_t nodes_discovered;
  std::uint64_t frontier_size;
};

/// A verifier was handed a transition system that is not fully explored.
class TruncatedLts : public Error {
public:
  TruncatedLts() : Error("transition system is truncated; verification needs a complete graph") {}
};

/// extract_trace was asked for a node that is not reachable from the initial node.
class UnreachableTarget : public Error {
public:
  using Error::Error;
};

/// classify_deadlock was handed a counterexample without blocked agents.
class NotADeadlockWitness : public Error {
public:
  using Error::Error;
};

/// A trace to render does not replay against the given system.
class InvalidTrace : public Error {
public:
  using Error::Error;
};

/// The environment graph is not the quadrant layout required by rotation utilities.
class UnsupportedTopology : public Error {
public:
  using Error::Error;
};

/// No graph automorphism maps the route start onto the requested chamber.
class NoAutomorphism : public Error {
public:
  using Error::Error;
};

/// Route generation found no path satisfying the request.
class NoRouteExists : public Error {
public:
  using Error::Error;
};

/// Sub-route fragments do not join end-to-start.
class DiscontinuousFragments : public Error {
public:
  using Error::Error;
};

/// A cyclic route cannot be split because its cycle avoids the anchor chambers.
class UnanchorableCycle : public Error {
public:
  using Error::Error;
};

/// Route-to-system compilation failed.
class CompileError : public Error {
public:
  using Error::Error;
};

/// Internal guard: an occupancy count would drop below zero.
class CapacityUnderflow : public CompileError {
public:
  using CompileError::CompileError;
};

/// Robot or chamber names collide.
class NameCollision : public CompileError {
public:
  using CompileError::CompileError;
};

}  // namespace imds
