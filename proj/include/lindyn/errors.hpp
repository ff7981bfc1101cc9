#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lindyn {

// Error taxonomy. Everything thrown by the library derives from Error so the
// CLI can map failures onto its exit-code contract.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input (rationals, vectors, configs read from text).
struct ParseError : Error {
  using Error::Error;
};

// Precondition violations: index outside the operator's domain, negative
// tolerance, mismatched index domains, infeasible certificate parameters.
struct DomainError : Error {
  using Error::Error;
};

// Operator lacks a capability a construction needs (no inverse, no
// contracting right inverse, no hyperbolic splitting, no certified norm 1).
struct CapabilityError : Error {
  using Error::Error;
};

// A claimed chain failed validation; carries the offending step.
struct ChainError : Error {
  std::size_t step;
  ChainError(std::size_t step_, const std::string& what_)
      : Error(what_), step(step_) {}
};

// A claimed pseudo-orbit failed validation; carries the offending index.
struct PseudoOrbitError : Error {
  std::size_t index;
  PseudoOrbitError(std::size_t index_, const std::string& what_)
      : Error(what_), index(index_) {}
};

// A constructed certificate failed one of its own checks.
struct CertificateError : Error {
  using Error::Error;
};

// Configuration-level problems (bad JSON, unknown command, missing field).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace lindyn
