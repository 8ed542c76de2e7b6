#pragma once

#include <stdexcept>
#include <string>

namespace icsem {

// Shape or factor-structure disagreement between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input violates a mathematical precondition (not CP, not pure, not unbiased...).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Diagram does not type-check against its scenario.
class TypingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structural graph problem (cycle, unknown node, incompatible scenario).
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Enumeration refused because the worst-case matching count exceeds the cap.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(double bound, double cap)
      : std::runtime_error("enumeration cap exceeded: worst-case matching count " +
                           std::to_string(bound) + " > cap " + std::to_string(cap)),
        bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

// Malformed input document (JSON files fed to the CLI).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace icsem
