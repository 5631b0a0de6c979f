#pragma once

#include <stdexcept>
#include <string>

namespace qdisc {

// A computation was declined rather than attempted: size guards exceeded,
// division undecidable in the given presentation, unsupported input class.
// The CLI maps this to exit code 1.
class refusal_error : public std::runtime_error {
 public:
  explicit refusal_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input (algebra files, presentations, flags).
// CLI exit code 2.
class spec_error : public std::runtime_error {
 public:
  explicit spec_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant failed (trace sparsity pattern, center relation
// verification, chart disagreement).  Indicates a bug, not bad input.
// CLI exit code 3.
class internal_check_error : public std::logic_error {
 public:
  explicit internal_check_error(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace qdisc
