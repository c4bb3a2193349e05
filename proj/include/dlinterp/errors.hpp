#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlinterp {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset(offset) {}
  std::size_t offset;
};

// Input valid syntactically but not in the selected dialect.
struct DialectError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured search budget ran out. Never treated as a verdict.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A separator was requested for a set some completion mosaic of which
// survives elimination.
struct NoSeparator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A postcondition the construction guarantees did not hold.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace dlinterp
